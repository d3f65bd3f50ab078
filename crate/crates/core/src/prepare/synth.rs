use serde::Serialize;

use super::angles::AngleTable;
use crate::quantum::{Circuit, Gate};
use crate::{Error, Result};

/// One `Ry` on qubit 0, then for each level `m >= 1` a rotation on qubit `m`
/// multiplexed by qubits `0..m`, whose angle for control value `i` is the
/// level-`m` angle of region `i`.
pub fn synthesize(angles: &AngleTable) -> Result<Circuit> {
    let n = angles.num_qubits();
    let mut circuit = Circuit::new(n)?;
    for (m, level) in angles.levels().iter().enumerate() {
        let gate = if m == 0 {
            Gate::Ry {
                target: 0,
                angle: level[0],
            }
        } else {
            Gate::MultiplexedRy {
                target: m,
                controls: (0..m).collect(),
                angles: level.clone(),
            }
        };
        circuit.push(gate)?;
    }
    Ok(circuit)
}

/// In-place fast Walsh-Hadamard transform (unnormalized).
fn fwht(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for block in (0..v.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Lowers a multiplexed `Ry` with `k` controls to `2^k` single-qubit `Ry`
/// gates interleaved with `2^k` CNOTs along a Gray-code walk of the control
/// values. Any other gate is returned unchanged.
///
/// Rotation `j` is applied while the target has been flipped by the parity
/// `c · g_j` of the control value `c` against Gray code `g_j`, so the net
/// angle seen by `c` is `Σ_j (-1)^{c·g_j} φ_j`; choosing
/// `φ_j = 2^{-k} (Wθ)_{g_j}` with `W` the Walsh-Hadamard matrix makes that
/// equal to `θ_c`.
pub fn decompose_multiplexed(gate: &Gate) -> Result<Vec<Gate>> {
    let Gate::MultiplexedRy {
        target,
        controls,
        angles,
    } = gate
    else {
        return Ok(vec![gate.clone()]);
    };
    let k = controls.len();
    if angles.len() != 1 << k {
        return Err(Error::domain(format!(
            "multiplexed rotation with {k} controls needs 2^{k} angles, got {}",
            angles.len()
        )));
    }
    if k == 0 {
        return Ok(vec![Gate::Ry {
            target: *target,
            angle: angles[0],
        }]);
    }
    let mut w = angles.clone();
    fwht(&mut w);
    let scale = (k as f64).exp2().recip();
    let count = 1usize << k;
    let gray = |j: usize| j ^ (j >> 1);
    let mut gates = Vec::with_capacity(2 * count);
    for j in 0..count {
        gates.push(Gate::Ry {
            target: *target,
            angle: w[gray(j)] * scale,
        });
        let changed = gray(j) ^ gray((j + 1) % count);
        let bit = changed.trailing_zeros() as usize;
        gates.push(Gate::Cnot {
            control: controls[k - 1 - bit],
            target: *target,
        });
    }
    Ok(gates)
}

/// Replaces every multiplexed rotation with its elementary-gate lowering.
pub fn decompose_circuit(circuit: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(circuit.num_qubits())?;
    for g in circuit.gates() {
        for lowered in decompose_multiplexed(g)? {
            out.push(lowered)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub ry: usize,
    pub cnot: usize,
    pub multiplexed_ry: usize,
    pub other: usize,
    /// Circuit depth, each gate occupying the qubits it touches.
    pub depth: usize,
}

pub fn gate_count_report(circuit: &Circuit, decomposed: bool) -> Result<GateCounts> {
    let lowered;
    let circuit = if decomposed {
        lowered = decompose_circuit(circuit)?;
        &lowered
    } else {
        circuit
    };
    let n = circuit.num_qubits();
    let mut counts = GateCounts {
        ry: 0,
        cnot: 0,
        multiplexed_ry: 0,
        other: 0,
        depth: 0,
    };
    let mut busy_until = vec![0usize; n];
    for g in circuit.gates() {
        let qubits: Vec<usize> = match g {
            Gate::Ry { target, .. } => {
                counts.ry += 1;
                vec![*target]
            }
            Gate::Cnot { control, target } => {
                counts.cnot += 1;
                vec![*control, *target]
            }
            Gate::MultiplexedRy {
                target, controls, ..
            } => {
                counts.multiplexed_ry += 1;
                controls.iter().copied().chain([*target]).collect()
            }
            Gate::H { target } => {
                counts.other += 1;
                vec![*target]
            }
            Gate::PhaseOracle { .. } | Gate::Qft | Gate::InverseQft => {
                counts.other += 1;
                (0..n).collect()
            }
        };
        let start = qubits.iter().map(|&q| busy_until[q]).max().unwrap_or(0);
        for q in qubits {
            busy_until[q] = start + 1;
        }
    }
    counts.depth = busy_until.into_iter().max().unwrap_or(0);
    Ok(counts)
}
