use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::quantum::{apply_gate_in_place, Gate, Statevector};
use crate::{Error, Result};

/// Amplitude amplification trace starting from an arbitrary prior.
#[derive(Clone, Debug)]
pub struct GroverRun {
    pub initial: Statevector,
    pub marked: BTreeSet<usize>,
    pub iterations: usize,
    /// Marked-subspace probability after `0..=iterations` rounds.
    pub success_trace: Vec<f64>,
    pub final_state: Statevector,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroverSummary {
    pub marked: Vec<usize>,
    pub iterations: usize,
    pub initial_overlap: f64,
    pub success_trace: Vec<f64>,
}

impl GroverRun {
    /// First iteration count at which success reaches `threshold`.
    pub fn iterations_to_reach(&self, threshold: f64) -> Option<usize> {
        self.success_trace.iter().position(|&p| p >= threshold)
    }

    pub fn summary(&self) -> GroverSummary {
        GroverSummary {
            marked: self.marked.iter().copied().collect(),
            iterations: self.iterations,
            initial_overlap: self.success_trace[0],
            success_trace: self.success_trace.clone(),
        }
    }
}

fn marked_probability(state: &Statevector, marked: &BTreeSet<usize>) -> f64 {
    marked
        .iter()
        .map(|&m| state.amplitudes()[m].norm_sqr())
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// `|ψ> -> 2<ψ0|ψ> |ψ0> - |ψ>`, the reflection about the prior.
fn reflect_about(state: &mut Statevector, prior: &Statevector) {
    let overlap: Complex64 = prior
        .amplitudes()
        .iter()
        .zip(state.amplitudes())
        .map(|(a, b)| a.conj() * b)
        .sum();
    let scale = 2.0 * overlap;
    for (a, p) in state.amplitudes_mut().iter_mut().zip(prior.amplitudes()) {
        *a = scale * p - *a;
    }
}

/// Runs `iterations` rounds of oracle-then-diffusion, where the diffusion
/// reflects about `initial` rather than the uniform state.
pub fn grover_search(
    initial: &Statevector,
    marked: &BTreeSet<usize>,
    iterations: usize,
) -> Result<GroverRun> {
    if marked.is_empty() {
        return Err(Error::domain("marked set is empty"));
    }
    let oracle = Gate::PhaseOracle {
        marked: marked.clone(),
    };
    oracle.validate(initial.num_qubits())?;
    let mut state = initial.clone();
    let mut success_trace = Vec::with_capacity(iterations + 1);
    success_trace.push(marked_probability(&state, marked));
    for _ in 0..iterations {
        apply_gate_in_place(&mut state, &oracle)?;
        reflect_about(&mut state, initial);
        success_trace.push(marked_probability(&state, marked));
    }
    Ok(GroverRun {
        initial: initial.clone(),
        marked: marked.clone(),
        iterations,
        success_trace,
        final_state: state,
    })
}
