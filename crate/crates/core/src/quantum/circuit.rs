use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::{check_qubits, Statevector};
use super::transforms;
use crate::{fmt_f64, Error, Result};

/// Gates understood by the simulator.
///
/// `Ry(θ)` is the real rotation `[[cos θ, -sin θ], [sin θ, cos θ]]`, so
/// `Ry(θ)|0> = cos θ|0> + sin θ|1>`. `MultiplexedRy` applies
/// `Ry(angles[c])` to the target, where `c` is the integer spelled by the
/// control qubits with `controls[0]` as its most significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    H {
        target: usize,
    },
    Ry {
        target: usize,
        angle: f64,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    MultiplexedRy {
        target: usize,
        controls: Vec<usize>,
        angles: Vec<f64>,
    },
    /// Flips the sign of the listed basis amplitudes.
    PhaseOracle {
        marked: BTreeSet<usize>,
    },
    /// Quantum Fourier transform on the whole register.
    Qft,
    InverseQft,
}

impl Gate {
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let in_range = |q: usize| {
            if q < num_qubits {
                Ok(())
            } else {
                Err(Error::domain(format!(
                    "qubit {q} out of range for {num_qubits} qubits"
                )))
            }
        };
        match self {
            Gate::H { target } | Gate::Ry { target, .. } => in_range(*target),
            Gate::Cnot { control, target } => {
                in_range(*control)?;
                in_range(*target)?;
                if control == target {
                    return Err(Error::domain("CNOT control equals target"));
                }
                Ok(())
            }
            Gate::MultiplexedRy {
                target,
                controls,
                angles,
            } => {
                in_range(*target)?;
                let mut seen = BTreeSet::new();
                for &c in controls {
                    in_range(c)?;
                    if c == *target {
                        return Err(Error::domain(
                            "multiplexed rotation target is also a control",
                        ));
                    }
                    if !seen.insert(c) {
                        return Err(Error::domain(format!("control {c} listed twice")));
                    }
                }
                if 1usize.checked_shl(controls.len() as u32) != Some(angles.len()) {
                    return Err(Error::domain(format!(
                        "multiplexed rotation with {} controls needs 2^{} angles, got {}",
                        controls.len(),
                        controls.len(),
                        angles.len()
                    )));
                }
                Ok(())
            }
            Gate::PhaseOracle { marked } => match marked.iter().next_back() {
                Some(&m)
                    if 1usize
                        .checked_shl(num_qubits as u32)
                        .is_some_and(|dim| m >= dim) =>
                {
                    Err(Error::domain(format!(
                        "marked index {m} out of range for {num_qubits} qubits"
                    )))
                }
                _ => Ok(()),
            },
            Gate::Qft | Gate::InverseQft => Ok(()),
        }
    }
}

/// Bit mask of qubit `q` in an `n`-qubit index.
#[inline]
pub(crate) fn qubit_mask(num_qubits: usize, q: usize) -> usize {
    1 << (num_qubits - 1 - q)
}

/// Applies the 2x2 real matrix `[[c, -s], [s, c]]` to qubit `target`.
fn rotate(amps: &mut [Complex64], mask: usize, c: f64, s: f64) {
    let dim = amps.len();
    for block in (0..dim).step_by(2 * mask) {
        for i in block..block + mask {
            let (a0, a1) = (amps[i], amps[i | mask]);
            amps[i] = a0 * c - a1 * s;
            amps[i | mask] = a0 * s + a1 * c;
        }
    }
}

pub(crate) fn hadamard(amps: &mut [Complex64], mask: usize) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let dim = amps.len();
    for block in (0..dim).step_by(2 * mask) {
        for i in block..block + mask {
            let (a0, a1) = (amps[i], amps[i | mask]);
            amps[i] = (a0 + a1) * r;
            amps[i | mask] = (a0 - a1) * r;
        }
    }
}

/// Applies `gate` in place.
pub fn apply_gate_in_place(state: &mut Statevector, gate: &Gate) -> Result<()> {
    let n = state.num_qubits();
    gate.validate(n)?;
    let amps = state.amplitudes_mut();
    match gate {
        Gate::H { target } => hadamard(amps, qubit_mask(n, *target)),
        Gate::Ry { target, angle } => {
            let (s, c) = angle.sin_cos();
            rotate(amps, qubit_mask(n, *target), c, s);
        }
        Gate::Cnot { control, target } => {
            let (cm, tm) = (qubit_mask(n, *control), qubit_mask(n, *target));
            for i in 0..amps.len() {
                if i & cm != 0 && i & tm == 0 {
                    amps.swap(i, i | tm);
                }
            }
        }
        Gate::MultiplexedRy {
            target,
            controls,
            angles,
        } => {
            let tm = qubit_mask(n, *target);
            let masks: Vec<usize> = controls.iter().map(|&q| qubit_mask(n, q)).collect();
            let trig: Vec<(f64, f64)> = angles.iter().map(|a| a.sin_cos()).collect();
            for i in 0..amps.len() {
                if i & tm != 0 {
                    continue;
                }
                let c = masks
                    .iter()
                    .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0));
                let (s, co) = trig[c];
                let (a0, a1) = (amps[i], amps[i | tm]);
                amps[i] = a0 * co - a1 * s;
                amps[i | tm] = a0 * s + a1 * co;
            }
        }
        Gate::PhaseOracle { marked } => {
            for &m in marked {
                amps[m] = -amps[m];
            }
        }
        Gate::Qft => transforms::qft_in_place(state),
        Gate::InverseQft => transforms::inverse_qft_in_place(state),
    }
    Ok(())
}

pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    apply_gate_in_place(&mut out, gate)?;
    Ok(out)
}

/// Ordered gate list on a fixed register.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        Ok(Circuit {
            num_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Line-oriented text form: a `QUBITS n` line, then one gate per line.
    /// Angles carry 17 significant digits so parsing restores them exactly.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# {} circuit, qubit 0 is the most significant bit\nQUBITS {}\n",
            crate::FORMAT_VERSION,
            self.num_qubits
        );
        for g in &self.gates {
            match g {
                Gate::H { target } => writeln!(out, "H targets={target}"),
                Gate::Ry { target, angle } => {
                    writeln!(out, "RY targets={target} angles={}", fmt_f64(*angle))
                }
                Gate::Cnot { control, target } => {
                    writeln!(out, "CNOT targets={target} controls={control}")
                }
                Gate::MultiplexedRy {
                    target,
                    controls,
                    angles,
                } => writeln!(
                    out,
                    "MRY targets={target} controls={} angles={}",
                    join(controls.iter().map(|c| c.to_string())),
                    join(angles.iter().map(|a| fmt_f64(*a)))
                ),
                Gate::PhaseOracle { marked } => writeln!(
                    out,
                    "ORACLE marked={}",
                    join(marked.iter().map(|m| m.to_string()))
                ),
                Gate::Qft => writeln!(out, "QFT"),
                Gate::InverseQft => writeln!(out, "IQFT"),
            }
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: line_no, msg };
            let mut words = line.split_whitespace();
            let op = words.next().expect("line is not empty");
            if op == "QUBITS" {
                if circuit.is_some() {
                    return Err(err("duplicate QUBITS line".into()));
                }
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("QUBITS needs a qubit count".into()))?;
                circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
                continue;
            }
            let Some(c) = circuit.as_mut() else {
                return Err(err("gate before QUBITS line".into()));
            };
            let mut fields = Fields::default();
            for w in words {
                let (key, value) = w
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected key=value, got `{w}`")))?;
                let slot = match key {
                    "targets" => &mut fields.targets,
                    "controls" => &mut fields.controls,
                    "angles" => &mut fields.angles,
                    "marked" => &mut fields.marked,
                    _ => return Err(err(format!("unknown key `{key}`"))),
                };
                if slot.replace(value.to_string()).is_some() {
                    return Err(err(format!("duplicate key `{key}`")));
                }
            }
            let gate = fields.into_gate(op).map_err(err)?;
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing QUBITS line".into(),
        })
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}

#[derive(Default)]
struct Fields {
    targets: Option<String>,
    controls: Option<String>,
    angles: Option<String>,
    marked: Option<String>,
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.parse().map_err(|_| format!("bad list element `{t}`")))
        .collect()
}

impl Fields {
    fn into_gate(self, op: &str) -> std::result::Result<Gate, String> {
        let allowed: &[&str] = match op {
            "H" => &["targets"],
            "RY" => &["targets", "angles"],
            "CNOT" => &["targets", "controls"],
            "MRY" => &["targets", "controls", "angles"],
            "ORACLE" => &["marked"],
            "QFT" | "IQFT" => &[],
            _ => return Err(format!("unknown gate `{op}`")),
        };
        for (name, present) in [
            ("targets", self.targets.is_some()),
            ("controls", self.controls.is_some()),
            ("angles", self.angles.is_some()),
            ("marked", self.marked.is_some()),
        ] {
            if present != allowed.contains(&name) {
                return Err(if present {
                    format!("{op} does not take `{name}`")
                } else {
                    format!("{op} requires `{name}`")
                });
            }
        }
        let single = |s: &Option<String>, what: &str| -> std::result::Result<usize, String> {
            match parse_list::<usize>(s.as_deref().unwrap_or(""))?.as_slice() {
                [q] => Ok(*q),
                _ => Err(format!("{op} takes exactly one {what}")),
            }
        };
        Ok(match op {
            "H" => Gate::H {
                target: single(&self.targets, "target")?,
            },
            "RY" => {
                let angles: Vec<f64> = parse_list(self.angles.as_deref().unwrap_or(""))?;
                let [angle] = angles[..] else {
                    return Err("RY takes exactly one angle".into());
                };
                Gate::Ry {
                    target: single(&self.targets, "target")?,
                    angle,
                }
            }
            "CNOT" => Gate::Cnot {
                control: single(&self.controls, "control")?,
                target: single(&self.targets, "target")?,
            },
            "MRY" => Gate::MultiplexedRy {
                target: single(&self.targets, "target")?,
                controls: parse_list(self.controls.as_deref().unwrap_or(""))?,
                angles: parse_list(self.angles.as_deref().unwrap_or(""))?,
            },
            "ORACLE" => Gate::PhaseOracle {
                marked: parse_list(self.marked.as_deref().unwrap_or(""))?
                    .into_iter()
                    .collect(),
            },
            "QFT" => Gate::Qft,
            _ => Gate::InverseQft,
        })
    }
}

/// Applies the gates left to right.
pub fn apply_circuit(state: &Statevector, circuit: &Circuit) -> Result<Statevector> {
    if state.num_qubits() != circuit.num_qubits() {
        return Err(Error::domain(format!(
            "circuit acts on {} qubits, state has {}",
            circuit.num_qubits(),
            state.num_qubits()
        )));
    }
    let mut out = state.clone();
    for g in circuit.gates() {
        apply_gate_in_place(&mut out, g)?;
    }
    Ok(out)
}
