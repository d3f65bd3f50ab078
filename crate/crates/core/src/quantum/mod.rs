//! Dense statevector simulation.

mod circuit;
mod measure;
mod state;
mod transforms;

pub use circuit::{apply_circuit, apply_gate, apply_gate_in_place, Circuit, Gate};
pub use measure::{fidelity, measure_histogram, total_variation};
pub use state::{bit_string, AmplitudeRow, Statevector, MAX_QUBITS, NORM_TOLERANCE};
pub use transforms::{fourier_magnitude, inverse_qft, qft, walsh_hadamard};
