//! Demonstrations built on prepared states: search with a non-uniform prior,
//! interference distributions and Fourier-component readout.

mod fourier;
mod grover;
mod interference;

pub use fourier::{
    fourier_component_demo, fourier_component_direct, FourierComponent, FOURIER_TOLERANCE,
};
pub use grover::{grover_search, GroverRun, GroverSummary};
pub use interference::{
    as_tabulated, check_probabilities_log_concave, interference_direct, interference_distribution,
    Interference, MAX_INTERFERENCE_QUBITS,
};
