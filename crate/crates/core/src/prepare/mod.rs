//! Level-by-level amplitude encoding: angle tables, direct refinement,
//! circuit synthesis and multiplexed-rotation lowering.

mod angles;
mod refine;
mod synth;

pub use angles::{angle_from_fraction, compute_angles, AngleTable};
pub use refine::{
    discretize, prepare_direct, refine, Discretization, DiscretizedDistribution, MASS_TOLERANCE,
};
pub use synth::{
    decompose_circuit, decompose_multiplexed, gate_count_report, synthesize, GateCounts,
};
