//! Amplitude encoding of efficiently integrable probability densities.
//!
//! A density on a finite interval is discretized into `2^n` equal-width
//! regions and loaded into an `n`-qubit register one qubit at a time. At each
//! level every region is split in two, and the conditional probability that
//! the variable falls in the left half fixes a rotation angle on the new
//! qubit. The crate provides:
//!
//! - [`dist`]: densities, region tiling, integration backends (analytic CDF,
//!   adaptive Simpson, seeded Monte Carlo) and a log-concavity checker.
//! - [`quantum`]: a dense statevector simulator with the gate set needed for
//!   the preparation circuit and the demos (Ry, multiplexed Ry, H, CNOT,
//!   phase oracle, QFT), plus sampling and distance metrics.
//! - [`prepare`]: angle tables, the direct level-by-level refinement, circuit
//!   synthesis and the Gray-code lowering of multiplexed rotations.
//! - [`apps`]: Grover search on a non-uniform prior, Walsh-Hadamard
//!   interference distributions and Fourier-component readout.
//!
//! Qubit 0 is always the most significant bit of a basis index, so the
//! left-to-right order of regions matches the binary order of `|i>`.
//!
//! ```
//! use grprep_core::dist::{Distribution, IntegrationBackend};
//! use grprep_core::prepare::{compute_angles, prepare_direct, synthesize};
//! use grprep_core::quantum::{apply_circuit, fidelity, Statevector};
//!
//! let dist = Distribution::gaussian(0.0, 1.0).unwrap();
//! let backend = IntegrationBackend::analytic();
//! let direct = prepare_direct(&dist, 6, &backend).unwrap();
//! let circuit = synthesize(&compute_angles(&dist, 6, &backend).unwrap()).unwrap();
//! let simulated = apply_circuit(&Statevector::zero(6).unwrap(), &circuit).unwrap();
//! assert!(fidelity(&direct, &simulated).unwrap() > 1.0 - 1e-9);
//! ```

pub mod apps;
pub mod dist;
mod error;
pub mod prepare;
pub mod quantum;

pub use error::{Error, Result};

/// Version tag embedded in every exported artifact.
pub const FORMAT_VERSION: &str = "grprep/1";

/// Formats a float with 17 significant digits, enough for a lossless
/// round-trip of any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
