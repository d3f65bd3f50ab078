use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::dist::{Distribution, IntegrationBackend};
use crate::prepare::prepare_direct;
use crate::quantum::{fourier_magnitude, Statevector};
use crate::{Error, Result};

/// Agreement required between the simulated and directly summed magnitude.
pub const FOURIER_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FourierComponent {
    pub k: usize,
    /// `|(QFT ψ)_k|` from the simulated transform.
    pub magnitude: f64,
    /// `|N^{-1/2} Σ_i exp(2πi ik/N) a_i|` summed directly.
    pub reference: f64,
}

impl FourierComponent {
    pub fn agrees(&self) -> bool {
        (self.magnitude - self.reference).abs() <= FOURIER_TOLERANCE
    }
}

/// Direct `O(N)` evaluation of one Fourier component of a state.
pub fn fourier_component_direct(state: &Statevector, k: usize) -> f64 {
    let n = state.dim();
    let sum: Complex64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| a * Complex64::from_polar(1.0, TAU * ((i * k) % n) as f64 / n as f64))
        .sum();
    sum.norm() / (n as f64).sqrt()
}

pub fn fourier_component_demo(
    dist: &Distribution,
    n: usize,
    k: usize,
    backend: &IntegrationBackend,
) -> Result<FourierComponent> {
    if n < usize::BITS as usize && k >= 1 << n {
        return Err(Error::domain(format!(
            "Fourier index {k} out of range for {n} qubits"
        )));
    }
    let state = prepare_direct(dist, n, backend)?;
    Ok(FourierComponent {
        k,
        magnitude: fourier_magnitude(&state, k)?,
        reference: fourier_component_direct(&state, k),
    })
}
