use std::f64::consts::TAU;

use num_complex::Complex64;

use super::circuit::{hadamard, qubit_mask};
use super::state::Statevector;
use crate::{Error, Result};

/// `H` on every qubit.
pub fn walsh_hadamard(state: &Statevector) -> Statevector {
    let mut out = state.clone();
    let n = out.num_qubits();
    let amps = out.amplitudes_mut();
    for q in 0..n {
        hadamard(amps, qubit_mask(n, q));
    }
    out
}

/// Textbook QFT: for each qubit, `H` followed by the controlled phases from
/// every less significant qubit, then a bit-reversal of the register. The
/// controlled phases on one target are merged into a single diagonal pass.
pub(crate) fn qft_in_place(state: &mut Statevector) {
    let n = state.num_qubits();
    let amps = state.amplitudes_mut();
    for t in 0..n {
        let mask = qubit_mask(n, t);
        hadamard(amps, mask);
        if mask == 1 {
            continue;
        }
        let period = (2 * mask) as f64;
        for (i, a) in amps.iter_mut().enumerate() {
            if i & mask != 0 {
                let r = i & (mask - 1);
                if r != 0 {
                    *a *= Complex64::from_polar(1.0, TAU * r as f64 / period);
                }
            }
        }
    }
    bit_reverse(amps, n);
}

fn bit_reverse(amps: &mut [Complex64], n: usize) {
    for i in 0..amps.len() {
        let j = i.reverse_bits() >> (usize::BITS as usize - n);
        if i < j {
            amps.swap(i, j);
        }
    }
}

/// The QFT matrix is symmetric, so its inverse is its complex conjugate:
/// `F⁻¹ a = conj(F conj(a))`.
pub(crate) fn inverse_qft_in_place(state: &mut Statevector) {
    for a in state.amplitudes_mut() {
        *a = a.conj();
    }
    qft_in_place(state);
    for a in state.amplitudes_mut() {
        *a = a.conj();
    }
}

/// `b_k = N^{-1/2} Σ_j exp(+2πi jk/N) a_j`.
pub fn qft(state: &Statevector) -> Statevector {
    let mut out = state.clone();
    qft_in_place(&mut out);
    out
}

pub fn inverse_qft(state: &Statevector) -> Statevector {
    let mut out = state.clone();
    inverse_qft_in_place(&mut out);
    out
}

/// `|(QFT state)_k|`.
pub fn fourier_magnitude(state: &Statevector, k: usize) -> Result<f64> {
    if k >= state.dim() {
        return Err(Error::domain(format!(
            "Fourier index {k} out of range for dimension {}",
            state.dim()
        )));
    }
    Ok(qft(state).amplitudes()[k].norm())
}
