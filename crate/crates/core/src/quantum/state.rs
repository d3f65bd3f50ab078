use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// Allowed deviation of `Σ|a_i|²` from one.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Dense `n`-qubit pure state. Qubit 0 is the most significant bit of the
/// basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::domain(format!(
            "register size {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

impl Statevector {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { num_qubits, amps })
    }

    /// Wraps amplitudes whose squared norm is one within `1e-10`.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::domain(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_qubits(num_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("state norm² is {norm}, expected 1")));
        }
        Ok(Statevector { num_qubits, amps })
    }

    /// Real non-negative amplitudes `√p_i`.
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::domain("probabilities must be finite and >= 0"));
        }
        Self::from_amplitudes(
            probs
                .iter()
                .map(|p| Complex64::new(p.sqrt(), 0.0))
                .collect(),
        )
    }

    /// Uniform superposition over all `2^n` basis states.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        check_qubits(num_qubits)?;
        let dim = 1usize << num_qubits;
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Statevector {
            num_qubits,
            amps: vec![a; dim],
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::domain(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Bit string of a basis index, qubit 0 first.
    pub fn bit_string(&self, index: usize) -> String {
        bit_string(index, self.num_qubits)
    }
}

/// Bit string of `index` on `num_qubits` qubits, qubit 0 first.
pub fn bit_string(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| {
            if index >> (num_qubits - 1 - q) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Row of a tabular state export.
#[derive(Clone, Debug, Serialize)]
pub struct AmplitudeRow {
    pub index: usize,
    pub bits: String,
    pub real: f64,
    pub imag: f64,
    pub probability: f64,
}

impl Statevector {
    pub fn rows(&self) -> Vec<AmplitudeRow> {
        self.amps
            .iter()
            .enumerate()
            .map(|(index, a)| AmplitudeRow {
                index,
                bits: self.bit_string(index),
                real: a.re,
                imag: a.im,
                probability: a.norm_sqr(),
            })
            .collect()
    }

    /// CSV with header `index,bits,real,imag,probability`; reals at 17
    /// significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,bits,real,imag,probability\n");
        for r in self.rows() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.index,
                r.bits,
                crate::fmt_f64(r.real),
                crate::fmt_f64(r.imag),
                crate::fmt_f64(r.probability)
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "format_version": crate::FORMAT_VERSION,
            "num_qubits": self.num_qubits,
            "qubit_order": "msb-first",
            "amplitudes": self.rows(),
        })
    }
}
