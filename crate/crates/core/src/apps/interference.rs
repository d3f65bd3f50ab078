use serde::Serialize;

use crate::dist::{check_log_concavity, Distribution, IntegrationBackend, LogConcavityReport};
use crate::prepare::prepare_direct;
use crate::quantum::walsh_hadamard;
use crate::{Error, Result};

/// Largest register for which the quadratic-cost direct evaluation runs.
pub const MAX_INTERFERENCE_QUBITS: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Interference {
    /// Region masses `p_i` of the prepared state.
    pub input: Vec<f64>,
    /// Output probabilities after `H` on every qubit.
    pub output: Vec<f64>,
    /// Largest elementwise gap between `output` and the direct sum.
    pub max_deviation: f64,
}

/// `q_j = (1/N) (Σ_i (-1)^{popcount(i & j)} √p_i)²`, summed directly.
pub fn interference_direct(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    let roots: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    (0..n)
        .map(|j| {
            let s: f64 = roots
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    if (i & j).count_ones() % 2 == 0 {
                        *r
                    } else {
                        -*r
                    }
                })
                .sum();
            s * s / n as f64
        })
        .collect()
}

/// Prepares the encoded state, applies a Walsh-Hadamard layer and returns
/// the measurement distribution, cross-checked against the direct sum.
pub fn interference_distribution(
    dist: &Distribution,
    n: usize,
    backend: &IntegrationBackend,
) -> Result<Interference> {
    if n > MAX_INTERFERENCE_QUBITS {
        return Err(Error::domain(format!(
            "interference demo supports at most {MAX_INTERFERENCE_QUBITS} qubits, got {n}"
        )));
    }
    let state = prepare_direct(dist, n, backend)?;
    let input = state.probabilities();
    let output = walsh_hadamard(&state).probabilities();
    let direct = interference_direct(&input);
    let max_deviation = output
        .iter()
        .zip(&direct)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Interference {
        input,
        output,
        max_deviation,
    })
}

/// Wraps a probability vector as a piecewise-linear density with knots at
/// `j / N` on `[0, 1)`.
pub fn as_tabulated(q: &[f64]) -> Result<Distribution> {
    let n = q.len();
    let xs: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
    Distribution::tabulated(&xs, q)
}

/// Runs the log-concavity check on `q` with one grid point per knot.
pub fn check_probabilities_log_concave(q: &[f64]) -> Result<LogConcavityReport> {
    check_log_concavity(&as_tabulated(q)?, q.len())
}
