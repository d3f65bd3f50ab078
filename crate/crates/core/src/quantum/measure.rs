use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::Statevector;
use crate::{Error, Result};

/// Draws `shots` basis outcomes from `|a_i|²` by inverse-CDF sampling and
/// returns the count per index. The same seed always yields the same counts.
pub fn measure_histogram(state: &Statevector, shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::domain("shots must be >= 1"));
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for a in state.amplitudes() {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; state.dim()];
    let last = state.dim() - 1;
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let i = cumulative.partition_point(|&c| c <= u).min(last);
        counts[i] += 1;
    }
    Ok(counts)
}

/// `|<a|b>|`, clamped to `[0, 1]`.
pub fn fidelity(a: &Statevector, b: &Statevector) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

/// `½ Σ |p_i - q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}
