//! Reference values computed independently of the library's code paths.

#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2, TAU};

use grprep_core::dist::Distribution;
use num_complex::Complex64;

/// erf by its Maclaurin series (|x| < 2.5).
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..400 {
        term *= -x * x / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

/// erfc by a backwards-evaluated continued fraction (x >= 2.5).
fn erfc_cf(x: f64) -> f64 {
    let mut t = x;
    for n in (1..400).rev() {
        t = x + (n as f64 / 2.0) / t;
    }
    (-x * x).exp() / PI.sqrt() / t
}

pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - erfc(-x)
    } else if x < 2.5 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// Upper tail `P(Z > z)` of a standard normal.
pub fn normal_upper(z: f64) -> f64 {
    0.5 * erfc(z / SQRT_2)
}

/// `P(lo < Z < hi)` for a standard normal, differencing on the tail side.
pub fn normal_mass(lo: f64, hi: f64) -> f64 {
    if lo >= 0.0 {
        normal_upper(lo) - normal_upper(hi)
    } else if hi <= 0.0 {
        normal_upper(-hi) - normal_upper(-lo)
    } else {
        1.0 - normal_upper(hi) - normal_upper(-lo)
    }
}

/// Region masses of a family on `2^n` equal cells, from closed-form CDFs.
pub enum Family {
    Uniform {
        lo: f64,
        hi: f64,
    },
    Exponential {
        rate: f64,
        lo: f64,
        hi: f64,
    },
    Normal {
        mean: f64,
        sd: f64,
        lo: f64,
        hi: f64,
    },
}

impl Family {
    pub fn build(&self) -> Distribution {
        match *self {
            Family::Uniform { lo, hi } => Distribution::uniform(lo, hi),
            Family::Exponential { rate, lo, hi } => Distribution::exponential_on(rate, lo, hi),
            Family::Normal { mean, sd, lo, hi } => Distribution::gaussian_on(mean, sd, lo, hi),
        }
        .unwrap()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Uniform { .. } => "uniform",
            Family::Exponential { .. } => "exponential",
            Family::Normal { .. } => "normal",
        }
    }

    pub fn cell_masses(&self, n: usize) -> Vec<f64> {
        let cells = 1usize << n;
        let (lo, hi) = match *self {
            Family::Uniform { lo, hi }
            | Family::Exponential { lo, hi, .. }
            | Family::Normal { lo, hi, .. } => (lo, hi),
        };
        let edge = |k: usize| lo + (hi - lo) * k as f64 / cells as f64;
        let raw = |a: f64, b: f64| match *self {
            Family::Uniform { .. } => b - a,
            Family::Exponential { rate, .. } => (-rate * a).exp() - (-rate * b).exp(),
            Family::Normal { mean, sd, .. } => normal_mass((a - mean) / sd, (b - mean) / sd),
        };
        let total = raw(lo, hi);
        (0..cells)
            .map(|k| raw(edge(k), edge(k + 1)) / total)
            .collect()
    }
}

pub fn standard_families() -> Vec<Family> {
    vec![
        Family::Uniform { lo: 0.0, hi: 1.0 },
        Family::Exponential {
            rate: 1.0,
            lo: 0.0,
            hi: 10.0,
        },
        Family::Normal {
            mean: 0.0,
            sd: 1.0,
            lo: -5.0,
            hi: 5.0,
        },
    ]
}

/// Every family the library knows, for path-equivalence style checks.
pub fn all_distributions() -> Vec<(&'static str, Distribution)> {
    vec![
        ("uniform", Distribution::uniform(0.0, 1.0).unwrap()),
        (
            "exponential",
            Distribution::exponential_on(1.0, 0.0, 10.0).unwrap(),
        ),
        ("gaussian", Distribution::gaussian(0.0, 1.0).unwrap()),
        (
            "truncated-gaussian",
            Distribution::truncated_gaussian(0.5, 0.8, -1.0, 3.0).unwrap(),
        ),
        (
            "mixture",
            Distribution::mixture(&[(0.5, -3.0, 1.0), (0.5, 3.0, 1.0)], -6.0, 6.0).unwrap(),
        ),
        (
            "tabulated",
            Distribution::tabulated(&[0.0, 1.0, 2.0, 4.0], &[0.2, 1.0, 0.1, 0.6]).unwrap(),
        ),
    ]
}

pub fn tv(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `O(N²)` DFT with the `+2πi` sign.
pub fn dft(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    (0..n)
        .map(|k| {
            let s: Complex64 = a
                .iter()
                .enumerate()
                .map(|(j, x)| x * Complex64::from_polar(1.0, TAU * ((j * k) % n) as f64 / n as f64))
                .sum();
            s / (n as f64).sqrt()
        })
        .collect()
}

/// `q_j = (1/N)(Σ_i (-1)^{i·j} √p_i)²` summed term by term.
pub fn walsh_probabilities(p: &[f64]) -> Vec<f64> {
    let n = p.len();
    (0..n)
        .map(|j| {
            let mut s = 0.0;
            for (i, pi) in p.iter().enumerate() {
                let sign = if (i & j).count_ones() % 2 == 1 {
                    -1.0
                } else {
                    1.0
                };
                s += sign * pi.sqrt();
            }
            s * s / n as f64
        })
        .collect()
}

/// Dense row-major complex matrix helpers for unitary checks.
pub type Matrix = Vec<Vec<Complex64>>;

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
