use rayon::prelude::*;
use serde::Serialize;

use crate::dist::{region_bounds, Distribution, Estimate, IntegrationBackend};
use crate::quantum::{Statevector, MAX_QUBITS};
use crate::{Error, Result};

/// Allowed deviation of the total mass from one.
pub const MASS_TOLERANCE: f64 = 1e-9;

// below this many regions a level is evaluated on the calling thread
const PARALLEL_THRESHOLD: usize = 256;

/// The `2^level` region masses of a density at one discretization level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscretizedDistribution {
    level: u32,
    masses: Vec<f64>,
}

impl DiscretizedDistribution {
    pub fn new(level: u32, masses: Vec<f64>) -> Result<Self> {
        if level as usize > MAX_QUBITS || masses.len() != 1 << level {
            return Err(Error::domain(format!(
                "level {level} needs 2^{level} masses, got {}",
                masses.len()
            )));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::domain("masses must be finite and >= 0"));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::domain(format!("masses sum to {total}, expected 1")));
        }
        Ok(DiscretizedDistribution { level, masses })
    }

    /// The single region covering the whole support.
    pub fn whole() -> Self {
        DiscretizedDistribution {
            level: 0,
            masses: vec![1.0],
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn into_masses(self) -> Vec<f64> {
        self.masses
    }

    /// Amplitudes `√p_i`.
    pub fn to_state(&self) -> Result<Statevector> {
        Statevector::from_probabilities(&self.masses)
    }
}

/// Left fractions `f(i)` of every region at `level`, with their errors.
pub(crate) fn level_fractions(
    dist: &Distribution,
    level: u32,
    backend: &IntegrationBackend,
) -> Result<Vec<Estimate>> {
    backend.validate()?;
    let support = dist.support();
    let eval = |i: usize| {
        region_bounds(level, i, &support)
            .and_then(|r| crate::dist::integrate::left_fraction_estimate(dist, &r, backend))
            .map_err(|e| e.at_region(level, i))
    };
    let count = 1usize << level;
    if count < PARALLEL_THRESHOLD {
        (0..count).map(eval).collect()
    } else {
        (0..count).into_par_iter().map(eval).collect()
    }
}

/// Splits `parent` into `(α, β)` with `α ≈ parent·f` and `α + β == parent`
/// exactly. Whichever child is at least half the parent is obtained by an
/// exact (Sterbenz) subtraction, which makes the sum exact.
pub(crate) fn split_mass(parent: f64, f: f64) -> (f64, f64) {
    let alpha = parent * f;
    if alpha >= 0.5 * parent {
        (alpha, parent - alpha)
    } else {
        let beta = parent - alpha;
        (parent - beta, beta)
    }
}

fn split_level(masses: &[f64], fractions: &[Estimate]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * masses.len());
    for (&p, f) in masses.iter().zip(fractions) {
        let (a, b) = split_mass(p, f.value);
        out.push(a);
        out.push(b);
    }
    out
}

/// One refinement step: each region mass `p_i` becomes the pair
/// `(p_i f(i), p_i (1 - f(i)))` whose sum is `p_i` bit-for-bit.
pub fn refine(
    masses: &DiscretizedDistribution,
    dist: &Distribution,
    backend: &IntegrationBackend,
) -> Result<DiscretizedDistribution> {
    if masses.level as usize >= MAX_QUBITS {
        return Err(Error::domain(format!(
            "cannot refine beyond {MAX_QUBITS} levels"
        )));
    }
    let fractions = level_fractions(dist, masses.level, backend)?;
    Ok(DiscretizedDistribution {
        level: masses.level + 1,
        masses: split_level(&masses.masses, &fractions),
    })
}

/// Every level `0..=n` of the refinement, plus a first-order bound on the
/// total-variation error contributed by integration errors:
/// `Σ_levels Σ_i p_i · err(f_i)`.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub levels: Vec<DiscretizedDistribution>,
    pub error_budget: f64,
}

impl Discretization {
    pub fn finest(&self) -> &DiscretizedDistribution {
        self.levels.last().expect("at least level 0")
    }
}

pub fn discretize(
    dist: &Distribution,
    n: usize,
    backend: &IntegrationBackend,
) -> Result<Discretization> {
    check_register(n)?;
    let mut levels = vec![DiscretizedDistribution::whole()];
    let mut error_budget = 0.0;
    for level in 0..n as u32 {
        let current = levels.last().expect("non-empty");
        let fractions = level_fractions(dist, level, backend)?;
        error_budget += current
            .masses
            .iter()
            .zip(&fractions)
            .map(|(p, f)| p * f.error)
            .sum::<f64>();
        let next = DiscretizedDistribution {
            level: level + 1,
            masses: split_level(&current.masses, &fractions),
        };
        levels.push(next);
    }
    Ok(Discretization {
        levels,
        error_budget,
    })
}

pub(crate) fn check_register(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::domain(format!(
            "qubit count {n} outside 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

/// Builds `Σ_i √p_i |i>` over `2^n` regions by repeated refinement.
pub fn prepare_direct(
    dist: &Distribution,
    n: usize,
    backend: &IntegrationBackend,
) -> Result<Statevector> {
    let mut masses = DiscretizedDistribution::whole();
    check_register(n)?;
    for _ in 0..n {
        masses = refine(&masses, dist, backend)?;
    }
    masses.to_state()
}
