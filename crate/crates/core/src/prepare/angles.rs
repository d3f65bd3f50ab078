use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::refine::{check_register, level_fractions};
use crate::dist::{Distribution, IntegrationBackend};
use crate::{Error, Result};

/// Rotation angles per level: `levels[m][i] = arccos √f(i)` for the `2^m`
/// regions of level `m`, each in `[0, π/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleTable {
    levels: Vec<Vec<f64>>,
}

impl AngleTable {
    pub fn new(levels: Vec<Vec<f64>>) -> Result<Self> {
        check_register(levels.len())?;
        for (m, angles) in levels.iter().enumerate() {
            if angles.len() != 1 << m {
                return Err(Error::domain(format!(
                    "level {m} needs 2^{m} angles, got {}",
                    angles.len()
                )));
            }
            if let Some(bad) = angles.iter().find(|a| !(0.0..=FRAC_PI_2).contains(*a)) {
                return Err(Error::domain(format!(
                    "angle {bad} at level {m} outside [0, π/2]"
                )));
            }
        }
        Ok(AngleTable { levels })
    }

    pub fn num_qubits(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `{"format_version": ..., "num_qubits": n, "levels": {"0": [...], ...}}`.
    /// Reals use the shortest representation that parses back to the same
    /// bits.
    pub fn to_json(&self) -> String {
        let doc = AngleDoc {
            format_version: crate::FORMAT_VERSION.to_string(),
            num_qubits: self.num_qubits(),
            levels: self
                .levels
                .iter()
                .enumerate()
                .map(|(m, a)| (m.to_string(), a.clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("angle table serializes")
    }

    /// Parses [`AngleTable::to_json`] output. Other top-level keys, such as
    /// an embedded run configuration, are ignored.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: AngleDoc = serde_json::from_str(text)?;
        if doc.format_version != crate::FORMAT_VERSION {
            return Err(Error::domain(format!(
                "unsupported angle table format {:?}",
                doc.format_version
            )));
        }
        let mut levels = Vec::with_capacity(doc.levels.len());
        for m in 0..doc.levels.len() {
            let angles = doc
                .levels
                .get(&m.to_string())
                .ok_or_else(|| Error::domain(format!("angle table is missing level {m}")))?;
            levels.push(angles.clone());
        }
        if levels.len() != doc.num_qubits {
            return Err(Error::domain(format!(
                "angle table declares {} qubits but has {} levels",
                doc.num_qubits,
                levels.len()
            )));
        }
        AngleTable::new(levels)
    }
}

#[derive(Serialize, Deserialize)]
struct AngleDoc {
    format_version: String,
    num_qubits: usize,
    levels: BTreeMap<String, Vec<f64>>,
}

/// `θ = arccos √f`, with `f` clamped into `[0, 1]`.
pub fn angle_from_fraction(f: f64) -> f64 {
    f.clamp(0.0, 1.0).sqrt().acos()
}

/// Angles for levels `0..n`: `2^n - 1` in total.
pub fn compute_angles(
    dist: &Distribution,
    n: usize,
    backend: &IntegrationBackend,
) -> Result<AngleTable> {
    check_register(n)?;
    let levels = (0..n as u32)
        .map(|m| {
            level_fractions(dist, m, backend)
                .map(|fs| fs.iter().map(|f| angle_from_fraction(f.value)).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    AngleTable::new(levels)
}
