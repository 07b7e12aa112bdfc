//! Per-vertex material rigidity weights. High values mean stiff (face, skin),
//! low values mean freely deforming cloth.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Mesh;
use crate::scalar::{real, Real};

/// Material label → rigidity weight. Defaults: face 200.0, skin 50.0,
/// dress 1.0, upper 2.0, pants 2.5.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MaterialTable {
    pub weights: BTreeMap<String, f64>,
}

impl Default for MaterialTable {
    fn default() -> Self {
        let mut weights = BTreeMap::new();
        weights.insert("face".to_string(), 200.0);
        weights.insert("skin".to_string(), 50.0);
        weights.insert("dress".to_string(), 1.0);
        weights.insert("upper".to_string(), 2.0);
        weights.insert("pants".to_string(), 2.5);
        Self { weights }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RigidityWeights<T: Real> {
    r: Vec<T>,
}

impl<T: Real> RigidityWeights<T> {
    pub fn new(r: Vec<T>) -> Result<Self> {
        if let Some(bad) = r.iter().position(|v| *v < T::zero() || !v.is_finite()) {
            return Err(Error::Config(format!(
                "rigidity weight {bad} is negative or non-finite"
            )));
        }
        Ok(Self { r })
    }

    pub fn uniform(vertex_count: usize, value: T) -> Self {
        Self {
            r: vec![value; vertex_count],
        }
    }

    /// Maps per-vertex material labels through the table.
    pub fn from_labels(labels: &[String], table: &MaterialTable) -> Result<Self> {
        let r = labels
            .iter()
            .map(|l| {
                table
                    .weights
                    .get(l)
                    .map(|w| real(*w))
                    .ok_or_else(|| Error::Config(format!("unknown material label `{l}`")))
            })
            .collect::<Result<Vec<T>>>()?;
        Self::new(r)
    }

    pub fn values(&self) -> &[T] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn min_value(&self) -> T {
        self.r
            .iter()
            .copied()
            .fold(T::max_value().unwrap_or_else(T::one), |a, b| a.min(b))
    }

    /// Per-edge rigidity: min of the endpoint values, aligned with
    /// `mesh.edges()`.
    pub fn edge_rigidity(&self, mesh: &Mesh<T>) -> Vec<T> {
        mesh.edges()
            .iter()
            .map(|&[i, j]| self.r[i].min(self.r[j]))
            .collect()
    }
}
