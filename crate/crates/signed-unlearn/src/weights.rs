//! Per-edge loss weights.
//!
//! Weights are defined on the certification region; every edge outside it
//! carries weight 1, which keeps the loss unweighted where no region
//! information exists.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Edge;

/// Edge-weight lookup defaulting to 1.0 for unlisted edges.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EdgeWeights {
    map: BTreeMap<Edge, f64>,
}

impl EdgeWeights {
    /// Uniform weights: every edge maps to 1.0.
    pub fn uniform() -> Self {
        Self::default()
    }

    pub fn from_map(map: BTreeMap<Edge, f64>) -> Self {
        EdgeWeights { map }
    }

    pub fn get(&self, e: Edge) -> f64 {
        self.map.get(&e).copied().unwrap_or(1.0)
    }

    /// Number of explicitly weighted edges.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, f64)> + '_ {
        self.map.iter().map(|(&e, &w)| (e, w))
    }

    /// Min, max, and mean over the explicit weights; `None` when uniform.
    pub fn summary(&self) -> Option<WeightSummary> {
        if self.map.is_empty() {
            return None;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for &w in self.map.values() {
            lo = lo.min(w);
            hi = hi.max(w);
            sum += w;
        }
        Some(WeightSummary {
            min: lo,
            max: hi,
            mean: sum / self.map.len() as f64,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightSummary {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

/// How region edges are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeightMode {
    /// Balance/status influence scores blended by `alpha`.
    Sociological { alpha: f64 },
    /// Every weight 1.0.
    Uniform,
    /// Normalized degree centrality (the sign-free variant).
    Degree,
}

impl Default for WeightMode {
    fn default() -> Self {
        WeightMode::Sociological { alpha: 0.5 }
    }
}
