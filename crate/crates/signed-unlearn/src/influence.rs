//! Sociological influence weighting over a certification region.
//!
//! Per-node influence combines a balance view (share of balanced
//! triangles a node sits in) and a status view (signed, degree-weighted
//! standing among neighbors). Scores are min-max normalized over the
//! region's nodes, blended by `alpha`, pushed through a softmax, and
//! averaged per edge to give weights in [0, 1] that steer both the loss
//! and the privacy-noise calibration.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, SignedGraph, Triangle};
use crate::region::CertRegion;
use crate::weights::EdgeWeights;

/// 1 when the triangle's sign product is positive, else 0.
pub fn balance_indicator(t: &Triangle) -> u8 {
    if t.sign_product() > 0.0 {
        1
    } else {
        0
    }
}

/// Share of balanced triangles among those containing `v`; 0 when `v`
/// sits in no triangle.
pub fn balance_centrality(g: &SignedGraph, v: NodeId) -> Result<f64> {
    let tris = g.triangles(Some(v))?;
    if tris.is_empty() {
        return Ok(0.0);
    }
    let balanced: u32 = tris.iter().map(|t| u32::from(balance_indicator(t))).sum();
    Ok(f64::from(balanced) / tris.len() as f64)
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Signed, degree-weighted standing of `v` among its neighbors:
/// `(1/sqrt(|N(v)|)) * sum_u sign(u,v) * sigmoid(deg(u) / avg_degree)`.
/// Zero for isolated nodes.
pub fn status_centrality(g: &SignedGraph, v: NodeId) -> Result<f64> {
    if !g.has_node(v) {
        return Err(Error::UnknownNode(v));
    }
    let nbrs = g.neighbors(v);
    if nbrs.is_empty() {
        return Ok(0.0);
    }
    let d_bar = g.avg_degree();
    if d_bar <= 0.0 {
        return Err(Error::InvalidParameter("average degree is zero".into()));
    }
    let sum: f64 = nbrs
        .iter()
        .map(|&(u, s)| s.value() * sigmoid(g.degree(u) as f64 / d_bar))
        .sum();
    Ok(sum / (nbrs.len() as f64).sqrt())
}

/// Degree centrality normalized by the maximum degree; the weighting used
/// for graphs without edge signs.
pub fn degree_influence(g: &SignedGraph, v: NodeId) -> Result<f64> {
    if !g.has_node(v) {
        return Err(Error::UnknownNode(v));
    }
    let max = g.max_degree();
    if max == 0 {
        return Err(Error::InvalidParameter("maximum degree is zero".into()));
    }
    Ok(g.degree(v) as f64 / max as f64)
}

/// Min-max normalization to [0, 1]; a constant column maps to 0.5.
fn min_max_normalize(values: &mut BTreeMap<NodeId, f64>) {
    let lo = values.values().copied().fold(f64::INFINITY, f64::min);
    let hi = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    for v in values.values_mut() {
        *v = if span > 0.0 { (*v - lo) / span } else { 0.5 };
    }
}

/// Softmax over the map's values, stabilized by max subtraction.
fn softmax(values: &BTreeMap<NodeId, f64>) -> BTreeMap<NodeId, f64> {
    let max = values.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: BTreeMap<NodeId, f64> = values.iter().map(|(&v, &x)| (v, (x - max).exp())).collect();
    let total: f64 = exps.values().sum();
    exps.into_iter().map(|(v, e)| (v, e / total)).collect()
}

/// Influence scores for the nodes of one certification region, plus the
/// derived per-edge weights.
#[derive(Debug, Clone, Serialize)]
pub struct InfluenceWeights {
    pub alpha: f64,
    pub balance: BTreeMap<NodeId, f64>,
    pub status: BTreeMap<NodeId, f64>,
    pub unified: BTreeMap<NodeId, f64>,
    /// Softmax-normalized influence; sums to 1 over the region nodes.
    pub influence: BTreeMap<NodeId, f64>,
    pub edge_weights: EdgeWeights,
}

/// Computes balance and status centralities on `g` for the region's
/// nodes, blends them by `alpha`, and derives edge weights
/// `w = min((I(u) + I(v)) / 2, 1)` for every region edge.
///
/// Centralities are evaluated on the graph the model was trained on
/// (pre-deletion), since the weights must reflect the influence of what
/// is being removed.
pub fn unified_influence(
    region: &CertRegion,
    g: &SignedGraph,
    alpha: f64,
) -> Result<InfluenceWeights> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside [0, 1]"
        )));
    }
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }

    let nodes = region.nodes();
    let mut balance = BTreeMap::new();
    let mut status = BTreeMap::new();
    for &v in &nodes {
        balance.insert(v, balance_centrality(g, v)?);
        status.insert(v, status_centrality(g, v)?);
    }

    let mut bal_norm = balance.clone();
    let mut sta_norm: BTreeMap<NodeId, f64> = status.iter().map(|(&v, &x)| (v, x.abs())).collect();
    min_max_normalize(&mut bal_norm);
    min_max_normalize(&mut sta_norm);

    let unified: BTreeMap<NodeId, f64> = nodes
        .iter()
        .map(|&v| (v, alpha * bal_norm[&v] + (1.0 - alpha) * sta_norm[&v]))
        .collect();
    let influence = softmax(&unified);

    let mut weights = BTreeMap::new();
    for &e in &region.region {
        let (u, v) = e.endpoints();
        let w = ((influence[&u] + influence[&v]) / 2.0).min(1.0);
        weights.insert(e, w);
    }

    Ok(InfluenceWeights {
        alpha,
        balance,
        status,
        unified,
        influence,
        edge_weights: EdgeWeights::from_map(weights),
    })
}

/// Edge weights from normalized degree centrality, the variant for
/// unsigned graphs: `w = min((I_deg(u) + I_deg(v)) / 2, 1)`.
pub fn degree_weights(region: &CertRegion, g: &SignedGraph) -> Result<EdgeWeights> {
    if region.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let mut weights = BTreeMap::new();
    for &e in &region.region {
        let (u, v) = e.endpoints();
        let w = ((degree_influence(g, u)? + degree_influence(g, v)?) / 2.0).min(1.0);
        weights.insert(e, w);
    }
    Ok(EdgeWeights::from_map(weights))
}
