//! Bundled synthetic signed graphs.
//!
//! A seeded planted-community generator: edges inside a community are
//! positive, edges across communities negative, with a small flip
//! probability for realism. Dense communities plant plenty of triangles,
//! which certification-region growth and balance scoring both need. The
//! defaults give roughly 200 nodes and several hundred edges, enough for
//! desk-scale experiments without downloads.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Sign, SignedGraph};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub nodes: u32,
    pub communities: u32,
    /// Edge probability inside a community.
    pub p_intra: f64,
    /// Edge probability across communities.
    pub p_inter: f64,
    /// Probability of flipping the structural sign.
    pub sign_noise: f64,
    pub feature_dim: usize,
    /// Multiplier on the synthesized features.
    pub feature_scale: f64,
    /// Noise mixed into the community signature, per feature entry.
    pub feature_noise: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            nodes: 200,
            communities: 40,
            p_intra: 0.95,
            p_inter: 0.003,
            sign_noise: 0.1,
            feature_dim: 20,
            // Keeps edge representations below the norm cap so their
            // magnitudes stay informative.
            feature_scale: 0.3,
            feature_noise: 0.5,
            seed: 0,
        }
    }
}

/// Generates the planted-community graph for `cfg`; deterministic in the
/// seed.
///
/// Node features are a per-community signature vector plus independent
/// noise, so the community structure that drives the edge signs is also
/// recoverable from features.
pub fn synthetic_graph(cfg: &SyntheticConfig) -> SignedGraph {
    let mut edge_rng = rng::stream(cfg.seed, "synthetic-edges");
    let community = |v: u32| v % cfg.communities;
    let mut triples = Vec::new();
    for u in 0..cfg.nodes {
        for v in u + 1..cfg.nodes {
            let same = community(u) == community(v);
            let p = if same { cfg.p_intra } else { cfg.p_inter };
            if edge_rng.random::<f64>() < p {
                let mut sign = if same { Sign::Positive } else { Sign::Negative };
                if edge_rng.random::<f64>() < cfg.sign_noise {
                    sign = match sign {
                        Sign::Positive => Sign::Negative,
                        Sign::Negative => Sign::Positive,
                    };
                }
                triples.push((u, v, sign));
            }
        }
    }

    let mut feat_rng = rng::stream(cfg.seed, "synthetic-features");
    let signatures: Vec<Vec<f64>> = (0..cfg.communities)
        .map(|_| rng::normal_vec(&mut feat_rng, cfg.feature_dim))
        .collect();
    let mut features = Vec::with_capacity(cfg.nodes as usize * cfg.feature_dim);
    for v in 0..cfg.nodes {
        let base = &signatures[community(v) as usize];
        for &b in base {
            features.push(
                cfg.feature_scale * (b + cfg.feature_noise * rng::standard_normal(&mut feat_rng)),
            );
        }
    }

    SignedGraph::from_signed_edges(cfg.nodes, triples)
        .expect("generator produces valid edges")
        .with_features(features, cfg.feature_dim)
}
