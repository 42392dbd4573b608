//! Evaluation harness: sign-prediction Macro-F1, membership-inference
//! AUC over deleted edges, and distance diagnostics against the
//! retraining oracle.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, SignedGraph};
use crate::model::{l2_norm, Embeddings, PredictorState};
use crate::rng;

/// Unweighted mean of the per-class F1 scores over the binary classes.
///
/// A class with undefined precision or recall (no predicted or no actual
/// members) contributes an F1 of zero.
pub fn macro_f1(predictions: &[u8], labels: &[u8]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: predictions.len(),
        });
    }
    if predictions.is_empty() {
        return Err(Error::InvalidParameter("empty prediction list".into()));
    }
    let f1_for = |class: u8| {
        let mut tp = 0usize;
        let mut fp = 0usize;
        let mut fn_ = 0usize;
        for (&p, &y) in predictions.iter().zip(labels) {
            match (p == class, y == class) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_ += 1,
                (false, false) => {}
            }
        }
        if tp == 0 {
            return 0.0;
        }
        let precision = tp as f64 / (tp + fp) as f64;
        let recall = tp as f64 / (tp + fn_) as f64;
        2.0 * precision * recall / (precision + recall)
    };
    Ok((f1_for(1) + f1_for(0)) / 2.0)
}

/// Exact rank-statistic AUC: the probability that a member score exceeds
/// a non-member score, ties counted half.
pub fn auc_from_scores(members: &[f64], nonmembers: &[f64]) -> Result<f64> {
    if members.is_empty() || nonmembers.is_empty() {
        return Err(Error::InvalidParameter("empty score set".into()));
    }
    let mut wins = 0.0f64;
    for &m in members {
        for &n in nonmembers {
            if m > n {
                wins += 1.0;
            } else if m == n {
                wins += 0.5;
            }
        }
    }
    Ok(wins / (members.len() as f64 * nonmembers.len() as f64))
}

/// Membership-inference AUC for a model: confidence is the absolute head
/// logit on the edge representation. Members are the unlearned edges;
/// non-members must be pairs absent from the graph. Lower means less
/// leakage.
pub fn mi_auc(
    state: &PredictorState,
    emb: &Embeddings,
    g: &SignedGraph,
    members: &BTreeSet<Edge>,
    nonmembers: &[Edge],
) -> Result<f64> {
    if members.is_empty() || nonmembers.is_empty() {
        return Err(Error::InvalidParameter(
            "empty member or non-member set".into(),
        ));
    }
    for e in nonmembers {
        if g.has_edge(*e) {
            let (u, v) = e.endpoints();
            return Err(Error::NonMemberIsEdge(u, v));
        }
    }
    let score = |e: &Edge| state.logit(&emb.edge_repr(*e)).abs();
    let member_scores: Vec<f64> = members.iter().map(score).collect();
    let nonmember_scores: Vec<f64> = nonmembers.iter().map(score).collect();
    auc_from_scores(&member_scores, &nonmember_scores)
}

/// Seeded rejection sampling of `count` distinct node pairs absent from
/// the graph's edge set (self-loops excluded).
pub fn sample_nonmembers(g: &SignedGraph, count: usize, seed: u64) -> Result<Vec<Edge>> {
    let nodes: Vec<u32> = g.nodes().collect();
    let n = nodes.len();
    if n < 2 {
        return Err(Error::PoolTooSmall {
            requested: count,
            available: 0,
        });
    }
    let absent = n * (n - 1) / 2 - g.num_edges();
    if count > absent {
        return Err(Error::PoolTooSmall {
            requested: count,
            available: absent,
        });
    }
    let mut out = Vec::with_capacity(count);
    let mut seen = BTreeSet::new();
    let mut rng = rng::stream(seed, "nonmember-sampling");
    while out.len() < count {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let e = Edge::new(nodes[i], nodes[j]);
        if !g.has_edge(e) && seen.insert(e) {
            out.push(e);
        }
    }
    Ok(out)
}

/// Metrics for one unlearning run.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub macro_f1: f64,
    pub mi_auc: f64,
    pub unlearn_time_s: f64,
    pub retrain_time_s: f64,
    /// `||theta~ - theta*||`.
    pub dist_to_original: f64,
    /// `||theta~ - theta_r*||`.
    pub dist_to_retrained: f64,
}

/// Scores the unlearned head on the held-out split and the deleted edges.
///
/// Sign predictions threshold the head output at 0.5. Non-members for the
/// inference attack are sampled fresh from the given seed and are
/// disjoint from the full graph's edges.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    g_full: &SignedGraph,
    emb: &Embeddings,
    original: &PredictorState,
    unlearned: &PredictorState,
    retrained: &PredictorState,
    test_edges: &BTreeSet<Edge>,
    members: &BTreeSet<Edge>,
    nonmember_count: usize,
    seed: u64,
    unlearn_time_s: f64,
    retrain_time_s: f64,
) -> Result<EvalReport> {
    let mut predictions = Vec::with_capacity(test_edges.len());
    let mut labels = Vec::with_capacity(test_edges.len());
    for e in test_edges {
        let sign = g_full.sign_of_edge(*e).ok_or_else(|| {
            let (u, v) = e.endpoints();
            Error::UnknownEdge(u, v)
        })?;
        let f = unlearned.predict(&emb.edge_repr(*e))?;
        predictions.push(u8::from(f >= 0.5));
        labels.push(u8::from(sign.label() > 0.5));
    }
    let macro_f1 = macro_f1(&predictions, &labels)?;

    let nonmembers = sample_nonmembers(g_full, nonmember_count, seed)?;
    let mi = mi_auc(unlearned, emb, g_full, members, &nonmembers)?;

    let dist = |a: &PredictorState, b: &PredictorState| {
        let d: Vec<f64> = a.theta.iter().zip(&b.theta).map(|(x, y)| x - y).collect();
        l2_norm(&d)
    };
    Ok(EvalReport {
        macro_f1,
        mi_auc: mi,
        unlearn_time_s,
        retrain_time_s,
        dist_to_original: dist(unlearned, original),
        dist_to_retrained: dist(unlearned, retrained),
    })
}
