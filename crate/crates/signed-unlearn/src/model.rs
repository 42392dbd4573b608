//! Signed link predictor: a frozen one-layer signed encoder producing
//! node embeddings, with a trainable logistic head over edge
//! representations.
//!
//! Freezing the encoder keeps the trainable problem strictly convex, so
//! the head has a unique optimum and the influence-function update can be
//! checked against an actual retrained optimum. The head is fit by
//! full-batch gradient descent with a Barzilai-Borwein step proposal and
//! Armijo backtracking.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, SignedGraph};
use crate::rng;
use crate::weights::EdgeWeights;

/// Encoder settings.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EncodeConfig {
    /// Embedding width d.
    pub dim: usize,
    /// Norm cap for edge representations.
    pub clip: f64,
    pub seed: u64,
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            dim: 20,
            clip: 1.0,
            seed: 0,
        }
    }
}

/// Frozen node embeddings plus the edge-representation rule.
#[derive(Debug, Clone, PartialEq)]
pub struct Embeddings {
    dim: usize,
    clip: f64,
    vecs: Vec<f64>,
}

impl Embeddings {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn clip(&self) -> f64 {
        self.clip
    }

    pub fn node(&self, v: u32) -> &[f64] {
        &self.vecs[v as usize * self.dim..(v as usize + 1) * self.dim]
    }

    /// Edge representation: elementwise product of the endpoint
    /// embeddings, norm-clipped to the configured cap.
    pub fn edge_repr(&self, e: Edge) -> Vec<f64> {
        let (u, v) = e.endpoints();
        let hu = self.node(u);
        let hv = self.node(v);
        let mut h: Vec<f64> = hu.iter().zip(hv).map(|(a, b)| a * b).collect();
        let norm = l2_norm(&h);
        if norm > self.clip {
            let s = self.clip / norm;
            for x in &mut h {
                *x *= s;
            }
        }
        h
    }
}

/// Runs the frozen encoder: one signed aggregation pass over neighbor
/// features followed by a seeded random projection and tanh.
///
/// `h_u = tanh(P [x_u ; m+_u - m-_u])` where `m+`/`m-` are the means of
/// the positive / negative neighbors' features (zero when a node has
/// none) and `P` is a fixed `dim x 2 d_f` projection drawn once from the
/// seed. Identical (graph, config) inputs give identical embeddings.
pub fn encode(g: &SignedGraph, cfg: &EncodeConfig) -> Embeddings {
    let d_f = g.feature_dim();
    let in_dim = 2 * d_f;
    let mut proj_rng = rng::stream(cfg.seed, "encoder-projection");
    let scale = 1.0 / (in_dim as f64).sqrt();
    let proj: Vec<f64> = rng::normal_vec(&mut proj_rng, cfg.dim * in_dim)
        .into_iter()
        .map(|x| x * scale)
        .collect();

    let n = g.id_space() as usize;
    let mut vecs = vec![0.0; n * cfg.dim];
    let mut input = vec![0.0; in_dim];
    for u in 0..n as u32 {
        let x = g.features_of(u);
        input[..d_f].copy_from_slice(x);
        let mut pos = vec![0.0; d_f];
        let mut neg = vec![0.0; d_f];
        let mut n_pos = 0usize;
        let mut n_neg = 0usize;
        for &(v, s) in g.neighbors(u) {
            let fv = g.features_of(v);
            match s {
                crate::graph::Sign::Positive => {
                    for (acc, &f) in pos.iter_mut().zip(fv) {
                        *acc += f;
                    }
                    n_pos += 1;
                }
                crate::graph::Sign::Negative => {
                    for (acc, &f) in neg.iter_mut().zip(fv) {
                        *acc += f;
                    }
                    n_neg += 1;
                }
            }
        }
        for i in 0..d_f {
            let p = if n_pos > 0 {
                pos[i] / n_pos as f64
            } else {
                0.0
            };
            let m = if n_neg > 0 {
                neg[i] / n_neg as f64
            } else {
                0.0
            };
            input[d_f + i] = p - m;
        }
        let out = &mut vecs[u as usize * cfg.dim..(u as usize + 1) * cfg.dim];
        for (row, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (col, &xin) in input.iter().enumerate() {
                acc += proj[row * in_dim + col] * xin;
            }
            *o = acc.tanh();
        }
    }
    Embeddings {
        dim: cfg.dim,
        clip: cfg.clip,
        vecs,
    }
}

/// Trainable head parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictorState {
    pub theta: Vec<f64>,
    /// L2 coefficient; strictly positive so the objective is strongly convex.
    pub lambda: f64,
}

impl PredictorState {
    pub fn zeros(dim: usize, lambda: f64) -> Self {
        PredictorState {
            theta: vec![0.0; dim],
            lambda,
        }
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    /// Sigmoid of the head logit for one edge representation.
    pub fn predict(&self, h: &[f64]) -> Result<f64> {
        if h.len() != self.theta.len() {
            return Err(Error::DimensionMismatch {
                expected: self.theta.len(),
                got: h.len(),
            });
        }
        Ok(sigmoid(dot(&self.theta, h)))
    }

    pub fn logit(&self, h: &[f64]) -> f64 {
        dot(&self.theta, h)
    }

    /// Writes a one-line JSON header followed by the raw little-endian
    /// parameter payload.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let header = serde_json::json!({ "dim": self.theta.len(), "lambda": self.lambda });
        let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        writeln!(file, "{header}").map_err(io_err)?;
        for x in &self.theta {
            file.write_all(&x.to_le_bytes()).map_err(io_err)?;
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut file = std::fs::File::open(path).map_err(io_err)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(io_err)?;
        let newline = bytes
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::InvalidParameter("missing model header".into()))?;
        #[derive(Deserialize)]
        struct Header {
            dim: usize,
            lambda: f64,
        }
        let header: Header = serde_json::from_slice(&bytes[..newline])?;
        let payload = &bytes[newline + 1..];
        if payload.len() != header.dim * 8 {
            return Err(Error::DimensionMismatch {
                expected: header.dim * 8,
                got: payload.len(),
            });
        }
        let theta = payload
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(PredictorState {
            theta,
            lambda: header.lambda,
        })
    }
}

/// One edge prepared for the loss: label, weight, and representation.
#[derive(Debug, Clone)]
pub struct BatchItem {
    pub edge: Edge,
    pub label: f64,
    pub weight: f64,
    pub rep: Vec<f64>,
}

/// Edges in canonical order with cached representations, labels, and
/// weights; the currency of every loss, gradient, and curvature
/// computation. The fixed order makes all reductions reproducible.
#[derive(Debug, Clone, Default)]
pub struct EdgeBatch {
    pub(crate) items: Vec<BatchItem>,
}

impl EdgeBatch {
    /// Prepares `edges` (signs looked up in `g`) with `weights` applied;
    /// edges absent from `g` are an error.
    pub fn new(
        g: &SignedGraph,
        edges: impl IntoIterator<Item = Edge>,
        weights: &EdgeWeights,
        emb: &Embeddings,
    ) -> Result<Self> {
        let mut sorted: Vec<Edge> = edges.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        let mut items = Vec::with_capacity(sorted.len());
        for e in sorted {
            let sign = g.sign_of_edge(e).ok_or_else(|| {
                let (u, v) = e.endpoints();
                Error::UnknownEdge(u, v)
            })?;
            items.push(BatchItem {
                edge: e,
                label: sign.label(),
                weight: weights.get(e),
                rep: emb.edge_repr(e),
            });
        }
        Ok(EdgeBatch { items })
    }

    /// Every edge of `g` with the given weights.
    pub fn full(g: &SignedGraph, weights: &EdgeWeights, emb: &Embeddings) -> Result<Self> {
        Self::new(g, g.edges().map(|(e, _)| e), weights, emb)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[BatchItem] {
        &self.items
    }

    /// The subset whose edges are not in `drop`.
    pub fn without(&self, drop: &std::collections::BTreeSet<Edge>) -> EdgeBatch {
        EdgeBatch {
            items: self
                .items
                .iter()
                .filter(|it| !drop.contains(&it.edge))
                .cloned()
                .collect(),
        }
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// log(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn l2_norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Weighted cross-entropy over the batch plus the L2 term:
/// `sum_e w_e * bce(f(h_e), y_e) + (lambda/2) ||theta||^2`.
pub fn loss(state: &PredictorState, batch: &EdgeBatch) -> f64 {
    let mut total = 0.0;
    for it in &batch.items {
        let z = dot(&state.theta, &it.rep);
        // bce = softplus(z) - y z, valid for y in {0, 1}.
        total += it.weight * (softplus(z) - it.label * z);
    }
    total + 0.5 * state.lambda * dot(&state.theta, &state.theta)
}

/// Gradient of [`loss`] with respect to theta.
pub fn gradient(state: &PredictorState, batch: &EdgeBatch) -> Vec<f64> {
    let mut grad = vec![0.0; state.dim()];
    for it in &batch.items {
        let f = sigmoid(dot(&state.theta, &it.rep));
        axpy(&mut grad, it.weight * (f - it.label), &it.rep);
    }
    axpy(&mut grad, state.lambda, &state.theta);
    grad
}

/// Per-edge loss gradient `(f - y) h_uv`; its norm never exceeds the
/// representation norm.
pub fn grad_edge(state: &PredictorState, item: &BatchItem) -> Vec<f64> {
    let f = sigmoid(dot(&state.theta, &item.rep));
    item.rep.iter().map(|&h| (f - item.label) * h).collect()
}

/// Hessian-vector product of [`loss`] without materializing the matrix:
/// `[sum_e w_e f(1-f) h h^T + lambda I] vec`.
pub fn hvp(state: &PredictorState, batch: &EdgeBatch, vec: &[f64]) -> Result<Vec<f64>> {
    if vec.len() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.dim(),
            got: vec.len(),
        });
    }
    let mut out: Vec<f64> = vec.iter().map(|&x| state.lambda * x).collect();
    for it in &batch.items {
        let f = sigmoid(dot(&state.theta, &it.rep));
        let coeff = it.weight * f * (1.0 - f) * dot(&it.rep, vec);
        axpy(&mut out, coeff, &it.rep);
    }
    Ok(out)
}

/// Initial parameters for training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitMode {
    Zero,
    Seeded(u64),
}

/// Training settings.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lambda: f64,
    pub max_epochs: usize,
    /// Stop once the gradient norm falls to this.
    pub grad_tol: f64,
    pub init: InitMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda: 1e-4,
            max_epochs: 500,
            grad_tol: 1e-8,
            init: InitMode::Zero,
        }
    }
}

/// Fits the head on `batch` to the unique optimum of the strongly convex
/// objective by full-batch gradient descent with Armijo backtracking.
/// Also serves as the retraining oracle when handed the remaining edges.
///
/// Each epoch retries double the previously accepted step before
/// backtracking. Errors with the final gradient norm if the tolerance is
/// not reached within `max_epochs`.
pub fn train(batch: &EdgeBatch, dim: usize, cfg: &TrainConfig) -> Result<PredictorState> {
    if batch.is_empty() {
        return Err(Error::InvalidParameter(
            "cannot train on an empty edge set".into(),
        ));
    }
    if cfg.lambda <= 0.0 {
        return Err(Error::InvalidParameter("lambda must be positive".into()));
    }
    let mut state = match cfg.init {
        InitMode::Zero => PredictorState::zeros(dim, cfg.lambda),
        InitMode::Seeded(seed) => {
            let mut r = rng::stream(seed, "train-init");
            PredictorState {
                theta: rng::normal_vec(&mut r, dim),
                lambda: cfg.lambda,
            }
        }
    };

    let mut cur_loss = loss(&state, batch);
    let mut grad = gradient(&state, batch);
    let mut step = 1.0f64;

    for _ in 0..cfg.max_epochs {
        let gnorm = l2_norm(&grad);
        if gnorm <= cfg.grad_tol {
            return Ok(state);
        }

        // Armijo backtracking. Near the optimum the exact decrease drops
        // below the representable resolution of the loss; once that
        // happens, acceptance switches to requiring a strict gradient-norm
        // contraction, which stays computable far past the loss floor.
        let allowance = 64.0 * f64::EPSILON * (1.0 + cur_loss.abs());
        let mut accepted = false;
        for _ in 0..80 {
            let mut cand = state.clone();
            axpy(&mut cand.theta, -step, &grad);
            let cand_loss = loss(&cand, batch);
            let required = 1e-4 * step * gnorm * gnorm;
            if required >= allowance && cand_loss <= cur_loss - required {
                grad = gradient(&cand, batch);
                state = cand;
                cur_loss = cand_loss;
                step = (step * 2.0).min(1e6);
                accepted = true;
                break;
            }
            if required < allowance && cand_loss <= cur_loss + allowance {
                let cand_grad = gradient(&cand, batch);
                if l2_norm(&cand_grad) < gnorm {
                    grad = cand_grad;
                    state = cand;
                    cur_loss = cand_loss;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            // Step underflow: the iterate is numerically stationary.
            let gnorm = l2_norm(&grad);
            if gnorm <= cfg.grad_tol {
                return Ok(state);
            }
            return Err(Error::NonConvergence {
                epochs: cfg.max_epochs,
                grad_norm: gnorm,
            });
        }
    }

    let gnorm = l2_norm(&gradient(&state, batch));
    if gnorm <= cfg.grad_tol {
        Ok(state)
    } else {
        Err(Error::NonConvergence {
            epochs: cfg.max_epochs,
            grad_norm: gnorm,
        })
    }
}
