//! Certified removal of edges from a trained head.
//!
//! The update approximates retraining with an influence-function step:
//! the weighted gradient of the deleted edges is pushed through the
//! inverse (damped) Hessian of the remaining loss via conjugate gradient,
//! giving `delta = (H + damping I)^-1 g` and
//! `theta~ = theta* + scale * delta + xi`. The Gaussian noise `xi` is
//! calibrated from the worst per-edge update norm so the release is
//! (epsilon, delta)-indistinguishable from retraining; a ledger tracks
//! the budget spent across sequential requests by plain composition.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DeletionRequest, Edge, SignedGraph};
use crate::influence;
use crate::model::{
    self, axpy, dot, l2_norm, EdgeBatch, Embeddings, EncodeConfig, PredictorState, TrainConfig,
};
use crate::region::{self, CertRegion, RegionMode};
use crate::rng;
use crate::weights::{EdgeWeights, WeightMode, WeightSummary};

/// Gaussian-mechanism noise scale:
/// `sigma = sqrt(2 ln(1.25/delta)) * sensitivity / epsilon`.
pub fn noise_scale(epsilon: f64, delta: f64, sensitivity: f64) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} must be > 0"
        )));
    }
    if !(0.0..1.0).contains(&delta) || delta == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta {delta} must be in (0, 1)"
        )));
    }
    if sensitivity < 0.0 {
        return Err(Error::InvalidParameter("sensitivity must be >= 0".into()));
    }
    Ok((2.0 * (1.25 / delta).ln()).sqrt() * sensitivity / epsilon)
}

/// Componentwise sums of the per-request budgets.
pub fn compose_budget(ledger: &[(f64, f64)]) -> Result<(f64, f64)> {
    let mut eps = 0.0;
    let mut del = 0.0;
    for &(e, d) in ledger {
        if e <= 0.0 || !(0.0..1.0).contains(&d) || d == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "invalid ledger entry ({e}, {d})"
            )));
        }
        eps += e;
        del += d;
    }
    Ok((eps, del))
}

/// Privacy parameters for one release plus the running spend ledger.
#[derive(Debug, Clone, Serialize)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub sensitivity: f64,
    pub sigma: f64,
    ledger: Vec<(f64, f64)>,
}

impl PrivacyBudget {
    /// Calibrates sigma from the sensitivity.
    pub fn calibrate(epsilon: f64, delta: f64, sensitivity: f64) -> Result<Self> {
        Ok(PrivacyBudget {
            epsilon,
            delta,
            sensitivity,
            sigma: noise_scale(epsilon, delta, sensitivity)?,
            ledger: Vec::new(),
        })
    }

    pub fn record_spend(&mut self, epsilon: f64, delta: f64) {
        self.ledger.push((epsilon, delta));
    }

    pub fn ledger(&self) -> &[(f64, f64)] {
        &self.ledger
    }

    /// Total budget spent so far; (0, 0) for an empty ledger.
    pub fn composed(&self) -> Result<(f64, f64)> {
        compose_budget(&self.ledger)
    }
}

/// Result of one conjugate-gradient solve.
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    /// True residual norm `||A x - b||`.
    pub residual: f64,
    pub iterations: usize,
    /// False when the iteration cap stopped the solve first.
    pub converged: bool,
}

/// Solves `A x = b` for a symmetric positive-definite operator given as a
/// matrix-vector product, stopping once
/// `||A x - b|| <= tol * max(1, ||b||)` or after `max_iter` iterations.
pub fn cg_solve<F>(apply: F, b: &[f64], tol: f64, max_iter: usize) -> Result<CgOutcome>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if tol <= 0.0 {
        return Err(Error::InvalidParameter("cg tolerance must be > 0".into()));
    }
    let n = b.len();
    let threshold = tol * l2_norm(b).max(1.0);

    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r);
    let mut iterations = 0;
    let mut done = rs.sqrt() <= threshold;

    while !done && iterations < max_iter {
        let ap = apply(&p)?;
        let pap = dot(&p, &ap);
        if !pap.is_finite() || pap <= 0.0 {
            return Err(Error::SolverFailure(format!(
                "operator is not positive definite (p^T A p = {pap})"
            )));
        }
        let alpha = rs / pap;
        axpy(&mut x, alpha, &p);
        axpy(&mut r, -alpha, &ap);
        let rs_new = dot(&r, &r);
        if !rs_new.is_finite() {
            return Err(Error::SolverFailure("non-finite residual".into()));
        }
        iterations += 1;
        if rs_new.sqrt() <= threshold {
            done = true;
        } else {
            let beta = rs_new / rs;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
        }
        rs = rs_new;
    }

    // Report the true residual, not the recursively updated one.
    let ax = apply(&x)?;
    let true_resid: Vec<f64> = ax.iter().zip(b).map(|(a, bi)| a - bi).collect();
    let residual = l2_norm(&true_resid);
    Ok(CgOutcome {
        solution: x,
        residual,
        iterations,
        converged: residual <= threshold,
    })
}

/// Difference of the weighted loss gradients with and without the deleted
/// edges, evaluated at theta*; the regularizer cancels exactly, leaving
/// the weighted sum of the deleted edges' gradients.
pub fn weighted_gradient(
    state: &PredictorState,
    full: &EdgeBatch,
    deleted: &BTreeSet<Edge>,
) -> Result<Vec<f64>> {
    if deleted.is_empty() {
        return Err(Error::InvalidRequest("no edges to unlearn".into()));
    }
    let remaining = full.without(deleted);
    let g_full = model::gradient(state, full);
    let g_rem = model::gradient(state, &remaining);
    Ok(g_full.iter().zip(&g_rem).map(|(a, b)| a - b).collect())
}

/// Worst-case per-edge update norm together with its closed-form cap.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sensitivity {
    /// `max_e ||(H + damping I)^-1 w_e grad_e||`, solved edge by edge.
    pub measured: f64,
    /// `max_e w_e ||h_e|| / lambda_eff`, from the curvature floor.
    pub analytic_cap: f64,
}

/// Measures the update sensitivity by solving one damped system per
/// deleted edge and taking the largest solution norm. `lambda_eff` must
/// be the curvature floor of `apply` (the L2 coefficient plus damping);
/// the measurement may not exceed the cap it implies.
pub fn sensitivity<F>(
    state: &PredictorState,
    full: &EdgeBatch,
    deleted: &BTreeSet<Edge>,
    apply: F,
    lambda_eff: f64,
    cg_tol: f64,
    cg_max_iter: usize,
) -> Result<Sensitivity>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if deleted.is_empty() {
        return Err(Error::InvalidRequest("no edges to unlearn".into()));
    }
    let mut measured = 0.0f64;
    let mut cap = 0.0f64;
    for item in full.items().iter().filter(|it| deleted.contains(&it.edge)) {
        let mut rhs = model::grad_edge(state, item);
        for x in &mut rhs {
            *x *= item.weight;
        }
        cap = cap.max(item.weight * l2_norm(&item.rep) / lambda_eff);
        let out = cg_solve(&apply, &rhs, cg_tol, cg_max_iter)?;
        measured = measured.max(l2_norm(&out.solution));
    }
    if measured > cap * (1.0 + 1e-9) + 1e-12 {
        return Err(Error::SolverFailure(format!(
            "measured sensitivity {measured} exceeds its cap {cap}"
        )));
    }
    Ok(Sensitivity {
        measured,
        analytic_cap: cap,
    })
}

/// Settings for one unlearning run.
#[derive(Debug, Clone, Serialize)]
pub struct UnlearnConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub region: RegionMode,
    pub weights: WeightMode,
    /// Curvature added to the Hessian before solving.
    pub damping: f64,
    /// Multiplier on the solved update.
    pub update_scale: f64,
    /// When false, xi is omitted (no privacy guarantee).
    pub noise: bool,
    pub cg_tol: f64,
    pub cg_max_iter: usize,
    pub seed: u64,
}

impl Default for UnlearnConfig {
    fn default() -> Self {
        UnlearnConfig {
            epsilon: 1.0,
            delta: 1e-5,
            region: RegionMode::default(),
            weights: WeightMode::default(),
            damping: 0.1,
            update_scale: 1.0,
            noise: true,
            cg_tol: 1e-6,
            cg_max_iter: 20,
            seed: 0,
        }
    }
}

/// The parameter update produced by [`unlearn_update`].
#[derive(Debug, Clone, Serialize)]
pub struct UpdateOutcome {
    pub theta_tilde: Vec<f64>,
    pub delta_theta: Vec<f64>,
    pub cg_residual: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
    pub sensitivity: f64,
    pub sensitivity_cap: f64,
    pub sigma: f64,
}

/// Computes the influence-function update and noised parameters for an
/// explicit deleted-edge set.
///
/// `full` must be the batch theta* was trained on, weights included; the
/// Hessian is taken over `full` minus `deleted`. An empty `deleted` set
/// short-circuits to `theta~ = theta*` with zero noise.
pub fn unlearn_update(
    state: &PredictorState,
    full: &EdgeBatch,
    deleted: &BTreeSet<Edge>,
    cfg: &UnlearnConfig,
) -> Result<UpdateOutcome> {
    let dim = state.dim();
    if deleted.is_empty() {
        return Ok(UpdateOutcome {
            theta_tilde: state.theta.clone(),
            delta_theta: vec![0.0; dim],
            cg_residual: 0.0,
            cg_iterations: 0,
            cg_converged: true,
            sensitivity: 0.0,
            sensitivity_cap: 0.0,
            sigma: 0.0,
        });
    }

    let remaining = full.without(deleted);
    let g_vec = weighted_gradient(state, full, deleted)?;
    let damping = cfg.damping;
    let apply = |v: &[f64]| -> Result<Vec<f64>> {
        let mut out = model::hvp(state, &remaining, v)?;
        if damping != 0.0 {
            axpy(&mut out, damping, v);
        }
        Ok(out)
    };

    let solve = cg_solve(apply, &g_vec, cfg.cg_tol, cfg.cg_max_iter)?;
    let lambda_eff = state.lambda + damping;
    let sens = sensitivity(
        state,
        full,
        deleted,
        apply,
        lambda_eff,
        cfg.cg_tol,
        cfg.cg_max_iter,
    )?;
    let sigma = if cfg.noise {
        noise_scale(cfg.epsilon, cfg.delta, sens.measured)?
    } else {
        0.0
    };

    // First-order optimality of theta* on the full loss gives
    // grad_remaining(theta*) = -g, so the Newton step toward the retrained
    // optimum is +H^-1 g.
    let mut theta_tilde = state.theta.clone();
    axpy(&mut theta_tilde, cfg.update_scale, &solve.solution);
    if cfg.noise && sigma > 0.0 {
        let mut noise_rng = rng::stream(cfg.seed, "unlearn-noise");
        let xi = rng::normal_vec(&mut noise_rng, dim);
        axpy(&mut theta_tilde, sigma, &xi);
    }

    Ok(UpdateOutcome {
        theta_tilde,
        delta_theta: solve.solution,
        cg_residual: solve.residual,
        cg_iterations: solve.iterations,
        cg_converged: solve.converged,
        sensitivity: sens.measured,
        sensitivity_cap: sens.analytic_cap,
        sigma,
    })
}

/// Builds the certification region for `deleted` and derives the edge
/// weights for the configured mode. Centralities are evaluated on `g`,
/// the graph the model was trained on.
pub fn region_and_weights(
    g: &SignedGraph,
    deleted: &BTreeSet<Edge>,
    mode: RegionMode,
    weights: WeightMode,
) -> Result<(CertRegion, EdgeWeights)> {
    let region = region::build_region(g, deleted, mode)?;
    let edge_weights = match weights {
        WeightMode::Sociological { alpha } => {
            influence::unified_influence(&region, g, alpha)?.edge_weights
        }
        WeightMode::Uniform => EdgeWeights::uniform(),
        WeightMode::Degree => influence::degree_weights(&region, g)?,
    };
    Ok((region, edge_weights))
}

/// Full record of one unlearning run.
#[derive(Debug, Clone, Serialize)]
pub struct UnlearnResult {
    pub theta_tilde: Vec<f64>,
    pub delta_theta: Vec<f64>,
    pub cg_residual: f64,
    pub cg_iterations: usize,
    pub cg_converged: bool,
    pub sensitivity: f64,
    pub sensitivity_cap: f64,
    pub sigma: f64,
    pub deleted_edges: usize,
    pub region_edges: usize,
    pub region_iterations: usize,
    pub region_truncated: bool,
    pub weight_summary: Option<WeightSummary>,
    /// Region construction + weighting + update; training excluded.
    pub wall_time_s: f64,
}

impl UnlearnResult {
    fn from_parts(
        update: UpdateOutcome,
        region: Option<&CertRegion>,
        weights: &EdgeWeights,
        deleted: usize,
        wall_time_s: f64,
    ) -> Self {
        UnlearnResult {
            theta_tilde: update.theta_tilde,
            delta_theta: update.delta_theta,
            cg_residual: update.cg_residual,
            cg_iterations: update.cg_iterations,
            cg_converged: update.cg_converged,
            sensitivity: update.sensitivity,
            sensitivity_cap: update.sensitivity_cap,
            sigma: update.sigma,
            deleted_edges: deleted,
            region_edges: region.map_or(0, CertRegion::len),
            region_iterations: region.map_or(0, |r| r.iterations),
            region_truncated: region.is_some_and(|r| r.truncated),
            weight_summary: weights.summary(),
            wall_time_s,
        }
    }
}

/// Everything produced by the end-to-end entry point.
#[derive(Debug)]
pub struct UnlearnRun {
    pub result: UnlearnResult,
    /// Parameters trained on the full edge set (weighted as configured).
    pub state: PredictorState,
    pub embeddings: Embeddings,
    pub remaining: SignedGraph,
    pub deleted: BTreeSet<Edge>,
}

/// End-to-end unlearning for a deletion request: encodes `g`, builds the
/// region and weights, trains theta* on the weighted full loss, and
/// applies the certified update.
pub fn unlearn(
    g: &SignedGraph,
    request: &DeletionRequest,
    cfg: &UnlearnConfig,
    encode_cfg: &EncodeConfig,
    train_cfg: &TrainConfig,
) -> Result<UnlearnRun> {
    let emb = model::encode(g, encode_cfg);
    let (remaining, deleted) = g.apply_deletion(request)?;

    let start = Instant::now();
    let (region, edge_weights) = if deleted.is_empty() {
        (None, EdgeWeights::uniform())
    } else {
        let (r, w) = region_and_weights(g, &deleted, cfg.region, cfg.weights)?;
        (Some(r), w)
    };
    let setup_time = start.elapsed().as_secs_f64();

    let full = EdgeBatch::full(g, &edge_weights, &emb)?;
    let state = model::train(&full, encode_cfg.dim, train_cfg)?;

    let update_start = Instant::now();
    let update = unlearn_update(&state, &full, &deleted, cfg)?;
    let wall_time_s = setup_time + update_start.elapsed().as_secs_f64();

    let result = UnlearnResult::from_parts(
        update,
        region.as_ref(),
        &edge_weights,
        deleted.len(),
        wall_time_s,
    );
    Ok(UnlearnRun {
        result,
        state,
        embeddings: emb,
        remaining,
        deleted,
    })
}
