//! Certified removal of edges, compared against the retraining oracle.

use std::collections::BTreeSet;

use signed_unlearn::graph::{DeletionRequest, Edge};
use signed_unlearn::model::EncodeConfig;
use signed_unlearn::model::{l2_norm, train, InitMode, TrainConfig};
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};
use signed_unlearn::unlearn::{unlearn, UnlearnConfig};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    l2_norm(&d)
}

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    let deleted: BTreeSet<Edge> = g.edge_set().into_iter().take(3).collect();
    let request = DeletionRequest::Edges(deleted);

    let unlearn_cfg = UnlearnConfig {
        noise: false, // compare the bare update against retraining first
        damping: 0.0,
        cg_tol: 1e-10,
        cg_max_iter: 300,
        seed: 7,
        ..UnlearnConfig::default()
    };
    let encode_cfg = EncodeConfig {
        dim: 20,
        clip: 1.0,
        seed: 7,
    };
    let train_cfg = TrainConfig {
        lambda: 0.1,
        max_epochs: 60_000,
        grad_tol: 1e-9,
        init: InitMode::Zero,
    };

    let run = unlearn(&g, &request, &unlearn_cfg, &encode_cfg, &train_cfg)?;
    println!(
        "region: {} edges, {} passes; cg converged in {} iterations (residual {:.2e})",
        run.result.region_edges,
        run.result.region_iterations,
        run.result.cg_iterations,
        run.result.cg_residual
    );

    // Retraining oracle: same embeddings and weights, remaining edges only.
    let (_, weights) = signed_unlearn::unlearn::region_and_weights(
        &g,
        &run.deleted,
        unlearn_cfg.region,
        unlearn_cfg.weights,
    )?;
    let weighted = signed_unlearn::EdgeBatch::full(&g, &weights, &run.embeddings)?;
    let remaining = weighted.without(&run.deleted);
    let retrained = train(&remaining, 20, &train_cfg)?;

    let before = dist(&run.state.theta, &retrained.theta);
    let after = dist(&run.result.theta_tilde, &retrained.theta);
    println!("distance to retrained head: before update {before:.6}, after update {after:.6}");
    println!(
        "update recovers {:.1}% of the gap",
        100.0 * (1.0 - after / before)
    );

    // The certified path adds calibrated noise on top.
    let noisy_cfg = UnlearnConfig {
        noise: true,
        ..unlearn_cfg
    };
    let noisy = unlearn(&g, &request, &noisy_cfg, &encode_cfg, &train_cfg)?;
    println!(
        "certified run: sensitivity {:.3e} (cap {:.3e}) -> sigma {:.3e} at (epsilon, delta) = ({}, {})",
        noisy.result.sensitivity,
        noisy.result.sensitivity_cap,
        noisy.result.sigma,
        noisy_cfg.epsilon,
        noisy_cfg.delta
    );
    Ok(())
}
