//! Membership-inference evaluation: can deleted edges be told apart from
//! pairs that never existed, before and after unlearning?

use signed_unlearn::eval::{mi_auc, sample_nonmembers};
use signed_unlearn::graph::Scenario;
use signed_unlearn::model::{encode, train, EdgeBatch, EncodeConfig, InitMode, TrainConfig};
use signed_unlearn::pipeline::{sample_deletion, split_edges};
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};
use signed_unlearn::unlearn::{region_and_weights, unlearn_update, UnlearnConfig};
use signed_unlearn::PredictorState;

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    let (train_edges, _) = split_edges(&g, 0.2, 11);
    let g_train = g.restricted_to_edges(&train_edges);
    let request = sample_deletion(&g_train, Scenario::Edge, 0.025, None, 11)?;
    let (_, deleted) = g_train.apply_deletion(&request)?;

    let ucfg = UnlearnConfig {
        cg_max_iter: 200,
        seed: 11,
        ..UnlearnConfig::default()
    };
    let (_, weights) = region_and_weights(&g_train, &deleted, ucfg.region, ucfg.weights)?;
    let emb = encode(
        &g_train,
        &EncodeConfig {
            dim: 20,
            clip: 1.0,
            seed: 11,
        },
    );
    let batch = EdgeBatch::full(&g_train, &weights, &emb)?;
    let tcfg = TrainConfig {
        lambda: 0.1,
        max_epochs: 60_000,
        grad_tol: 1e-8,
        init: InitMode::Zero,
    };
    let state = train(&batch, 20, &tcfg)?;

    let update = unlearn_update(&state, &batch, &deleted, &ucfg)?;
    let unlearned = PredictorState {
        theta: update.theta_tilde.clone(),
        lambda: state.lambda,
    };
    let retrained = train(&batch.without(&deleted), 20, &tcfg)?;

    // Non-members are sampled from pairs absent in the full graph.
    let nonmembers = sample_nonmembers(&g, 300, 11)?;
    println!(
        "{} members (deleted train edges) vs {} non-members",
        deleted.len(),
        nonmembers.len()
    );
    for (name, model) in [
        ("original head    ", &state),
        ("unlearned head   ", &unlearned),
        ("retrained oracle ", &retrained),
    ] {
        let auc = mi_auc(model, &emb, &g, &deleted, &nonmembers)?;
        println!("  {name} MI-AUC = {auc:.4}  (0.5 would be indistinguishable)");
    }
    println!(
        "injected noise sigma = {:.3e} from sensitivity {:.3e}",
        update.sigma, update.sensitivity
    );
    Ok(())
}
