//! Training the logistic head over frozen signed embeddings and scoring
//! sign prediction on a held-out split.

use signed_unlearn::eval::macro_f1;
use signed_unlearn::model::{encode, train, EdgeBatch, EncodeConfig, InitMode, TrainConfig};
use signed_unlearn::pipeline::split_edges;
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};
use signed_unlearn::weights::EdgeWeights;

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    let (train_edges, test_edges) = split_edges(&g, 0.2, 7);
    let g_train = g.restricted_to_edges(&train_edges);
    println!(
        "split: {} train edges, {} test edges",
        train_edges.len(),
        test_edges.len()
    );

    let emb = encode(
        &g_train,
        &EncodeConfig {
            dim: 20,
            clip: 1.0,
            seed: 7,
        },
    );
    let batch = EdgeBatch::full(&g_train, &EdgeWeights::uniform(), &emb)?;
    let cfg = TrainConfig {
        lambda: 0.1,
        max_epochs: 60_000,
        grad_tol: 1e-8,
        init: InitMode::Zero,
    };
    let state = train(&batch, 20, &cfg)?;
    println!(
        "trained head |theta| = {:.4}",
        signed_unlearn::model::l2_norm(&state.theta)
    );

    let mut predictions = Vec::new();
    let mut labels = Vec::new();
    for e in &test_edges {
        let f = state.predict(&emb.edge_repr(*e))?;
        predictions.push(u8::from(f >= 0.5));
        labels.push(u8::from(g.sign_of_edge(*e).unwrap().label() > 0.5));
    }
    println!("test macro-F1 = {:.4}", macro_f1(&predictions, &labels)?);

    // Round-trip the model file format.
    let dir = tempfile::tempdir().expect("temp dir");
    let path = dir.path().join("head.model");
    state.save(&path)?;
    let back = signed_unlearn::PredictorState::load(&path)?;
    println!(
        "saved and reloaded: parameters identical = {}",
        back == state
    );
    Ok(())
}
