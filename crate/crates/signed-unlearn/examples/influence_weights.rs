//! From node centralities to per-edge privacy weights over a
//! certification region.

use std::collections::BTreeSet;

use signed_unlearn::graph::Edge;
use signed_unlearn::influence::unified_influence;
use signed_unlearn::region::build_triadic;
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    let deleted: BTreeSet<Edge> = g.edge_set().into_iter().take(4).collect();
    let region = build_triadic(&g, &deleted, None)?;
    println!(
        "region: {} edges over {} nodes",
        region.len(),
        region.nodes().len()
    );

    for alpha in [0.0, 0.5, 1.0] {
        let w = unified_influence(&region, &g, alpha)?;
        let total: f64 = w.influence.values().sum();
        let summary = w.edge_weights.summary().unwrap();
        println!(
            "alpha = {alpha:3}: influence sums to {total:.9}; edge weights min {:.4} mean {:.4} max {:.4}",
            summary.min, summary.mean, summary.max
        );
    }

    // The blended scores behind the weights, for a few region nodes.
    let w = unified_influence(&region, &g, 0.5)?;
    println!("\nper-node scores (alpha = 0.5):");
    for v in region.nodes().into_iter().take(6) {
        println!(
            "  node {v:>3}: balance {:.3} status {:+.3} unified {:.3} softmax {:.4}",
            w.balance[&v], w.status[&v], w.unified[&v], w.influence[&v]
        );
    }
    Ok(())
}
