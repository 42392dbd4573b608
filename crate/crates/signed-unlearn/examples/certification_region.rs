//! Growing a certification region by triadic closure versus the fixed
//! k-hop baseline.

use std::collections::BTreeSet;

use signed_unlearn::graph::Edge;
use signed_unlearn::region::{build_khop, build_triadic};
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    let deleted: BTreeSet<Edge> = g.edge_set().into_iter().take(5).collect();
    println!(
        "deleting {} edges from a {}-edge graph",
        deleted.len(),
        g.num_edges()
    );

    let triadic = build_triadic(&g, &deleted, None)?;
    println!(
        "\ntriadic region: {} edges over {} nodes, fixed point after {} passes",
        triadic.len(),
        triadic.nodes().len(),
        triadic.iterations
    );
    // Each grown edge records the pass that admitted it and the edge it
    // closes a triangle with.
    for (edge, entry) in triadic.trace.iter().take(5) {
        println!(
            "  {edge} joined at pass {} via {}",
            entry.iteration, entry.parent
        );
    }

    for k in 1..=3 {
        let khop = build_khop(&g, &deleted, k)?;
        println!(
            "k-hop region (k={k}): {} edges ({}x the triadic size)",
            khop.len(),
            khop.len() / triadic.len().max(1)
        );
    }
    Ok(())
}
