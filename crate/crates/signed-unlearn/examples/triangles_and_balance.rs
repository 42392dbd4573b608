//! Triangle enumeration and the two sociological centralities on the
//! bundled synthetic graph.

use signed_unlearn::influence::{balance_centrality, balance_indicator, status_centrality};
use signed_unlearn::synthetic::{synthetic_graph, SyntheticConfig};

fn main() -> signed_unlearn::Result<()> {
    let g = synthetic_graph(&SyntheticConfig::default());
    println!(
        "graph: {} nodes, {} edges ({} positive, {} negative), mean degree {:.2}",
        g.num_nodes(),
        g.num_edges(),
        g.pos_edge_count(),
        g.neg_edge_count(),
        g.avg_degree()
    );

    let triangles = g.triangles(None)?;
    let balanced = triangles
        .iter()
        .filter(|t| balance_indicator(t) == 1)
        .count();
    println!(
        "{} triangles, {} balanced ({:.1}%)",
        triangles.len(),
        balanced,
        100.0 * balanced as f64 / triangles.len() as f64
    );

    // The most balance-central and status-central nodes.
    let mut scored: Vec<(u32, f64, f64)> = g
        .nodes()
        .map(|v| {
            (
                v,
                balance_centrality(&g, v).unwrap(),
                status_centrality(&g, v).unwrap(),
            )
        })
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    println!("\ntop nodes by balance centrality:");
    for (v, bal, sta) in scored.iter().take(5) {
        println!("  node {v:>3}: balance {bal:.3} status {sta:+.3}");
    }
    scored.sort_by(|a, b| b.2.abs().partial_cmp(&a.2.abs()).unwrap());
    println!("top nodes by |status centrality|:");
    for (v, bal, sta) in scored.iter().take(5) {
        println!("  node {v:>3}: status {sta:+.3} balance {bal:.3}");
    }
    Ok(())
}
