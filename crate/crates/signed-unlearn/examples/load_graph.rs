//! Loading signed edge lists: the two supported formats, sign
//! resolution on symmetrization, and the loader counters.

use std::io::Write;

use signed_unlearn::graph::{load_edge_list, EdgeListFormat};

fn main() -> signed_unlearn::Result<()> {
    // Ratings become signs; the zero rating carries none and is skipped.
    let rated = "1,2,4,1453\n2,3,-10,1460\n3,1,2\n1,3,0\n";
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(rated.as_bytes()).unwrap();
    let loaded = load_edge_list(f.path(), EdgeListFormat::RatedCsv, 7)?;
    println!(
        "rated_csv: {} nodes, {} edges (+{} / -{}), zero ratings skipped: {}",
        loaded.graph.num_nodes(),
        loaded.graph.num_edges(),
        loaded.graph.pos_edge_count(),
        loaded.graph.neg_edge_count(),
        loaded.stats.zero_ratings_skipped,
    );

    // Both orientations of a pair collapse to one undirected edge; a sign
    // conflict resolves to distrust.
    let triples = "0 1 +1\n1 0 -1\n1 2 +1\n";
    let mut f = tempfile::NamedTempFile::new().expect("temp file");
    f.write_all(triples.as_bytes()).unwrap();
    let loaded = load_edge_list(f.path(), EdgeListFormat::SignedTriple, 7)?;
    println!(
        "signed_triple: {} edges, sign(0,1) = {}, conflicts resolved: {}",
        loaded.graph.num_edges(),
        loaded.graph.sign_of(0, 1),
        loaded.stats.sign_conflicts,
    );

    for v in loaded.graph.nodes() {
        println!(
            "  node {v}: degree {} neighbors {:?}",
            loaded.graph.degree(v),
            loaded.graph.neighbors(v)
        );
    }
    Ok(())
}
