//! Certification-region construction.
//!
//! The region is the edge set whose influence on the trained parameters
//! the unlearning update must account for. The triadic builder grows it
//! from the deletion set by repeatedly adding edges that close a triangle
//! with an already-certified edge, until a fixed point; a k-hop builder
//! is kept as the conventional baseline.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId, SignedGraph};

/// How a certification region is grown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RegionMode {
    /// Triadic-closure expansion to a fixed point (or an iteration cap).
    Triadic { max_iter: Option<usize> },
    /// All edges with both endpoints within `k` hops of the deletion set.
    KHop { k: usize },
}

impl Default for RegionMode {
    fn default() -> Self {
        RegionMode::Triadic { max_iter: None }
    }
}

/// Provenance of one region edge: the pass that admitted it and the
/// already-certified edge it closes a triangle with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub parent: Edge,
}

/// A grown certification region.
///
/// `iterations` is the first pass after which the region stopped growing
/// (a pass that adds nothing still counts once, as the confirming pass).
/// For triadic regions the trace records, for every edge outside the
/// deletion set, which prior edge admitted it; k-hop regions carry no
/// trace.
#[derive(Debug, Clone, PartialEq)]
pub struct CertRegion {
    pub deletion_set: BTreeSet<Edge>,
    pub region: BTreeSet<Edge>,
    pub iterations: usize,
    /// Set when an iteration cap stopped growth before the fixed point.
    pub truncated: bool,
    pub trace: std::collections::BTreeMap<Edge, TraceEntry>,
}

impl CertRegion {
    /// Nodes incident to at least one region edge, sorted.
    pub fn nodes(&self) -> Vec<NodeId> {
        let mut out = BTreeSet::new();
        for e in &self.region {
            let (u, v) = e.endpoints();
            out.insert(u);
            out.insert(v);
        }
        out.into_iter().collect()
    }

    pub fn len(&self) -> usize {
        self.region.len()
    }

    pub fn is_empty(&self) -> bool {
        self.region.is_empty()
    }
}

/// True iff `e1` and `e2` share exactly one endpoint and the two
/// non-shared endpoints are themselves connected in `g`.
pub fn triadic_closure(g: &SignedGraph, e1: Edge, e2: Edge) -> Result<bool> {
    for e in [e1, e2] {
        if !g.has_edge(e) {
            let (u, v) = e.endpoints();
            return Err(Error::UnknownEdge(u, v));
        }
    }
    let Some(shared) = e1.shared_endpoint(e2) else {
        return Ok(false);
    };
    let a = e1.other(shared);
    let b = e2.other(shared);
    Ok(g.sign_of(a, b) != 0)
}

/// Grows the certification region from `deletion_set` by triadic-closure
/// expansion until a fixed point (or `max_iter` passes).
///
/// Every edge of the deletion set must be present in `g`. Only the edges
/// added in the previous pass need to be scanned: an edge closing a
/// triangle with an older region edge was already admitted when that edge
/// was itself new.
pub fn build_triadic(
    g: &SignedGraph,
    deletion_set: &BTreeSet<Edge>,
    max_iter: Option<usize>,
) -> Result<CertRegion> {
    for e in deletion_set {
        if !g.has_edge(*e) {
            let (u, v) = e.endpoints();
            return Err(Error::UnknownEdge(u, v));
        }
    }
    if let Some(cap) = max_iter {
        if cap == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
    }

    let mut region: BTreeSet<Edge> = deletion_set.clone();
    let mut trace = std::collections::BTreeMap::new();
    let mut frontier: Vec<Edge> = deletion_set.iter().copied().collect();
    let mut iterations = 0;
    let mut truncated = false;

    loop {
        iterations += 1;
        let mut added: Vec<Edge> = Vec::new();
        for &parent in &frontier {
            let (u, v) = parent.endpoints();
            // Triangles through `parent` are found at the common neighbors
            // of its endpoints; the two side edges each close with it.
            for &(w, _) in g.neighbors(u) {
                if w != v && g.sign_of(w, v) != 0 {
                    for cand in [Edge::new(u, w), Edge::new(v, w)] {
                        if !region.contains(&cand) {
                            region.insert(cand);
                            trace.insert(
                                cand,
                                TraceEntry {
                                    iteration: iterations,
                                    parent,
                                },
                            );
                            added.push(cand);
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        if let Some(cap) = max_iter {
            if iterations >= cap {
                truncated = true;
                break;
            }
        }
        added.sort_unstable();
        frontier = added;
    }

    Ok(CertRegion {
        deletion_set: deletion_set.clone(),
        region,
        iterations,
        truncated,
        trace,
    })
}

/// All edges of `g` whose endpoints both lie within `k` hops of some
/// deletion-set endpoint.
pub fn build_khop(g: &SignedGraph, deletion_set: &BTreeSet<Edge>, k: usize) -> Result<CertRegion> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    for e in deletion_set {
        if !g.has_edge(*e) {
            let (u, v) = e.endpoints();
            return Err(Error::UnknownEdge(u, v));
        }
    }

    // Multi-source BFS from all deletion-set endpoints.
    let mut dist = vec![usize::MAX; g.id_space() as usize];
    let mut queue = std::collections::VecDeque::new();
    for e in deletion_set {
        let (u, v) = e.endpoints();
        for x in [u, v] {
            if dist[x as usize] == usize::MAX {
                dist[x as usize] = 0;
                queue.push_back(x);
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[x as usize];
        if d == k {
            continue;
        }
        for &(y, _) in g.neighbors(x) {
            if dist[y as usize] == usize::MAX {
                dist[y as usize] = d + 1;
                queue.push_back(y);
            }
        }
    }

    let region: BTreeSet<Edge> = g
        .edges()
        .map(|(e, _)| e)
        .filter(|e| {
            let (u, v) = e.endpoints();
            dist[u as usize] <= k && dist[v as usize] <= k
        })
        .collect();

    Ok(CertRegion {
        deletion_set: deletion_set.clone(),
        region,
        iterations: k,
        truncated: false,
        trace: std::collections::BTreeMap::new(),
    })
}

/// Dispatches on the region mode.
pub fn build_region(
    g: &SignedGraph,
    deletion_set: &BTreeSet<Edge>,
    mode: RegionMode,
) -> Result<CertRegion> {
    match mode {
        RegionMode::Triadic { max_iter } => build_triadic(g, deletion_set, max_iter),
        RegionMode::KHop { k } => build_khop(g, deletion_set, k),
    }
}
