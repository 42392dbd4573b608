//! Signed-graph data model: loading, sign resolution, neighbor and
//! triangle enumeration, and deletion-scenario application.
//!
//! Graphs are undirected and immutable after construction. Each stored
//! edge carries a sign (trust / distrust); node ids are dense after
//! loading, and edges are kept in canonical (min id first) form so that
//! every traversal in the crate is order-deterministic.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Node identifier; dense `0..n-1` after loading.
pub type NodeId = u32;

/// Default width of synthesized node features.
pub const DEFAULT_FEATURE_DIM: usize = 20;

/// Edge sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// +1.0 or -1.0.
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }

    /// Binary label: positive edges map to 1, negative to 0.
    pub fn label(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => 0.0,
        }
    }
}

/// Unordered node pair in canonical form (`a < b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
}

impl Edge {
    /// Canonicalizes the pair. Panics on self-loops, which are rejected
    /// at every construction site before this is reached.
    pub fn new(u: NodeId, v: NodeId) -> Self {
        assert_ne!(u, v, "self-loop ({u}, {u})");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn endpoints(self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    pub fn contains(self, v: NodeId) -> bool {
        self.a == v || self.b == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(self, v: NodeId) -> NodeId {
        if self.a == v {
            self.b
        } else {
            assert_eq!(self.b, v, "node {v} not on edge {self}");
            self.a
        }
    }

    /// The single shared endpoint of two edges, if exactly one exists.
    pub fn shared_endpoint(self, other: Edge) -> Option<NodeId> {
        let mut shared = None;
        let mut count = 0;
        for x in [self.a, self.b] {
            if other.contains(x) {
                shared = Some(x);
                count += 1;
            }
        }
        if count == 1 {
            shared
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// A triangle as a sorted node triple plus the signs of its three edges.
///
/// `signs[0]` is the sign of (nodes[0], nodes[1]), `signs[1]` of
/// (nodes[1], nodes[2]), and `signs[2]` of (nodes[0], nodes[2]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangle {
    pub nodes: [NodeId; 3],
    pub signs: [Sign; 3],
}

impl Triangle {
    /// Product of the three edge signs: +1.0 or -1.0.
    pub fn sign_product(&self) -> f64 {
        self.signs.iter().map(|s| s.value()).product()
    }
}

/// Which kind of data a deletion request removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Edge,
    Node,
    Feature,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scenario::Edge => "edge",
            Scenario::Node => "node",
            Scenario::Feature => "feature",
        };
        f.write_str(s)
    }
}

/// A validated deletion request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeletionRequest {
    /// Remove the listed edges, keeping all nodes.
    Edges(BTreeSet<Edge>),
    /// Remove the listed nodes and every incident edge.
    Nodes(BTreeSet<NodeId>),
    /// Zero the listed feature dimensions of each node; structure is kept.
    Features(BTreeMap<NodeId, BTreeSet<usize>>),
}

impl DeletionRequest {
    pub fn scenario(&self) -> Scenario {
        match self {
            DeletionRequest::Edges(_) => Scenario::Edge,
            DeletionRequest::Nodes(_) => Scenario::Node,
            DeletionRequest::Features(_) => Scenario::Feature,
        }
    }

    /// Checks non-emptiness and that every referenced id exists in `g`.
    pub fn validate(&self, g: &SignedGraph) -> Result<()> {
        match self {
            DeletionRequest::Edges(edges) => {
                if edges.is_empty() {
                    return Err(Error::InvalidRequest("empty edge list".into()));
                }
                for e in edges {
                    let (u, v) = e.endpoints();
                    if g.sign_of(u, v) == 0 {
                        return Err(Error::UnknownEdge(u, v));
                    }
                }
            }
            DeletionRequest::Nodes(nodes) => {
                if nodes.is_empty() {
                    return Err(Error::InvalidRequest("empty node list".into()));
                }
                for &v in nodes {
                    if !g.has_node(v) {
                        return Err(Error::UnknownNode(v));
                    }
                }
            }
            DeletionRequest::Features(map) => {
                if map.is_empty() {
                    return Err(Error::InvalidRequest("empty feature list".into()));
                }
                for (&v, dims) in map {
                    if !g.has_node(v) {
                        return Err(Error::UnknownNode(v));
                    }
                    if dims.is_empty() {
                        return Err(Error::InvalidRequest(format!(
                            "no feature dimensions listed for node {v}"
                        )));
                    }
                    for &d in dims {
                        if d >= g.feature_dim() {
                            return Err(Error::InvalidRequest(format!(
                                "feature dimension {d} out of range for node {v}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Immutable signed graph.
///
/// `id_space` is the size of the node-id range; after deletions the
/// present-node set may be a strict subset of `0..id_space`, but ids are
/// never remapped so features and embeddings stay aligned across the
/// original / remaining pair of graphs.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedGraph {
    id_space: u32,
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<Edge, Sign>,
    adj: Vec<Vec<(NodeId, Sign)>>,
    features: Vec<f64>,
    feature_dim: usize,
}

impl SignedGraph {
    /// Builds a graph over ids `0..id_space` with all nodes present and
    /// zero features of width [`DEFAULT_FEATURE_DIM`].
    ///
    /// Duplicate pairs must carry a consistent sign; self-loops and
    /// out-of-range ids are rejected.
    pub fn from_signed_edges(
        id_space: u32,
        edges: impl IntoIterator<Item = (NodeId, NodeId, Sign)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (u, v, s) in edges {
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop ({u}, {v})")));
            }
            if u >= id_space || v >= id_space {
                return Err(Error::UnknownNode(u.max(v)));
            }
            let e = Edge::new(u, v);
            if let Some(prev) = map.insert(e, s) {
                if prev != s {
                    return Err(Error::InvalidParameter(format!(
                        "conflicting signs for edge {e}"
                    )));
                }
            }
        }
        let nodes = (0..id_space).collect();
        Ok(Self::assemble(
            id_space,
            nodes,
            map,
            vec![0.0; id_space as usize * DEFAULT_FEATURE_DIM],
            DEFAULT_FEATURE_DIM,
        ))
    }

    /// Replaces features with seeded standard-normal values, `dim` per node.
    pub fn with_standard_features(mut self, seed: u64, dim: usize) -> Self {
        let mut rng = rng::stream(seed, "features");
        self.features = rng::normal_vec(&mut rng, self.id_space as usize * dim);
        self.feature_dim = dim;
        self
    }

    /// Replaces features with an explicit `id_space x dim` matrix.
    pub fn with_features(mut self, features: Vec<f64>, dim: usize) -> Self {
        assert_eq!(features.len(), self.id_space as usize * dim);
        self.features = features;
        self.feature_dim = dim;
        self
    }

    /// Scales every feature entry in place.
    pub fn scale_features(mut self, factor: f64) -> Self {
        for x in &mut self.features {
            *x *= factor;
        }
        self
    }

    fn assemble(
        id_space: u32,
        nodes: BTreeSet<NodeId>,
        edges: BTreeMap<Edge, Sign>,
        features: Vec<f64>,
        feature_dim: usize,
    ) -> Self {
        let mut adj = vec![Vec::new(); id_space as usize];
        for (&e, &s) in &edges {
            let (u, v) = e.endpoints();
            adj[u as usize].push((v, s));
            adj[v as usize].push((u, s));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        SignedGraph {
            id_space,
            nodes,
            edges,
            adj,
            features,
            feature_dim,
        }
    }

    /// Number of present nodes.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Size of the node-id range (present or not).
    pub fn id_space(&self) -> u32 {
        self.id_space
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_node(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = (Edge, Sign)> + '_ {
        self.edges.iter().map(|(&e, &s)| (e, s))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.keys().copied().collect()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn sign_of_edge(&self, e: Edge) -> Option<Sign> {
        self.edges.get(&e).copied()
    }

    /// +1, -1, or 0 when the pair is absent (or is a self-loop).
    pub fn sign_of(&self, u: NodeId, v: NodeId) -> i8 {
        if u == v {
            return 0;
        }
        match self.edges.get(&Edge::new(u, v)) {
            Some(Sign::Positive) => 1,
            Some(Sign::Negative) => -1,
            None => 0,
        }
    }

    /// Neighbors of `v` with edge signs, sorted by neighbor id.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, Sign)] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.nodes
            .iter()
            .map(|&v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Mean degree over present nodes, counting degree-0 nodes.
    pub fn avg_degree(&self) -> f64 {
        if self.nodes.is_empty() {
            return 0.0;
        }
        let total: usize = self.nodes.iter().map(|&v| self.degree(v)).sum();
        total as f64 / self.nodes.len() as f64
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn features_of(&self, v: NodeId) -> &[f64] {
        let d = self.feature_dim;
        &self.features[v as usize * d..(v as usize + 1) * d]
    }

    pub fn pos_edge_count(&self) -> usize {
        self.edges
            .values()
            .filter(|s| **s == Sign::Positive)
            .count()
    }

    pub fn neg_edge_count(&self) -> usize {
        self.edges.len() - self.pos_edge_count()
    }

    /// The same graph restricted to `keep`; node set and features unchanged.
    pub fn restricted_to_edges(&self, keep: &BTreeSet<Edge>) -> SignedGraph {
        let edges: BTreeMap<Edge, Sign> = self
            .edges
            .iter()
            .filter(|(e, _)| keep.contains(e))
            .map(|(&e, &s)| (e, s))
            .collect();
        Self::assemble(
            self.id_space,
            self.nodes.clone(),
            edges,
            self.features.clone(),
            self.feature_dim,
        )
    }

    /// Enumerates triangles containing `v`, or all triangles when `v` is
    /// `None`. Triples are canonical (sorted ids) and returned in sorted
    /// order with no duplicates.
    pub fn triangles(&self, v: Option<NodeId>) -> Result<Vec<Triangle>> {
        match v {
            Some(v) => {
                if !self.has_node(v) {
                    return Err(Error::UnknownNode(v));
                }
                let mut out = BTreeSet::new();
                let nbrs = self.neighbors(v);
                for (i, &(a, _)) in nbrs.iter().enumerate() {
                    for &(b, _) in &nbrs[i + 1..] {
                        if self.sign_of(a, b) != 0 {
                            out.insert(self.make_triangle(v, a, b));
                        }
                    }
                }
                Ok(out.into_iter().collect())
            }
            None => {
                let mut out = Vec::new();
                // Each triangle u < v < w is found once from its least vertex.
                for &u in &self.nodes {
                    let nbrs: Vec<NodeId> = self
                        .neighbors(u)
                        .iter()
                        .map(|&(w, _)| w)
                        .filter(|&w| w > u)
                        .collect();
                    for (i, &a) in nbrs.iter().enumerate() {
                        for &b in &nbrs[i + 1..] {
                            if self.sign_of(a, b) != 0 {
                                out.push(self.make_triangle(u, a, b));
                            }
                        }
                    }
                }
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    fn make_triangle(&self, x: NodeId, y: NodeId, z: NodeId) -> Triangle {
        let mut nodes = [x, y, z];
        nodes.sort_unstable();
        let sign =
            |u: NodeId, v: NodeId| self.sign_of_edge(Edge::new(u, v)).expect("triangle edge");
        Triangle {
            nodes,
            signs: [
                sign(nodes[0], nodes[1]),
                sign(nodes[1], nodes[2]),
                sign(nodes[0], nodes[2]),
            ],
        }
    }

    /// Applies a deletion request, returning the remaining graph and the
    /// edge set that drives the unlearning update.
    ///
    /// Edge requests remove exactly the listed edges and keep all nodes.
    /// Node requests remove the listed nodes with their incident edges and
    /// then drop any node left with degree zero. Feature requests keep the
    /// structure, zero the listed feature dimensions, and report every
    /// edge incident to an affected node as the deletion set.
    pub fn apply_deletion(&self, req: &DeletionRequest) -> Result<(SignedGraph, BTreeSet<Edge>)> {
        req.validate(self)?;
        match req {
            DeletionRequest::Edges(deleted) => {
                let edges: BTreeMap<Edge, Sign> = self
                    .edges
                    .iter()
                    .filter(|(e, _)| !deleted.contains(e))
                    .map(|(&e, &s)| (e, s))
                    .collect();
                let remaining = Self::assemble(
                    self.id_space,
                    self.nodes.clone(),
                    edges,
                    self.features.clone(),
                    self.feature_dim,
                );
                Ok((remaining, deleted.clone()))
            }
            DeletionRequest::Nodes(removed) => {
                let mut deleted = BTreeSet::new();
                let edges: BTreeMap<Edge, Sign> = self
                    .edges
                    .iter()
                    .filter(|(&e, _)| {
                        let (u, v) = e.endpoints();
                        if removed.contains(&u) || removed.contains(&v) {
                            deleted.insert(e);
                            false
                        } else {
                            true
                        }
                    })
                    .map(|(&e, &s)| (e, s))
                    .collect();
                let mut degree = vec![0usize; self.id_space as usize];
                for e in edges.keys() {
                    let (u, v) = e.endpoints();
                    degree[u as usize] += 1;
                    degree[v as usize] += 1;
                }
                let nodes: BTreeSet<NodeId> = self
                    .nodes
                    .iter()
                    .copied()
                    .filter(|v| !removed.contains(v) && degree[*v as usize] > 0)
                    .collect();
                let remaining = Self::assemble(
                    self.id_space,
                    nodes,
                    edges,
                    self.features.clone(),
                    self.feature_dim,
                );
                Ok((remaining, deleted))
            }
            DeletionRequest::Features(map) => {
                let mut features = self.features.clone();
                for (&v, dims) in map {
                    for &d in dims {
                        features[v as usize * self.feature_dim + d] = 0.0;
                    }
                }
                let mut deleted = BTreeSet::new();
                for &v in map.keys() {
                    for &(u, _) in self.neighbors(v) {
                        deleted.insert(Edge::new(v, u));
                    }
                }
                let remaining = Self::assemble(
                    self.id_space,
                    self.nodes.clone(),
                    self.edges.clone(),
                    features,
                    self.feature_dim,
                );
                Ok((remaining, deleted))
            }
        }
    }
}

/// Input edge-list format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeListFormat {
    /// `source,target,rating[,time]`; the rating's sign gives the edge sign.
    RatedCsv,
    /// `u v s` with `s` in {+1, -1}.
    SignedTriple,
}

/// Counters for lines the loader had to resolve or drop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LoadStats {
    /// Lines with a zero rating, which carry no sign.
    pub zero_ratings_skipped: usize,
    /// Self-loop lines.
    pub self_loops_skipped: usize,
    /// Pairs seen with both signs and resolved to negative.
    pub sign_conflicts: usize,
    /// Repeated observations of a pair beyond the first.
    pub duplicate_pairs: usize,
}

/// A loaded graph plus loader counters.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: SignedGraph,
    pub stats: LoadStats,
}

/// Loads an edge list, remapping node ids to dense `0..n-1` in order of
/// first appearance and synthesizing seeded standard-normal features.
///
/// The input is symmetrized: both orientations of a pair collapse to one
/// undirected edge, and a pair observed with conflicting signs resolves
/// to negative (distrust is the conservative label for trust networks).
/// Zero ratings and self-loops are skipped and counted; anything
/// unparseable is an error with its line number. Blank lines and lines
/// starting with `#` or `%` are ignored.
pub fn load_edge_list(
    path: impl AsRef<Path>,
    format: EdgeListFormat,
    seed: u64,
) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);

    let mut ids: HashMap<i64, NodeId> = HashMap::new();
    let mut next_id: NodeId = 0;
    let mut intern = |raw: i64, ids: &mut HashMap<i64, NodeId>| -> NodeId {
        *ids.entry(raw).or_insert_with(|| {
            let id = next_id;
            next_id += 1;
            id
        })
    };

    let mut edges: BTreeMap<Edge, Sign> = BTreeMap::new();
    let mut stats = LoadStats::default();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let parse_err = |msg: &str| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            msg: msg.to_string(),
        };
        let (raw_u, raw_v, sign) = match format {
            EdgeListFormat::RatedCsv => {
                let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
                if fields.len() != 3 && fields.len() != 4 {
                    return Err(parse_err("expected source,target,rating[,time]"));
                }
                let u: i64 = fields[0].parse().map_err(|_| parse_err("bad source id"))?;
                let v: i64 = fields[1].parse().map_err(|_| parse_err("bad target id"))?;
                let rating: f64 = fields[2].parse().map_err(|_| parse_err("bad rating"))?;
                if rating == 0.0 {
                    stats.zero_ratings_skipped += 1;
                    continue;
                }
                let sign = if rating > 0.0 {
                    Sign::Positive
                } else {
                    Sign::Negative
                };
                (u, v, sign)
            }
            EdgeListFormat::SignedTriple => {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(parse_err("expected `u v s`"));
                }
                let u: i64 = fields[0].parse().map_err(|_| parse_err("bad node id"))?;
                let v: i64 = fields[1].parse().map_err(|_| parse_err("bad node id"))?;
                let s: i64 = fields[2].parse().map_err(|_| parse_err("bad sign"))?;
                let sign = match s {
                    1 => Sign::Positive,
                    -1 => Sign::Negative,
                    _ => return Err(parse_err("sign must be +1 or -1")),
                };
                (u, v, sign)
            }
        };
        if raw_u == raw_v {
            stats.self_loops_skipped += 1;
            continue;
        }
        let u = intern(raw_u, &mut ids);
        let v = intern(raw_v, &mut ids);
        let e = Edge::new(u, v);
        match edges.get(&e) {
            None => {
                edges.insert(e, sign);
            }
            Some(&prev) => {
                stats.duplicate_pairs += 1;
                if prev != sign {
                    stats.sign_conflicts += 1;
                    edges.insert(e, Sign::Negative);
                }
            }
        }
    }

    if next_id == 0 || edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let graph = SignedGraph::assemble(
        next_id,
        (0..next_id).collect(),
        edges,
        Vec::new(),
        DEFAULT_FEATURE_DIM,
    )
    .with_standard_features(seed, DEFAULT_FEATURE_DIM);
    Ok(LoadedGraph { graph, stats })
}

/// Convenience constructor for tests and examples: edges given as
/// `(u, v, sign)` with sign `+1` / `-1`.
pub fn graph_from_triples(id_space: u32, triples: &[(u32, u32, i8)]) -> SignedGraph {
    let edges = triples.iter().map(|&(u, v, s)| {
        let sign = if s >= 0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        (u, v, sign)
    });
    SignedGraph::from_signed_edges(id_space, edges).expect("valid triples")
}
