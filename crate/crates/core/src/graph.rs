//! Core data model: edge-weighted, bicolored trees together with their
//! structural checks and a brute-force isomorphism oracle.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Vertex color. In a valid graph every edge joins a white vertex to a black one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

/// Edge weight. Only the values 1 and 2 occur; anything else is rejected at
/// construction time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeWeight {
    One,
    Two,
}

impl EdgeWeight {
    pub fn value(self) -> u8 {
        match self {
            EdgeWeight::One => 1,
            EdgeWeight::Two => 2,
        }
    }
}

impl TryFrom<u8> for EdgeWeight {
    type Error = GraphError;

    fn try_from(value: u8) -> Result<Self, GraphError> {
        match value {
            1 => Ok(EdgeWeight::One),
            2 => Ok(EdgeWeight::Two),
            other => Err(GraphError::InvalidWeight { value: other }),
        }
    }
}

/// Vertex label, dense in `[0, vertex_count)` within its graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Vertex counts reported by [`census`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Census {
    pub white: usize,
    pub black: usize,
    pub leaves: usize,
}

/// One broken structural invariant, as reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotATree {
        vertices: usize,
        edges: usize,
        connected: bool,
    },
    BipartiteViolation {
        u: VertexId,
        v: VertexId,
    },
    NonWhiteLeaf {
        leaf: VertexId,
    },
    BlackDegreeViolation {
        vertex: VertexId,
        degree: usize,
    },
    WeightPatternViolation {
        vertex: VertexId,
    },
    NoWeightOneLeaf,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotATree {
                vertices,
                edges,
                connected,
            } => write!(
                f,
                "not a tree: {vertices} vertices, {edges} edges, connected = {connected}"
            ),
            Violation::BipartiteViolation { u, v } => {
                write!(f, "edge {u}-{v} joins two vertices of the same color")
            }
            Violation::NonWhiteLeaf { leaf } => write!(f, "leaf {leaf} is not white"),
            Violation::BlackDegreeViolation { vertex, degree } => {
                write!(
                    f,
                    "black vertex {vertex} has degree {degree}, expected 2 or 3"
                )
            }
            Violation::WeightPatternViolation { vertex } => write!(
                f,
                "black vertex {vertex} has the wrong incident weights for its degree"
            ),
            Violation::NoWeightOneLeaf => {
                write!(f, "no leaf sits on an edge of weight 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {id} out of range for a graph with {count} vertices")]
    VertexOutOfRange { id: usize, count: usize },
    #[error("edge weight must be 1 or 2, got {value}")]
    InvalidWeight { value: u8 },
    #[error("duplicate edge {u}-{v}")]
    DuplicateEdge { u: usize, v: usize },
    #[error("self loop at vertex {v}")]
    SelfLoop { v: usize },
    #[error("relabeling is not a bijection on the vertex set")]
    NotAPermutation,
    #[error("graph with {vertices} vertices exceeds the brute-force bound of {bound}")]
    OracleBoundExceeded { vertices: usize, bound: usize },
}

/// An edge-weighted, bicolored finite tree, optionally rooted.
///
/// A *valid* graph satisfies the invariants checked by [`validate`]: it is a
/// tree; every edge joins a white and a black vertex; every leaf is white;
/// every black vertex has degree 2 with incident weights {1, 2} or degree 3
/// with all incident weights 1; and at least one leaf sits on a weight-1
/// edge. Construction only enforces local well-formedness (ids in range,
/// weights in {1, 2}, no self loops or parallel edges), so invalid shapes can
/// be built and inspected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrivalentGraph {
    colors: Vec<Color>,
    adj: Vec<Vec<(VertexId, EdgeWeight)>>,
    root: Option<VertexId>,
}

impl TrivalentGraph {
    /// Builds an unrooted graph from explicit colors and weighted edges.
    /// Adjacency lists keep the insertion order of `edges`.
    pub fn from_parts(
        colors: Vec<Color>,
        edges: &[(usize, usize, u8)],
    ) -> Result<Self, GraphError> {
        let n = colors.len();
        let mut adj: Vec<Vec<(VertexId, EdgeWeight)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { id: u, count: n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { id: v, count: n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { v });
            }
            let weight = EdgeWeight::try_from(w)?;
            if adj[u].iter().any(|&(x, _)| x.index() == v) {
                return Err(GraphError::DuplicateEdge { u, v });
            }
            adj[u].push((VertexId(v), weight));
            adj[v].push((VertexId(u), weight));
        }
        Ok(TrivalentGraph {
            colors,
            adj,
            root: None,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.colors.len()
    }

    /// Color of `v`. Panics if `v` is not in the graph.
    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v.index()]
    }

    /// Neighbors of `v` with edge weights, in insertion order.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeWeight)] {
        &self.adj[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v.index()].len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree(v) == 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.colors.len()).map(VertexId)
    }

    /// White vertices in ascending id order.
    pub fn white_vertices(&self) -> Vec<VertexId> {
        self.vertices()
            .filter(|&v| self.color(v) == Color::White)
            .collect()
    }

    /// Leaves in ascending id order.
    pub fn leaves(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.is_leaf(v)).collect()
    }

    /// Every edge once, as `(u, v, weight)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(VertexId, VertexId, EdgeWeight)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in self.vertices() {
            for &(u, w) in self.neighbors(v) {
                if v < u {
                    out.push((v, u, w));
                }
            }
        }
        out
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    /// A copy of the graph rooted at `v`.
    pub fn rooted_at(&self, v: VertexId) -> Result<TrivalentGraph, GraphError> {
        if !self.contains(v) {
            return Err(GraphError::VertexOutOfRange {
                id: v.index(),
                count: self.vertex_count(),
            });
        }
        let mut g = self.clone();
        g.root = Some(v);
        Ok(g)
    }

    pub(crate) fn push_vertex(&mut self, color: Color) -> VertexId {
        self.colors.push(color);
        self.adj.push(Vec::new());
        VertexId(self.colors.len() - 1)
    }

    pub(crate) fn push_edge(&mut self, u: VertexId, v: VertexId, w: EdgeWeight) {
        self.adj[u.index()].push((v, w));
        self.adj[v.index()].push((u, w));
    }

    pub(crate) fn clear_root(&mut self) {
        self.root = None;
    }

    pub(crate) fn set_root(&mut self, v: VertexId) {
        self.root = Some(v);
    }
}

/// Seed tree: one black vertex with two white leaves on edges of weight 1 and 2.
pub fn b12() -> TrivalentGraph {
    TrivalentGraph::from_parts(
        vec![Color::Black, Color::White, Color::White],
        &[(0, 1, 1), (0, 2, 2)],
    )
    .expect("seed graph is well formed")
}

/// Seed tree: one black vertex with three white leaves, all edges of weight 1.
pub fn b111() -> TrivalentGraph {
    TrivalentGraph::from_parts(
        vec![Color::Black, Color::White, Color::White, Color::White],
        &[(0, 1, 1), (0, 2, 1), (0, 3, 1)],
    )
    .expect("seed graph is well formed")
}

fn reachable_from(g: &TrivalentGraph, start: VertexId) -> usize {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    seen[start.index()] = true;
    queue.push_back(start);
    let mut count = 0;
    while let Some(v) = queue.pop_front() {
        count += 1;
        for &(u, _) in g.neighbors(v) {
            if !seen[u.index()] {
                seen[u.index()] = true;
                queue.push_back(u);
            }
        }
    }
    count
}

/// Checks every structural invariant and reports all broken ones, in a fixed
/// order: tree shape, bipartiteness, leaf colors, black degrees and weight
/// patterns, and the presence of a weight-1 leaf.
pub fn validate(g: &TrivalentGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = g.vertex_count();
    let edges = g.edge_count();
    let connected = n > 0 && reachable_from(g, VertexId(0)) == n;
    if n == 0 || edges != n - 1 || !connected {
        out.push(Violation::NotATree {
            vertices: n,
            edges,
            connected,
        });
    }
    for (u, v, _) in g.edges() {
        if g.color(u) == g.color(v) {
            out.push(Violation::BipartiteViolation { u, v });
        }
    }
    for v in g.vertices() {
        if g.is_leaf(v) && g.color(v) == Color::Black {
            out.push(Violation::NonWhiteLeaf { leaf: v });
        }
    }
    for v in g.vertices() {
        if g.color(v) != Color::Black {
            continue;
        }
        let degree = g.degree(v);
        if degree != 2 && degree != 3 {
            out.push(Violation::BlackDegreeViolation { vertex: v, degree });
            continue;
        }
        let mut weights: Vec<u8> = g.neighbors(v).iter().map(|&(_, w)| w.value()).collect();
        weights.sort_unstable();
        let pattern_ok = match degree {
            2 => weights == [1, 2],
            _ => weights == [1, 1, 1],
        };
        if !pattern_ok {
            out.push(Violation::WeightPatternViolation { vertex: v });
        }
    }
    let has_weight_one_leaf = g
        .vertices()
        .any(|v| g.is_leaf(v) && g.neighbors(v)[0].1 == EdgeWeight::One);
    if !has_weight_one_leaf {
        out.push(Violation::NoWeightOneLeaf);
    }
    out
}

/// Counts white vertices, black vertices, and leaves.
pub fn census(g: &TrivalentGraph) -> Census {
    let mut white = 0;
    let mut black = 0;
    let mut leaves = 0;
    for v in g.vertices() {
        match g.color(v) {
            Color::White => white += 1,
            Color::Black => black += 1,
        }
        if g.is_leaf(v) {
            leaves += 1;
        }
    }
    Census {
        white,
        black,
        leaves,
    }
}

/// Applies the vertex permutation `perm` (old id -> new id) to `g`, carrying
/// colors, weights, and the root along.
pub fn relabel(g: &TrivalentGraph, perm: &[VertexId]) -> Result<TrivalentGraph, GraphError> {
    let n = g.vertex_count();
    if perm.len() != n {
        return Err(GraphError::NotAPermutation);
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p.index() >= n || seen[p.index()] {
            return Err(GraphError::NotAPermutation);
        }
        seen[p.index()] = true;
    }
    let mut colors = vec![Color::White; n];
    let mut adj: Vec<Vec<(VertexId, EdgeWeight)>> = vec![Vec::new(); n];
    for v in g.vertices() {
        let nv = perm[v.index()];
        colors[nv.index()] = g.color(v);
        adj[nv.index()] = g
            .neighbors(v)
            .iter()
            .map(|&(u, w)| (perm[u.index()], w))
            .collect();
    }
    Ok(TrivalentGraph {
        colors,
        adj,
        root: g.root().map(|r| perm[r.index()]),
    })
}

/// Default vertex-count cap for the brute-force oracle.
pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// Exhaustive search for a color- and weight-preserving adjacency bijection,
/// with [`DEFAULT_ORACLE_BOUND`] as the size cap. This is the testing oracle;
/// canonical-string equality is the scalable route.
pub fn is_isomorphic_bruteforce(
    g: &TrivalentGraph,
    h: &TrivalentGraph,
) -> Result<bool, GraphError> {
    is_isomorphic_bruteforce_bounded(g, h, DEFAULT_ORACLE_BOUND)
}

type Signature = (u8, usize, Vec<u8>);

fn signature(g: &TrivalentGraph, v: VertexId) -> Signature {
    let color = match g.color(v) {
        Color::White => 0,
        Color::Black => 1,
    };
    let mut weights: Vec<u8> = g.neighbors(v).iter().map(|&(_, w)| w.value()).collect();
    weights.sort_unstable();
    (color, g.degree(v), weights)
}

fn bfs_forest_order(g: &TrivalentGraph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in g.vertices() {
        if seen[start.index()] {
            continue;
        }
        let mut queue = VecDeque::new();
        seen[start.index()] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(u, _) in g.neighbors(v) {
                if !seen[u.index()] {
                    seen[u.index()] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

/// [`is_isomorphic_bruteforce`] with an explicit vertex-count cap per graph.
///
/// Vertices are pre-partitioned by (color, degree, sorted incident weights);
/// those signatures are isomorphism invariants, so the pruning never changes
/// the answer.
pub fn is_isomorphic_bruteforce_bounded(
    g: &TrivalentGraph,
    h: &TrivalentGraph,
    bound: usize,
) -> Result<bool, GraphError> {
    for side in [g, h] {
        if side.vertex_count() > bound {
            return Err(GraphError::OracleBoundExceeded {
                vertices: side.vertex_count(),
                bound,
            });
        }
    }
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let sig_g: Vec<Signature> = g.vertices().map(|v| signature(g, v)).collect();
    let sig_h: Vec<Signature> = h.vertices().map(|v| signature(h, v)).collect();
    let mut sorted_g = sig_g.clone();
    let mut sorted_h = sig_h.clone();
    sorted_g.sort();
    sorted_h.sort();
    if sorted_g != sorted_h {
        return Ok(false);
    }

    // Matching in BFS order keeps at least one already-mapped neighbor next
    // to every vertex after the first, so adjacency prunes early.
    let order = bfs_forest_order(g);
    let mut matcher = Matcher {
        order: &order,
        g,
        h,
        sig_g: &sig_g,
        sig_h: &sig_h,
        map: vec![None; n],
        used: vec![false; n],
    };
    Ok(matcher.extend(0))
}

struct Matcher<'a> {
    order: &'a [VertexId],
    g: &'a TrivalentGraph,
    h: &'a TrivalentGraph,
    sig_g: &'a [Signature],
    sig_h: &'a [Signature],
    map: Vec<Option<VertexId>>,
    used: Vec<bool>,
}

impl Matcher<'_> {
    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        'candidates: for u in self.h.vertices() {
            if self.used[u.index()] || self.sig_h[u.index()] != self.sig_g[v.index()] {
                continue;
            }
            for &(x, w) in self.g.neighbors(v) {
                if let Some(y) = self.map[x.index()] {
                    let matched = self.h.neighbors(u).iter().any(|&(z, wz)| z == y && wz == w);
                    if !matched {
                        continue 'candidates;
                    }
                }
            }
            self.map[v.index()] = Some(u);
            self.used[u.index()] = true;
            if self.extend(k + 1) {
                return true;
            }
            self.map[v.index()] = None;
            self.used[u.index()] = false;
        }
        false
    }
}
