//! Exhaustive, isomorphism-free enumeration. Three attachment operations
//! grow graphs white-vertex by white-vertex from the two seeds; every
//! candidate is canonicalized and deduplicated through its canonical string.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::canonical::{decode, encode, symmetry_classes, CanonicalString, DecodeError};
use crate::graph::{self, census, Color, EdgeWeight, TrivalentGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("vertex {0} is not in the graph")]
    VertexNotInGraph(VertexId),
    #[error("vertex {0} is not white")]
    NotWhite(VertexId),
    #[error("need at least {needed} white vertices, found {found}")]
    TooFewWhites { found: usize, needed: usize },
    #[error("no leaf sits on a weight-1 edge")]
    NoWeightOneLeaf,
    #[error("enumeration starts at 2 white vertices, got {given}")]
    MaxWhiteTooSmall { given: usize },
}

fn require_white(g: &TrivalentGraph, w: VertexId) -> Result<(), OpError> {
    if !g.contains(w) {
        return Err(OpError::VertexNotInGraph(w));
    }
    if g.color(w) != Color::White {
        return Err(OpError::NotWhite(w));
    }
    Ok(())
}

/// Attaches a fresh black vertex to `w` by a weight-2 edge and hangs a new
/// white leaf on it by a weight-1 edge. White count grows by 1.
pub fn apply_o2(g: &TrivalentGraph, w: VertexId) -> Result<TrivalentGraph, OpError> {
    require_white(g, w)?;
    let mut out = g.clone();
    out.clear_root();
    let black = out.push_vertex(Color::Black);
    let leaf = out.push_vertex(Color::White);
    out.push_edge(w, black, EdgeWeight::Two);
    out.push_edge(black, leaf, EdgeWeight::One);
    Ok(out)
}

/// Attaches a fresh black vertex to `w` by a weight-1 edge and hangs two new
/// white leaves on it, also by weight-1 edges. White count grows by 2.
pub fn apply_o1(g: &TrivalentGraph, w: VertexId) -> Result<TrivalentGraph, OpError> {
    require_white(g, w)?;
    let mut out = g.clone();
    out.clear_root();
    let black = out.push_vertex(Color::Black);
    let first = out.push_vertex(Color::White);
    let second = out.push_vertex(Color::White);
    out.push_edge(w, black, EdgeWeight::One);
    out.push_edge(black, first, EdgeWeight::One);
    out.push_edge(black, second, EdgeWeight::One);
    Ok(out)
}

/// Joins two disjoint graphs through a fresh black vertex: weight-1 edges run
/// to `w1` in `g1`, to `w2` in `g2`, and to one new white leaf. The result
/// has `whites(g1) + whites(g2) + 1` white vertices. Ids of `g2` are shifted
/// past those of `g1`.
pub fn apply_o1star(
    g1: &TrivalentGraph,
    w1: VertexId,
    g2: &TrivalentGraph,
    w2: VertexId,
) -> Result<TrivalentGraph, OpError> {
    require_white(g1, w1)?;
    require_white(g2, w2)?;
    let mut out = g1.clone();
    out.clear_root();
    let offset = g1.vertex_count();
    for v in g2.vertices() {
        out.push_vertex(g2.color(v));
    }
    for (u, v, w) in g2.edges() {
        out.push_edge(
            VertexId::from(u.index() + offset),
            VertexId::from(v.index() + offset),
            w,
        );
    }
    let black = out.push_vertex(Color::Black);
    let leaf = out.push_vertex(Color::White);
    out.push_edge(w1, black, EdgeWeight::One);
    out.push_edge(VertexId::from(w2.index() + offset), black, EdgeWeight::One);
    out.push_edge(black, leaf, EdgeWeight::One);
    Ok(out)
}

/// Enumeration strategy: `Naive` attaches at every white vertex of every
/// source graph, `SymmetryReduced` attaches only at one representative per
/// symmetry class (with the seeding-stage exemption described at
/// [`enumerate`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Naive,
    SymmetryReduced,
}

/// One stored graph: its canonical string, its canonical representative
/// (the decoded form of the string, rooted at the center), and its discovery
/// ordinal within its white-count group.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphRecord {
    pub ordinal: usize,
    pub canon: CanonicalString,
    pub graph: TrivalentGraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted { white_count: usize, ordinal: usize },
    Duplicate { white_count: usize, ordinal: usize },
}

/// Canonical-string-keyed store of distinct graphs, grouped by white count.
/// Ordinals are dense per group, in discovery order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphStore {
    index: HashMap<CanonicalString, (usize, usize)>,
    groups: BTreeMap<usize, Vec<GraphRecord>>,
}

impl GraphStore {
    pub fn new() -> Self {
        GraphStore::default()
    }

    /// Inserts a canonical string; a repeated key is a no-op reported as
    /// `Duplicate`. New keys are decoded so the store holds the canonical
    /// representative of every graph.
    pub fn insert(&mut self, canon: CanonicalString) -> Result<InsertOutcome, DecodeError> {
        if let Some(&(white_count, ordinal)) = self.index.get(&canon) {
            return Ok(InsertOutcome::Duplicate {
                white_count,
                ordinal,
            });
        }
        let graph = decode(&canon)?;
        let white_count = census(&graph).white;
        let group = self.groups.entry(white_count).or_default();
        let ordinal = group.len();
        group.push(GraphRecord {
            ordinal,
            canon: canon.clone(),
            graph,
        });
        self.index.insert(canon, (white_count, ordinal));
        Ok(InsertOutcome::Inserted {
            white_count,
            ordinal,
        })
    }

    pub fn contains(&self, canon: &CanonicalString) -> bool {
        self.index.contains_key(canon)
    }

    pub fn get(&self, canon: &CanonicalString) -> Option<&GraphRecord> {
        let &(white_count, ordinal) = self.index.get(canon)?;
        Some(&self.groups[&white_count][ordinal])
    }

    /// All graphs with the given white count, in discovery order.
    pub fn group(&self, white_count: usize) -> &[GraphRecord] {
        self.groups
            .get(&white_count)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn white_counts(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.keys().copied()
    }

    pub fn distinct_counts(&self) -> BTreeMap<usize, usize> {
        self.groups
            .iter()
            .map(|(&n, group)| (n, group.len()))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Every record, ordered by white count and then by ordinal.
    pub fn records(&self) -> impl Iterator<Item = &GraphRecord> + '_ {
        self.groups.values().flatten()
    }
}

/// Outcome of an enumeration run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationResult {
    pub mode: Mode,
    pub max_white: usize,
    pub distinct_counts: BTreeMap<usize, usize>,
    pub created_counts: BTreeMap<usize, usize>,
    pub store: GraphStore,
}

/// Number of candidates a naive run generates for white count `n`, computed
/// from the distinct counts of the smaller groups: every graph with `n - 1`
/// whites contributes one candidate per white vertex, every graph with
/// `n - 2` whites likewise, and every ordered pair of white vertices drawn
/// from groups `i` and `n - 1 - i` (both at least 2) contributes one joint
/// candidate.
pub fn naive_created_count(distinct: &BTreeMap<usize, usize>, n: usize) -> usize {
    let d = |k: usize| distinct.get(&k).copied().unwrap_or(0);
    match n {
        0 | 1 => 0,
        2 => 1,
        3 => 1 + 2 * d(2),
        _ => {
            let mut total = (n - 1) * d(n - 1) + (n - 2) * d(n - 2);
            for i in 2..=n.saturating_sub(3) {
                let j = n - 1 - i;
                total += i * d(i) * j * d(j);
            }
            total
        }
    }
}

/// Graphs whose white lists are never symmetry-reduced when they serve as
/// sources: the seeds and the graphs built before the main loop, all with at
/// most 3 whites. Reduction starts with the graphs the main loop produces.
const UNREDUCED_SOURCE_MAX_WHITE: usize = 3;

fn attachment_points(record: &GraphRecord, white_count: usize, mode: Mode) -> Vec<VertexId> {
    match mode {
        Mode::Naive => record.graph.white_vertices(),
        Mode::SymmetryReduced if white_count <= UNREDUCED_SOURCE_MAX_WHITE => {
            record.graph.white_vertices()
        }
        Mode::SymmetryReduced => symmetry_classes(&record.graph).representatives(),
    }
}

fn collect_sources(
    store: &GraphStore,
    white_count: usize,
    mode: Mode,
) -> Vec<(TrivalentGraph, Vec<VertexId>)> {
    store
        .group(white_count)
        .iter()
        .map(|record| {
            (
                record.graph.clone(),
                attachment_points(record, white_count, mode),
            )
        })
        .collect()
}

/// Enumerates all distinct graphs with 2 to `max_white` white vertices.
///
/// Seeding inserts the 2-white seed, the 3-white seed, and the weight-2
/// extensions of the former. The main loop then fills each white count `n`
/// in order: weight-2 extensions of every graph with `n - 1` whites,
/// three-leaf attachments to every graph with `n - 2` whites, and joins of
/// every ordered pair of graphs whose white counts sum to `n - 1` (both
/// orientations, same-group pairs included). `created_counts` tallies
/// candidates before deduplication; the seeds count as created.
///
/// In `SymmetryReduced` mode only one attachment point per symmetry class of
/// a source graph is used, except for sources with at most
/// 3 whites, which keep all their white vertices. Both modes discover
/// exactly the same distinct graphs.
pub fn enumerate(max_white: usize, mode: Mode) -> Result<EnumerationResult, OpError> {
    enumerate_with(max_white, mode, |_, _, _| {})
}

/// [`enumerate`] with a progress callback, called once per completed white
/// count with `(n, distinct_so_far, created)`.
pub fn enumerate_with(
    max_white: usize,
    mode: Mode,
    mut progress: impl FnMut(usize, usize, usize),
) -> Result<EnumerationResult, OpError> {
    if max_white < 2 {
        return Err(OpError::MaxWhiteTooSmall { given: max_white });
    }
    let mut store = GraphStore::new();
    let mut created_counts: BTreeMap<usize, usize> = BTreeMap::new();

    let admit = |store: &mut GraphStore, g: &TrivalentGraph| {
        store
            .insert(encode(g))
            .expect("generated graphs decode cleanly");
    };

    admit(&mut store, &graph::b12());
    created_counts.insert(2, 1);
    progress(2, store.group(2).len(), 1);

    if max_white >= 3 {
        let mut created = 1usize;
        admit(&mut store, &graph::b111());
        let seed = graph::b12();
        for w in seed.white_vertices() {
            let candidate = apply_o2(&seed, w).expect("seed whites are white");
            admit(&mut store, &candidate);
            created += 1;
        }
        created_counts.insert(3, created);
        progress(3, store.group(3).len(), created);
    }

    for n in 4..=max_white {
        let mut created = 0usize;

        for (g, points) in collect_sources(&store, n - 1, mode) {
            for &w in &points {
                let candidate = apply_o2(&g, w).expect("attachment points are white");
                admit(&mut store, &candidate);
                created += 1;
            }
        }

        for (g, points) in collect_sources(&store, n - 2, mode) {
            for &w in &points {
                let candidate = apply_o1(&g, w).expect("attachment points are white");
                admit(&mut store, &candidate);
                created += 1;
            }
        }

        for i in 2..=n.saturating_sub(3) {
            let j = n - 1 - i;
            let left = collect_sources(&store, i, mode);
            let right = collect_sources(&store, j, mode);
            for (g1, points1) in &left {
                for &w1 in points1 {
                    for (g2, points2) in &right {
                        for &w2 in points2 {
                            let candidate =
                                apply_o1star(g1, w1, g2, w2).expect("attachment points are white");
                            admit(&mut store, &candidate);
                            created += 1;
                        }
                    }
                }
            }
        }

        created_counts.insert(n, created);
        progress(n, store.group(n).len(), created);
    }

    Ok(EnumerationResult {
        mode,
        max_white,
        distinct_counts: store.distinct_counts(),
        created_counts,
        store,
    })
}

/// How a graph arose from a smaller one, as recovered by [`inverse_witness`]:
/// the precursor graph(s) and the attachment point(s), with ids renormalized.
#[derive(Debug, Clone, PartialEq)]
pub enum InverseWitness {
    O2 {
        precursor: TrivalentGraph,
        anchor: VertexId,
    },
    O1 {
        precursor: TrivalentGraph,
        anchor: VertexId,
    },
    O1Star {
        left: TrivalentGraph,
        left_anchor: VertexId,
        right: TrivalentGraph,
        right_anchor: VertexId,
    },
}

impl InverseWitness {
    /// Applies the recorded operation to the recorded precursor(s); the
    /// result is isomorphic to the graph the witness was extracted from.
    pub fn reapply(&self) -> TrivalentGraph {
        match self {
            InverseWitness::O2 { precursor, anchor } => {
                apply_o2(precursor, *anchor).expect("witness anchors are white")
            }
            InverseWitness::O1 { precursor, anchor } => {
                apply_o1(precursor, *anchor).expect("witness anchors are white")
            }
            InverseWitness::O1Star {
                left,
                left_anchor,
                right,
                right_anchor,
            } => apply_o1star(left, *left_anchor, right, *right_anchor)
                .expect("witness anchors are white"),
        }
    }
}

/// Induced subgraph on `keep` (ascending), with ids compacted in order.
/// Returns the subgraph and the old-to-new id map.
fn induced(g: &TrivalentGraph, keep: &[VertexId]) -> (TrivalentGraph, Vec<Option<VertexId>>) {
    let mut remap: Vec<Option<VertexId>> = vec![None; g.vertex_count()];
    for (new, &old) in keep.iter().enumerate() {
        remap[old.index()] = Some(VertexId::from(new));
    }
    let colors: Vec<Color> = keep.iter().map(|&v| g.color(v)).collect();
    let mut edges: Vec<(usize, usize, u8)> = Vec::new();
    for &v in keep {
        for &(u, w) in g.neighbors(v) {
            if v < u {
                if let (Some(nv), Some(nu)) = (remap[v.index()], remap[u.index()]) {
                    edges.push((nv.index(), nu.index(), w.value()));
                }
            }
        }
    }
    let sub = TrivalentGraph::from_parts(colors, &edges).expect("induced parts are well formed");
    (sub, remap)
}

fn component_without(g: &TrivalentGraph, start: VertexId, removed: &[VertexId]) -> Vec<VertexId> {
    let mut blocked = vec![false; g.vertex_count()];
    for &v in removed {
        blocked[v.index()] = true;
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    seen[start.index()] = true;
    queue.push_back(start);
    let mut members = Vec::new();
    while let Some(v) = queue.pop_front() {
        members.push(v);
        for &(u, _) in g.neighbors(v) {
            if !seen[u.index()] && !blocked[u.index()] {
                seen[u.index()] = true;
                queue.push_back(u);
            }
        }
    }
    members.sort_unstable();
    members
}

/// Recovers, for any valid graph with at least 4 white vertices, one
/// operation application that produces it from smaller graph(s).
///
/// The lowest-id leaf `w` on a weight-1 edge is examined through its black
/// neighbor `b`: a degree-2 `b` peels off as a weight-2 extension; a
/// degree-3 `b` with another leaf next to it peels off as a three-leaf
/// attachment; a degree-3 `b` between two non-leaves splits the graph into
/// the two halves of a join.
pub fn inverse_witness(g: &TrivalentGraph) -> Result<InverseWitness, OpError> {
    let white = census(g).white;
    if white < 4 {
        return Err(OpError::TooFewWhites {
            found: white,
            needed: 4,
        });
    }
    let w = g
        .vertices()
        .find(|&v| g.is_leaf(v) && g.neighbors(v)[0].1 == EdgeWeight::One)
        .ok_or(OpError::NoWeightOneLeaf)?;
    let (b, _) = g.neighbors(w)[0];
    match g.degree(b) {
        2 => {
            let (v, _) = *g
                .neighbors(b)
                .iter()
                .find(|&&(u, _)| u != w)
                .expect("degree-2 vertices have another neighbor");
            let keep: Vec<VertexId> = g.vertices().filter(|&x| x != w && x != b).collect();
            let (precursor, remap) = induced(g, &keep);
            let anchor = remap[v.index()].expect("the anchor survives the cut");
            Ok(InverseWitness::O2 { precursor, anchor })
        }
        3 => {
            let mut others: Vec<VertexId> = g
                .neighbors(b)
                .iter()
                .map(|&(u, _)| u)
                .filter(|&u| u != w)
                .collect();
            others.sort_unstable();
            let leaf_sibling = others.iter().copied().find(|&u| g.is_leaf(u));
            match leaf_sibling {
                Some(sibling) => {
                    let anchor_old = others
                        .into_iter()
                        .find(|&u| u != sibling)
                        .expect("a degree-3 vertex has two neighbors besides the leaf");
                    let keep: Vec<VertexId> = g
                        .vertices()
                        .filter(|&x| x != w && x != b && x != sibling)
                        .collect();
                    let (precursor, remap) = induced(g, &keep);
                    let anchor = remap[anchor_old.index()].expect("the anchor survives the cut");
                    Ok(InverseWitness::O1 { precursor, anchor })
                }
                None => {
                    let (v1, v2) = (others[0], others[1]);
                    let left_members = component_without(g, v1, &[w, b]);
                    let right_members = component_without(g, v2, &[w, b]);
                    let (left, left_remap) = induced(g, &left_members);
                    let (right, right_remap) = induced(g, &right_members);
                    Ok(InverseWitness::O1Star {
                        left_anchor: left_remap[v1.index()].expect("anchor in its component"),
                        right_anchor: right_remap[v2.index()].expect("anchor in its component"),
                        left,
                        right,
                    })
                }
            }
        }
        other => unreachable!("valid graphs have black degree 2 or 3, found {other}"),
    }
}
