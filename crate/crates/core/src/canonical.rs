//! Canonical string encoding of the trees and everything it rests on:
//! eccentricities, the unique center, the modified AHU naming of rooted
//! subtrees, decoding, and symmetry classes of white vertices.
//!
//! A tree with `n` vertices encodes to a string of length `2n` over the
//! alphabet `{0, 1, 2, 3}`. Each vertex becomes one balanced wrapper around
//! the sorted names of its children: `0…1` when the edge to the father has
//! weight 1 (or the vertex is the root), `2…3` when it has weight 2. Two
//! valid trees are isomorphic exactly when their encodings are equal, because
//! encoding always starts from the tree's unique center.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{self, Color, EdgeWeight, TrivalentGraph, VertexId, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("the graph has no root; root it before asking for tuple names")]
    Unrooted,
    #[error("vertex {0} is not in the graph")]
    VertexNotInGraph(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalStringError {
    #[error("empty string")]
    Empty,
    #[error("illegal character {character:?} at byte {position}; only 0-3 are allowed")]
    IllegalCharacter { position: usize, character: char },
    #[error("improper nesting at byte {position}")]
    Unbalanced { position: usize },
    #[error("the outermost wrapper must be 0…1")]
    WrongOuterWrapper,
    #[error("sibling names out of order at byte {position}")]
    UnsortedSiblings { position: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error(transparent)]
    Syntax(#[from] CanonicalStringError),
    #[error("decoded graph is not a valid trivalent graph: {}", violations_summary(.violations))]
    InvalidGraph { violations: Vec<Violation> },
}

fn violations_summary(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A syntactically well-formed canonical string: balanced wrappers over
/// `{0, 1, 2, 3}`, outermost wrapper `0…1`, siblings in nondecreasing order.
///
/// Strings produced by [`encode`] additionally start at the tree's center and
/// therefore decode back to a graph that re-encodes to the same string.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalString {
    text: String,
}

impl CanonicalString {
    /// Checks the grammar and takes ownership of the text.
    pub fn parse(text: impl Into<String>) -> Result<Self, CanonicalStringError> {
        let text = text.into();
        parse_tree(&text)?;
        Ok(CanonicalString { text })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// Number of vertices of the encoded tree: each vertex contributes one
    /// opening and one closing character.
    pub fn vertex_count(&self) -> usize {
        self.text.len() / 2
    }
}

impl fmt::Display for CanonicalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

struct ParsedNode {
    weight: EdgeWeight,
    children: Vec<ParsedNode>,
    start: usize,
    end: usize,
}

struct OpenFrame {
    open: u8,
    start: usize,
    children: Vec<ParsedNode>,
}

fn parse_tree(text: &str) -> Result<ParsedNode, CanonicalStringError> {
    if text.is_empty() {
        return Err(CanonicalStringError::Empty);
    }
    let bytes = text.as_bytes();
    let mut stack: Vec<OpenFrame> = Vec::new();
    let mut completed: Option<ParsedNode> = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'0' | b'2' => {
                if completed.is_some() {
                    return Err(CanonicalStringError::Unbalanced { position: i });
                }
                stack.push(OpenFrame {
                    open: b,
                    start: i,
                    children: Vec::new(),
                });
            }
            b'1' | b'3' => {
                let frame = match stack.pop() {
                    Some(frame) => frame,
                    None => return Err(CanonicalStringError::Unbalanced { position: i }),
                };
                let expected = if frame.open == b'0' { b'1' } else { b'3' };
                if b != expected {
                    return Err(CanonicalStringError::Unbalanced { position: i });
                }
                for pair in frame.children.windows(2) {
                    if text[pair[0].start..pair[0].end] > text[pair[1].start..pair[1].end] {
                        return Err(CanonicalStringError::UnsortedSiblings {
                            position: pair[1].start,
                        });
                    }
                }
                let node = ParsedNode {
                    weight: if frame.open == b'0' {
                        EdgeWeight::One
                    } else {
                        EdgeWeight::Two
                    },
                    children: frame.children,
                    start: frame.start,
                    end: i + 1,
                };
                match stack.last_mut() {
                    Some(parent) => parent.children.push(node),
                    None => completed = Some(node),
                }
            }
            other => {
                return Err(CanonicalStringError::IllegalCharacter {
                    position: i,
                    character: other as char,
                })
            }
        }
    }
    if !stack.is_empty() {
        return Err(CanonicalStringError::Unbalanced {
            position: bytes.len(),
        });
    }
    let root = completed.expect("a balanced nonempty string closes exactly one root");
    if root.weight != EdgeWeight::One {
        return Err(CanonicalStringError::WrongOuterWrapper);
    }
    Ok(root)
}

/// Breadth-first traversal from `root`: visit order, the edge to each
/// vertex's father, and depths in edges.
#[allow(clippy::type_complexity)]
fn bfs_from(
    g: &TrivalentGraph,
    root: VertexId,
) -> (
    Vec<VertexId>,
    Vec<Option<(VertexId, EdgeWeight)>>,
    Vec<usize>,
) {
    let n = g.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut father: Vec<Option<(VertexId, EdgeWeight)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    depth[root.index()] = 0;
    queue.push_back(root);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &(u, w) in g.neighbors(v) {
            if depth[u.index()] == usize::MAX {
                depth[u.index()] = depth[v.index()] + 1;
                father[u.index()] = Some((v, w));
                queue.push_back(u);
            }
        }
    }
    (order, father, depth)
}

/// Longest unweighted distance from `v` to any vertex.
pub fn eccentricity(g: &TrivalentGraph, v: VertexId) -> Result<usize, CanonicalError> {
    if !g.contains(v) {
        return Err(CanonicalError::VertexNotInGraph(v));
    }
    let (order, _, depth) = bfs_from(g, v);
    Ok(order.iter().map(|u| depth[u.index()]).max().unwrap_or(0))
}

/// A maximum-length simple path starting at `v`. Among equally deep branches
/// the child with the lowest id wins, so the result is deterministic; the
/// final vertex is always a leaf (or `v` itself in a single-vertex graph).
pub fn farthest_path(g: &TrivalentGraph, v: VertexId) -> Result<Vec<VertexId>, CanonicalError> {
    if !g.contains(v) {
        return Err(CanonicalError::VertexNotInGraph(v));
    }
    let (order, father, _) = bfs_from(g, v);
    let n = g.vertex_count();
    let mut best_len = vec![0usize; n];
    let mut best_child: Vec<Option<VertexId>> = vec![None; n];
    for &u in order.iter().rev() {
        let mut kids: Vec<VertexId> = g
            .neighbors(u)
            .iter()
            .map(|&(c, _)| c)
            .filter(|&c| father[c.index()].map(|(f, _)| f) == Some(u))
            .collect();
        kids.sort_unstable();
        for c in kids {
            let candidate = best_len[c.index()] + 1;
            if candidate > best_len[u.index()] {
                best_len[u.index()] = candidate;
                best_child[u.index()] = Some(c);
            }
        }
    }
    let mut path = vec![v];
    let mut cursor = v;
    while let Some(next) = best_child[cursor.index()] {
        path.push(next);
        cursor = next;
    }
    Ok(path)
}

/// The unique center of a valid graph, found as the midpoint of a diameter.
///
/// Two sweeps: a farthest path from vertex 0 ends in one diameter endpoint,
/// and a farthest path from that endpoint is a diameter. Valid graphs have
/// even diameter (leaf-to-leaf paths join two whites), so the midpoint is a
/// single vertex.
pub fn center(g: &TrivalentGraph) -> VertexId {
    assert!(g.vertex_count() > 0, "center of an empty graph");
    let first = farthest_path(g, VertexId::from(0)).expect("vertex 0 exists");
    let endpoint = *first.last().expect("paths are nonempty");
    let diameter = farthest_path(g, endpoint).expect("endpoint exists");
    diameter[diameter.len() / 2]
}

/// A copy of `g` rooted at its center.
pub fn rooted_at_center(g: &TrivalentGraph) -> TrivalentGraph {
    let c = center(g);
    g.rooted_at(c).expect("center is in the graph")
}

/// Tuple names of every vertex relative to `root`. A vertex's name wraps the
/// sorted concatenation of its children's names in `0…1` (father edge of
/// weight 1, or no father) or `2…3` (father edge of weight 2); leaves come
/// out as `01` or `23`.
fn tuple_names_from(g: &TrivalentGraph, root: VertexId) -> Vec<String> {
    let n = g.vertex_count();
    let (order, father, _) = bfs_from(g, root);
    let mut names = vec![String::new(); n];
    for &v in order.iter().rev() {
        let mut kid_names: Vec<&str> = g
            .neighbors(v)
            .iter()
            .map(|&(c, _)| c)
            .filter(|&c| father[c.index()].map(|(f, _)| f) == Some(v))
            .map(|c| names[c.index()].as_str())
            .collect();
        kid_names.sort_unstable();
        let body: String = kid_names.concat();
        let (open, close) = match father[v.index()] {
            None | Some((_, EdgeWeight::One)) => ('0', '1'),
            Some((_, EdgeWeight::Two)) => ('2', '3'),
        };
        let mut name = String::with_capacity(body.len() + 2);
        name.push(open);
        name.push_str(&body);
        name.push(close);
        names[v.index()] = name;
    }
    names
}

/// Tuple name of `v` in the rooted graph `g`.
pub fn ahu_modified(g: &TrivalentGraph, v: VertexId) -> Result<String, CanonicalError> {
    let root = g.root().ok_or(CanonicalError::Unrooted)?;
    if !g.contains(v) {
        return Err(CanonicalError::VertexNotInGraph(v));
    }
    let names = tuple_names_from(g, root);
    Ok(names[v.index()].clone())
}

/// Canonical string of a valid graph: the tuple name of its center.
/// Equal strings mean isomorphic graphs and vice versa.
pub fn encode(g: &TrivalentGraph) -> CanonicalString {
    let c = center(g);
    let names = tuple_names_from(g, c);
    let text = names[c.index()].clone();
    debug_assert!(parse_tree(&text).is_ok());
    CanonicalString { text }
}

/// Rebuilds a graph from a well-formed canonical string.
///
/// Vertex ids are assigned in preorder, the string's outermost vertex becomes
/// the root, edge weights follow the wrapper kinds, and colors alternate from
/// the root, which is black exactly when its height in edges is odd (leaves
/// of a valid tree are white). The result is checked with
/// [`graph::validate`]; for strings produced by [`encode`] the round trip is
/// exact. A well-formed string whose outermost vertex is not the tree's
/// center still decodes, but re-encodes to the centered form.
pub fn decode(s: &CanonicalString) -> Result<TrivalentGraph, DecodeError> {
    let root = parse_tree(&s.text).expect("CanonicalString is syntactically valid");
    decode_parsed(&root)
}

/// [`decode`] for raw text: parses first, then rebuilds.
pub fn decode_str(text: &str) -> Result<TrivalentGraph, DecodeError> {
    let root = parse_tree(text)?;
    decode_parsed(&root)
}

fn decode_parsed(root: &ParsedNode) -> Result<TrivalentGraph, DecodeError> {
    // Height of the root in edges, without recursion.
    let mut height = 0usize;
    let mut probe: Vec<(&ParsedNode, usize)> = vec![(root, 0)];
    while let Some((node, d)) = probe.pop() {
        height = height.max(d);
        for child in &node.children {
            probe.push((child, d + 1));
        }
    }
    let root_color = if height % 2 == 1 {
        Color::Black
    } else {
        Color::White
    };

    let mut colors = Vec::new();
    let mut edges: Vec<(usize, usize, u8)> = Vec::new();
    // Preorder ids; the stack carries (node, father id, depth).
    let mut stack: Vec<(&ParsedNode, Option<usize>, usize)> = vec![(root, None, 0)];
    while let Some((node, father, depth)) = stack.pop() {
        let id = colors.len();
        colors.push(if depth % 2 == 0 {
            root_color
        } else {
            root_color.opposite()
        });
        if let Some(f) = father {
            edges.push((f, id, node.weight.value()));
        }
        for child in node.children.iter().rev() {
            stack.push((child, Some(id), depth + 1));
        }
    }

    let mut g = TrivalentGraph::from_parts(colors, &edges)
        .expect("parsed nodes generate well-formed parts");
    let violations = graph::validate(&g);
    if !violations.is_empty() {
        return Err(DecodeError::InvalidGraph { violations });
    }
    g.set_root(VertexId::from(0));
    Ok(g)
}

/// Partition of the white vertices of a valid graph into symmetry classes:
/// two whites fall in one class exactly when some automorphism of the
/// center-rooted weighted tree maps one to the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryClasses {
    classes: Vec<Vec<VertexId>>,
}

impl SymmetryClasses {
    /// The classes, each sorted ascending, ordered by their first member.
    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    /// Lowest-id member of each class, ascending.
    pub fn representatives(&self) -> Vec<VertexId> {
        self.classes.iter().map(|class| class[0]).collect()
    }

    pub fn are_symmetric(&self, u: VertexId, v: VertexId) -> bool {
        self.classes
            .iter()
            .any(|class| class.contains(&u) && class.contains(&v))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Computes the symmetry classes of the white vertices of a valid graph,
/// rooted at its center.
///
/// Vertices are refined top-down: the root sits in its own class, and every
/// other vertex is classified by the pair (father's class, own tuple name).
/// This matches the automorphism definition because an automorphism fixes
/// the root, maps fathers to fathers, and can permute equally named sibling
/// subtrees freely.
pub fn symmetry_classes(g: &TrivalentGraph) -> SymmetryClasses {
    let root = center(g);
    let names = tuple_names_from(g, root);
    let (order, father, _) = bfs_from(g, root);
    let n = g.vertex_count();
    let mut class = vec![0usize; n];
    let mut intern: HashMap<(usize, String), usize> = HashMap::new();
    let mut next = 1usize;
    for &v in &order {
        if v == root {
            continue;
        }
        let (f, _) = father[v.index()].expect("non-root vertices have fathers");
        let key = (class[f.index()], names[v.index()].clone());
        class[v.index()] = *intern.entry(key).or_insert_with(|| {
            let fresh = next;
            next += 1;
            fresh
        });
    }

    let mut grouped: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for v in g.white_vertices() {
        grouped.entry(class[v.index()]).or_default().push(v);
    }
    let mut classes: Vec<Vec<VertexId>> = grouped.into_values().collect();
    for members in &mut classes {
        members.sort_unstable();
    }
    classes.sort_by_key(|members| members[0]);
    SymmetryClasses { classes }
}
