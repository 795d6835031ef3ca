//! Catalog persistence and reporting: invariant tags, a line-oriented JSON
//! interchange format with integrity checking on read, DOT export, and the
//! counting table as CSV.

use std::collections::{BTreeMap, VecDeque};
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::{encode, CanonicalString};
use crate::generator::{naive_created_count, EnumerationResult, GraphStore, InsertOutcome, Mode};
use crate::graph::{census, Color, EdgeWeight, TrivalentGraph, VertexId};

/// Cheap isomorphism invariants of a stored graph, plus its discovery
/// ordinal. Equal graphs always tag equally; the converse fails, so tags
/// serve as integrity checks and human-readable summaries, not identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tag {
    pub white: usize,
    pub black: usize,
    pub leaves: usize,
    pub shortest_leaf_path: usize,
    pub largest_leaf_path: usize,
    pub id: usize,
}

impl Tag {
    pub fn as_array(&self) -> [usize; 6] {
        [
            self.white,
            self.black,
            self.leaves,
            self.shortest_leaf_path,
            self.largest_leaf_path,
            self.id,
        ]
    }
}

fn distances_from(g: &TrivalentGraph, start: VertexId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[start.index()] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &(u, _) in g.neighbors(v) {
            if dist[u.index()] == usize::MAX {
                dist[u.index()] = dist[v.index()] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Tags a graph with its census and the extreme leaf-to-leaf distances
/// (in edges). Requires at least two leaves, which every valid graph has.
pub fn make_tag(g: &TrivalentGraph, id: usize) -> Tag {
    let c = census(g);
    let leaves = g.leaves();
    assert!(leaves.len() >= 2, "tagging needs at least two leaves");
    let mut shortest = usize::MAX;
    let mut largest = 0;
    for (i, &a) in leaves.iter().enumerate() {
        let dist = distances_from(g, a);
        for &b in &leaves[i + 1..] {
            shortest = shortest.min(dist[b.index()]);
            largest = largest.max(dist[b.index()]);
        }
    }
    Tag {
        white: c.white,
        black: c.black,
        leaves: c.leaves,
        shortest_leaf_path: shortest,
        largest_leaf_path: largest,
        id,
    }
}

/// Renders a graph in DOT. White vertices are hollow circles, black
/// vertices are filled, and weight-2 edges carry a "2" label.
pub fn to_dot_named(g: &TrivalentGraph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in g.vertices() {
        match g.color(v) {
            Color::White => {
                out.push_str(&format!("  v{v} [shape=circle];\n"));
            }
            Color::Black => {
                out.push_str(&format!(
                    "  v{v} [shape=circle, style=filled, fillcolor=black, fontcolor=white];\n"
                ));
            }
        }
    }
    for (u, v, w) in g.edges() {
        match w {
            EdgeWeight::One => out.push_str(&format!("  v{u} -- v{v};\n")),
            EdgeWeight::Two => out.push_str(&format!("  v{u} -- v{v} [label=\"2\"];\n")),
        }
    }
    out.push_str("}\n");
    out
}

pub fn to_dot(g: &TrivalentGraph) -> String {
    to_dot_named(g, "g")
}

/// One catalog line: white count, discovery ordinal, canonical string, and
/// the tag array `[white, black, leaves, shortest, largest, id]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub n: usize,
    pub id: usize,
    pub canon: String,
    pub tag: [usize; 6],
}

impl CatalogRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("catalog records serialize")
    }

    pub fn from_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog i/o failed: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("line {line}: {message}")]
    IntegrityMismatch { line: usize, message: String },
}

/// Writes one JSON line per stored graph, grouped by white count in
/// ascending order and by discovery ordinal within a group. The output is a
/// pure function of the store contents, byte for byte.
pub fn write_catalog<W: Write>(store: &GraphStore, mut out: W) -> io::Result<()> {
    for record in store.records() {
        let n = census(&record.graph).white;
        let line = CatalogRecord {
            n,
            id: record.ordinal,
            canon: record.canon.as_str().to_owned(),
            tag: make_tag(&record.graph, record.ordinal).as_array(),
        };
        writeln!(out, "{}", line.to_line())?;
    }
    Ok(())
}

/// Reads a catalog back into a store, re-deriving and cross-checking every
/// field: the string must parse, decode to a valid graph, and re-encode to
/// itself; the white count, ordinal, and tag must match what the graph
/// yields. Line numbers in errors are 1-based.
pub fn read_catalog<R: BufRead>(input: R) -> Result<GraphStore, CatalogError> {
    let mut store = GraphStore::new();
    for (index, line) in input.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = CatalogRecord::from_line(&line).map_err(|e| CatalogError::MalformedLine {
            line: line_no,
            message: format!("not a catalog record: {e}"),
        })?;
        let canon = CanonicalString::parse(record.canon.as_str()).map_err(|e| {
            CatalogError::MalformedLine {
                line: line_no,
                message: format!("bad canonical string: {e}"),
            }
        })?;
        let outcome = store
            .insert(canon.clone())
            .map_err(|e| CatalogError::IntegrityMismatch {
                line: line_no,
                message: format!("string does not decode to a valid graph: {e}"),
            })?;
        let (white_count, ordinal) = match outcome {
            InsertOutcome::Inserted {
                white_count,
                ordinal,
            } => (white_count, ordinal),
            InsertOutcome::Duplicate { .. } => {
                return Err(CatalogError::IntegrityMismatch {
                    line: line_no,
                    message: "duplicate canonical string".to_owned(),
                });
            }
        };
        let stored = store.get(&canon).expect("just inserted");
        if encode(&stored.graph) != canon {
            return Err(CatalogError::IntegrityMismatch {
                line: line_no,
                message: "string is not in canonical form".to_owned(),
            });
        }
        if record.n != white_count {
            return Err(CatalogError::IntegrityMismatch {
                line: line_no,
                message: format!(
                    "white count {} does not match the graph ({white_count})",
                    record.n
                ),
            });
        }
        if record.id != ordinal {
            return Err(CatalogError::IntegrityMismatch {
                line: line_no,
                message: format!("id {} is out of order (expected {ordinal})", record.id),
            });
        }
        let tag = make_tag(&stored.graph, ordinal).as_array();
        if record.tag != tag {
            return Err(CatalogError::IntegrityMismatch {
                line: line_no,
                message: format!("tag {:?} does not match the graph ({tag:?})", record.tag),
            });
        }
    }
    Ok(store)
}

pub const STATS_HEADER: &str = "n,total,created,reduction_percent";

fn stats_rows(
    distinct: &BTreeMap<usize, usize>,
    created: &BTreeMap<usize, usize>,
    with_reduction: bool,
) -> String {
    let mut out = String::from(STATS_HEADER);
    out.push('\n');
    for (&n, &total) in distinct {
        let made = created.get(&n).copied().unwrap_or(0);
        if with_reduction {
            let baseline = naive_created_count(distinct, n);
            let reduction = if baseline == 0 {
                0.0
            } else {
                (1.0 - made as f64 / baseline as f64) * 100.0
            };
            out.push_str(&format!("{n},{total},{made},{reduction:.2}\n"));
        } else {
            out.push_str(&format!("{n},{total},{made},\n"));
        }
    }
    out
}

/// Counting table for an enumeration run as CSV: white count, distinct
/// graphs, candidates generated, and (for a symmetry-reduced run) how much
/// of the naive candidate volume the reduction saved, in percent.
pub fn stats_table(result: &EnumerationResult) -> String {
    stats_rows(
        &result.distinct_counts,
        &result.created_counts,
        result.mode == Mode::SymmetryReduced,
    )
}

/// Counting table reconstructed from stored graphs alone. The candidate
/// column is the naive count implied by the distinct totals; the reduction
/// column stays empty because the generating mode is not recorded.
pub fn stats_table_from_store(store: &GraphStore) -> String {
    let distinct = store.distinct_counts();
    let created: BTreeMap<usize, usize> = distinct
        .keys()
        .map(|&n| (n, naive_created_count(&distinct, n)))
        .collect();
    stats_rows(&distinct, &created, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{apply_o2, enumerate};
    use crate::graph::{b111, b12};

    fn vid(i: usize) -> VertexId {
        VertexId::from(i)
    }

    #[test]
    fn tags_of_seeds() {
        assert_eq!(make_tag(&b12(), 0).as_array(), [2, 1, 2, 2, 2, 0]);
        assert_eq!(make_tag(&b111(), 0).as_array(), [3, 1, 3, 2, 2, 0]);
    }

    #[test]
    fn tag_of_a_chain() {
        let g = apply_o2(&b12(), vid(1)).unwrap();
        assert_eq!(make_tag(&g, 4).as_array(), [3, 2, 2, 4, 4, 4]);
    }

    #[test]
    fn dot_marks_colors_and_weights() {
        let dot = to_dot_named(&b12(), "seed");
        assert!(dot.starts_with("graph seed {"));
        assert!(dot.contains("v0 [shape=circle, style=filled, fillcolor=black"));
        assert!(dot.contains("v1 [shape=circle];"));
        assert!(dot.contains("v0 -- v1;"));
        assert!(dot.contains("v0 -- v2 [label=\"2\"];"));
    }

    #[test]
    fn catalog_round_trips() {
        let result = enumerate(5, Mode::Naive).unwrap();
        let mut bytes = Vec::new();
        write_catalog(&result.store, &mut bytes).unwrap();
        let reread = read_catalog(bytes.as_slice()).unwrap();
        assert_eq!(reread, result.store);
        let mut again = Vec::new();
        write_catalog(&reread, &mut again).unwrap();
        assert_eq!(bytes, again);
    }

    #[test]
    fn catalog_line_count_matches_totals() {
        let result = enumerate(4, Mode::Naive).unwrap();
        let mut bytes = Vec::new();
        write_catalog(&result.store, &mut bytes).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), 1 + 3 + 6);
    }

    #[test]
    fn read_rejects_garbage_lines() {
        let err = read_catalog("not json\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CatalogError::MalformedLine { line: 1, .. }));
    }

    #[test]
    fn read_rejects_tampered_tags() {
        let result = enumerate(3, Mode::Naive).unwrap();
        let mut bytes = Vec::new();
        write_catalog(&result.store, &mut bytes).unwrap();
        let tampered = String::from_utf8(bytes).unwrap().replacen(
            "\"tag\":[3,1,3,2,2,0]",
            "\"tag\":[3,1,3,2,4,0]",
            1,
        );
        let err = read_catalog(tampered.as_bytes()).unwrap_err();
        assert!(matches!(
            err,
            CatalogError::IntegrityMismatch { line: 2, .. }
        ));
    }

    #[test]
    fn read_rejects_duplicates() {
        let line = {
            let result = enumerate(2, Mode::Naive).unwrap();
            let mut bytes = Vec::new();
            write_catalog(&result.store, &mut bytes).unwrap();
            String::from_utf8(bytes).unwrap()
        };
        let doubled = format!("{line}{line}");
        let err = read_catalog(doubled.as_bytes()).unwrap_err();
        match err {
            CatalogError::IntegrityMismatch { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("duplicate"));
            }
            other => panic!("expected an integrity error, got {other:?}"),
        }
    }

    #[test]
    fn read_rejects_noncanonical_strings() {
        let record = CatalogRecord {
            n: 2,
            id: 0,
            canon: "002311".to_owned(),
            tag: [2, 1, 2, 2, 2, 0],
        };
        let err = read_catalog(format!("{}\n", record.to_line()).as_bytes()).unwrap_err();
        match err {
            CatalogError::IntegrityMismatch { line: 1, message } => {
                assert!(message.contains("canonical form"));
            }
            other => panic!("expected an integrity error, got {other:?}"),
        }
    }

    #[test]
    fn stats_rows_for_a_naive_run() {
        let result = enumerate(5, Mode::Naive).unwrap();
        let table = stats_table(&result);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(
            lines,
            vec![
                "n,total,created,reduction_percent",
                "2,1,1,",
                "3,3,3,",
                "4,6,11,",
                "5,18,37,",
            ]
        );
    }

    #[test]
    fn stats_rows_for_a_reduced_run() {
        let result = enumerate(5, Mode::SymmetryReduced).unwrap();
        let table = stats_table(&result);
        assert!(table.contains("4,6,11,0.00\n"));
        assert!(table.contains("5,18,32,13.51\n"));
    }

    #[test]
    fn stats_from_a_bare_store_use_the_counting_formula() {
        let result = enumerate(5, Mode::SymmetryReduced).unwrap();
        let table = stats_table_from_store(&result.store);
        assert!(table.contains("5,18,37,\n"));
    }
}
