//! Enumeration of trivalent 2-stratifold graphs: edge-weighted bicolored
//! trees built from two seeds by three attachment operations, identified up
//! to isomorphism by a canonical string over the alphabet {0, 1, 2, 3}.
//!
//! [`graph`] holds the data model and validity rules, [`canonical`] the
//! string encoding and its inverse, [`generator`] the operations and the
//! exhaustive enumerator, and [`catalog`] persistence and reporting.

#![forbid(unsafe_code)]

pub mod canonical;
pub mod catalog;
pub mod generator;
pub mod graph;

pub use canonical::{decode, decode_str, encode, symmetry_classes, CanonicalString};
pub use catalog::{read_catalog, stats_table, write_catalog};
pub use generator::{enumerate, enumerate_with, EnumerationResult, GraphStore, Mode};
pub use graph::{b111, b12, census, validate, Color, EdgeWeight, TrivalentGraph, VertexId};
