//! Reduced words of permutations, the graphs they form under commutation
//! and long braid moves, and tools for computing and explaining diameters.

pub mod cli;
pub mod encoding;
pub mod error;
pub mod formulas;
pub mod graph;
pub mod perm;
pub mod reproduce;
pub mod stats;
mod unionfind;
pub mod word;

pub use error::{Error, Result};
pub use graph::{build_g, build_g_capped, ClassGraph, Edge, EdgeKind, LabeledGraph, VertexLabel, WordGraph};
pub use perm::{InflationExpr, Inversion, Permutation, Symmetry};
pub use word::{apply_word, count_reduced_words, enumerate, enumerate_capped, is_reduced, ReducedWord};
