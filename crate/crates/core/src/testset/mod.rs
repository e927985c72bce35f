//! Test sets: finite sets of inputs on which agreement of two printers
//! implies agreement everywhere.
//!
//! For words of a context-free grammar the construction linearises the
//! grammar and stitches optimal paths of its graph around at most three free
//! edges. For trees it runs the word construction on the grammar of the
//! default encodings and decodes the result.

mod cfg;
mod graph;
mod trees;

pub use cfg::{linearize, Cfg, GSym, NtId, Rule};
pub use graph::{optimal_paths, phi3, Edge, GrammarGraph, PathTable, Vertex};
pub use trees::{encoded, linear_string_test_set, tree_test_set};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TestSetError {
    #[error("nonterminal or state `{0}` is unproductive")]
    Unproductive(String),
    #[error("tree test sets need every state to be initial")]
    NotAllInitial,
    #[error("test-set word does not decode: {0}")]
    Decode(String),
    #[error("the alphabet has no string-leaf symbol")]
    NoStringLeaf,
    #[error("argument {index} of `{symbol}` admits no tree with a string leaf")]
    NoLeafBelow { symbol: String, index: usize },
}
