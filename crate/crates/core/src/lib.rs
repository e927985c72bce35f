//! Learning recursive tree-to-string printers from examples.
//!
//! The printers are single-state sequential top-down tree-to-string
//! transducers: every constructor `f` of arity `k` prints as
//! `u0 · print(t1) · u1 ⋯ print(tk) · uk` for constant words `u0..uk`.
//!
//! The crate is organised bottom-up:
//!
//! - [`adt`]: ranked alphabets, trees, domains and the declaration parser.
//! - [`morphism`]: transducers, their morphism view and the default encoding.
//! - [`equations`]: sequential word equations and their layered automata.
//! - [`testset`]: grammars, cubic test sets and tree test sets.
//! - [`synthesis`]: learning from samples, from oracles, and interactively.

pub mod adt;
pub mod equations;
pub mod morphism;
pub mod synthesis;
pub mod testset;

pub use adt::{Domain, RankedAlphabet, RankedSymbol, StateId, SymbolId, Tree};
pub use morphism::{AnnotatedLetter, Morphism, OneSts};
