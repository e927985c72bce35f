//! Learning printers from examples.
//!
//! [`learn_from_sample`] solves the regular equations of a sample closed
//! under subtrees. [`InferenceState`] drives the interactive loop: it walks a
//! tree test set, keeps one solution automaton per symbol, infers outputs
//! that are already determined and offers hints or a short list of
//! candidates for the rest.

mod emit;
mod inference;
mod sample;

pub use emit::{emit_code, make_hint, EmitOptions, FieldNames};
pub use inference::{
    interactive_learn, learn_from_domain, AnswerOutcome, Event, InferenceConfig, InferenceState,
    Learned, MapOracle, Oracle, Question, QuestionKind, Stats, TransducerOracle,
};
pub use sample::{conflicting_examples, learn_from_sample, make_equation, make_reg_equation, Sample};

use thiserror::Error;

use crate::equations::EquationError;
use crate::morphism::MorphismError;
use crate::testset::TestSetError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("sample is not closed under subtrees: `{tree}` needs `{missing}`")]
    NotClosed { tree: String, missing: String },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    TestSet(#[from] TestSetError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error("no printer produces these outputs: {}", .examples.iter().map(|(t, w)| format!("{t} -> {w:?}")).collect::<Vec<_>>().join(", "))]
    Inconsistent { examples: Vec<(String, String)> },
    #[error("answer rejected: {0}")]
    Rejected(String),
    #[error("no question is pending")]
    NoQuestion,
    #[error("questions remain unanswered")]
    Unfinished,
    #[error("oracle failed: {0}")]
    Oracle(String),
}
