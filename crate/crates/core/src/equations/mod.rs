//! Sequential word equations and their solution automata.
//!
//! An equation `u0 X0 u1 X1 ⋯ Xk u(k+1) = w` has constant words `ui`, a
//! constant right-hand side `w` and distinct variables. Its solutions are
//! encoded as words `μ(X0) SEP μ(X1) ⋯ SEP μ(Xk)` recognised by a layered
//! acyclic DFA ([`SolutionAutomaton`]).

mod automaton;
mod brute;
mod nfa;
mod solve;

pub use automaton::{intersection_count, SolutionAutomaton};
pub use brute::brute_force_solve;
pub use nfa::Nfa;
pub use solve::{solve, Assignment};

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Letters of solution automata: the separator sorts before every character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    Sep,
    Char(char),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Sep => f.write_str("#"),
            Letter::Char(c) => write!(f, "{c}"),
        }
    }
}

/// Renders a solution word with `·` separating variable values.
pub fn display_letters(word: &[Letter]) -> String {
    word.iter()
        .map(|l| match l {
            Letter::Sep => "·".to_string(),
            Letter::Char(c) => c.to_string(),
        })
        .collect()
}

/// Splits a solution word at its separators.
pub fn split_at_sep(word: &[Letter]) -> Vec<String> {
    let mut out = vec![String::new()];
    for l in word {
        match l {
            Letter::Sep => out.push(String::new()),
            Letter::Char(c) => out.last_mut().expect("non-empty").push(*c),
        }
    }
    out
}

/// Joins variable values with separators.
pub fn join_with_sep<S: AsRef<str>>(values: &[S]) -> Vec<Letter> {
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(Letter::Sep);
        }
        out.extend(v.as_ref().chars().map(Letter::Char));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term<V> {
    Var(V),
    Text(String),
}

/// `lhs = rhs` where `rhs` is constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WordEquation<V> {
    pub lhs: Vec<Term<V>>,
    pub rhs: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("variable `{0}` occurs more than once in one equation")]
    RepeatedVariable(String),
    #[error("equations share variable `{0}` but have different variable sequences")]
    OverlappingSequences(String),
    #[error("automata have {left} and {right} variables")]
    MismatchedVariables { left: usize, right: usize },
    #[error("equation has no variable")]
    NoVariable,
    #[error("brute-force search space of {0} candidates exceeds the limit")]
    SearchSpace(u128),
}

impl<V: Clone + Eq + Hash + fmt::Debug> WordEquation<V> {
    pub fn new(lhs: Vec<Term<V>>, rhs: impl Into<String>) -> Self {
        WordEquation {
            lhs,
            rhs: rhs.into(),
        }
    }

    /// Variables in left-to-right order (with repetitions).
    pub fn variables(&self) -> Vec<V> {
        self.lhs
            .iter()
            .filter_map(|t| match t {
                Term::Var(v) => Some(v.clone()),
                Term::Text(_) => None,
            })
            .collect()
    }

    pub fn check_sequential(&self) -> Result<(), EquationError> {
        let mut seen = HashSet::new();
        for v in self.variables() {
            if !seen.insert(v.clone()) {
                return Err(EquationError::RepeatedVariable(format!("{v:?}")));
            }
        }
        Ok(())
    }

    /// Constants around the variables: `u0, u1, ..., u(k+1)` for `k+1`
    /// variables (adjacent texts merged, missing ones empty).
    pub fn constants(&self) -> Vec<String> {
        let mut out = vec![String::new()];
        for t in &self.lhs {
            match t {
                Term::Text(s) => out.last_mut().expect("non-empty").push_str(s),
                Term::Var(_) => out.push(String::new()),
            }
        }
        out
    }

    /// Whether substituting `value` for every variable gives `rhs`.
    pub fn satisfied_by(&self, value: impl Fn(&V) -> Option<String>) -> bool {
        let mut s = String::new();
        for t in &self.lhs {
            match t {
                Term::Text(x) => s.push_str(x),
                Term::Var(v) => match value(v) {
                    Some(x) => s.push_str(&x),
                    None => return false,
                },
            }
        }
        s == self.rhs
    }
}
