use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use indexmap::IndexMap;

use super::SynthesisError;
use crate::adt::{RankedAlphabet, SymbolId, Tree};
use crate::equations::{solve, Term, WordEquation};
use crate::morphism::{encode, AnnotatedLetter, OneSts};

/// Input/output examples in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sample {
    entries: IndexMap<Tree, String>,
}

impl Sample {
    pub fn new() -> Self {
        Sample::default()
    }

    /// Records `t ↦ w`, replacing any previous output for `t`.
    pub fn insert(&mut self, t: Tree, w: impl Into<String>) {
        self.entries.insert(t, w.into());
    }

    pub fn get<'a>(&'a self, t: &'a Tree) -> Option<&'a str> {
        if let Some(v) = t.value() {
            // string leaves always print their value
            return Some(v);
        }
        self.entries.get(t).map(String::as_str)
    }

    pub fn contains(&self, t: &Tree) -> bool {
        self.get(t).is_some()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, &str)> {
        self.entries.iter().map(|(t, w)| (t, w.as_str()))
    }

    /// The first direct subtree missing from the sample, with its parent.
    pub fn closure_violation(&self) -> Option<(&Tree, &Tree)> {
        self.entries.keys().find_map(|t| {
            t.children()
                .iter()
                .find(|c| !self.contains(c))
                .map(|c| (t, c))
        })
    }

    pub fn check_closed(&self, alphabet: &RankedAlphabet) -> Result<(), SynthesisError> {
        match self.closure_violation() {
            None => Ok(()),
            Some((t, c)) => Err(SynthesisError::NotClosed {
                tree: t.display(alphabet).to_string(),
                missing: c.display(alphabet).to_string(),
            }),
        }
    }
}

impl FromIterator<(Tree, String)> for Sample {
    fn from_iter<I: IntoIterator<Item = (Tree, String)>>(iter: I) -> Self {
        Sample {
            entries: iter.into_iter().collect(),
        }
    }
}

/// `τΣ(t) = w` with every annotated letter as a variable. Letters may repeat,
/// so this is in general not a sequential equation.
pub fn make_equation(t: &Tree, w: &str) -> WordEquation<AnnotatedLetter> {
    WordEquation::new(encode(t).into_iter().map(Term::Var).collect(), w)
}

/// `(f,0) S(t1) (f,1) ⋯ S(tk) (f,k) = w` for `t = f(t1,..,tk)`, with the
/// recorded outputs of the children inlined as constants.
pub fn make_reg_equation(
    t: &Tree,
    w: &str,
    sample: &Sample,
    alphabet: &RankedAlphabet,
) -> Result<WordEquation<AnnotatedLetter>, SynthesisError> {
    let f = t.symbol();
    let mut lhs = vec![Term::Var(AnnotatedLetter::new(f, 0))];
    for (i, c) in t.children().iter().enumerate() {
        let out = sample.get(c).ok_or_else(|| SynthesisError::NotClosed {
            tree: t.display(alphabet).to_string(),
            missing: c.display(alphabet).to_string(),
        })?;
        if !out.is_empty() {
            lhs.push(Term::Text(out.to_string()));
        }
        lhs.push(Term::Var(AnnotatedLetter::new(f, i + 1)));
    }
    Ok(WordEquation::new(lhs, w))
}

/// Finds a transducer consistent with a sample closed under subtrees, or
/// `None` when no transducer is.
///
/// Symbols absent from the sample print their fixed output if they have one
/// and nothing otherwise. The result reproduces every example (asserted).
pub fn learn_from_sample(
    alphabet: &Arc<RankedAlphabet>,
    sample: &Sample,
) -> Result<Option<OneSts>, SynthesisError> {
    sample.check_closed(alphabet)?;
    let mut formula = Vec::with_capacity(sample.len());
    for (t, w) in sample.iter() {
        if t.value().is_some() {
            continue;
        }
        formula.push(make_reg_equation(t, w, sample, alphabet)?);
    }
    let Some(assignment) = solve(&formula)? else {
        return Ok(None);
    };
    let mut sts = OneSts::empty(Arc::clone(alphabet));
    let mut rows: BTreeMap<SymbolId, Vec<String>> = BTreeMap::new();
    for (l, u) in assignment {
        let row = rows
            .entry(l.symbol)
            .or_insert_with(|| vec![String::new(); alphabet.arity(l.symbol) + 1]);
        row[l.index as usize] = u;
    }
    for (f, row) in rows {
        sts.set(f, row)?;
    }
    for (t, w) in sample.iter() {
        assert_eq!(
            sts.apply(t)?,
            w,
            "learned transducer disagrees with the sample on {}",
            t.display(alphabet)
        );
    }
    Ok(Some(sts))
}

/// The examples rooted at the first symbol whose equations have no common
/// solution. Equations of different root symbols share no variables, so such
/// a group alone explains why the sample is inconsistent.
pub fn conflicting_examples(
    alphabet: &RankedAlphabet,
    sample: &Sample,
) -> Result<Vec<(Tree, String)>, SynthesisError> {
    let mut roots: Vec<SymbolId> = Vec::new();
    let mut seen = HashSet::new();
    for (t, _) in sample.iter() {
        if t.value().is_none() && seen.insert(t.symbol()) {
            roots.push(t.symbol());
        }
    }
    for f in roots {
        let group: Vec<(Tree, String)> = sample
            .iter()
            .filter(|(t, _)| t.symbol() == f && t.value().is_none())
            .map(|(t, w)| (t.clone(), w.to_string()))
            .collect();
        let formula = group
            .iter()
            .map(|(t, w)| make_reg_equation(t, w, sample, alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        if solve(&formula)?.is_none() {
            return Ok(group);
        }
    }
    Ok(Vec::new())
}
