//! Transducers as morphisms on annotated letters.
//!
//! The default encoding maps a tree `f(t1,..,tk)` to
//! `(f,0)·enc(t1)·(f,1)⋯enc(tk)·(f,k)`. A transducer is then the same as a
//! morphism from annotated letters to output words, applied to the encoding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::adt::{Domain, RankedAlphabet, StateId, SymbolId, Tree};
use crate::testset::{Cfg, GSym, NtId};

/// The `index`-th constant slot of `symbol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnotatedLetter {
    pub symbol: SymbolId,
    pub index: u32,
}

impl AnnotatedLetter {
    pub fn new(symbol: SymbolId, index: usize) -> Self {
        AnnotatedLetter {
            symbol,
            index: index as u32,
        }
    }

    pub fn display<'a>(&self, alphabet: &'a RankedAlphabet) -> impl fmt::Display + 'a {
        let name = alphabet
            .try_get(self.symbol)
            .map(|s| s.name.clone())
            .unwrap_or_else(|| format!("#{}", self.symbol.0));
        let index = self.index;
        DisplayFn(move |f: &mut fmt::Formatter<'_>| write!(f, "({name},{index})"))
    }
}

struct DisplayFn<F>(F);

impl<F: Fn(&mut fmt::Formatter<'_>) -> fmt::Result> fmt::Display for DisplayFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        (self.0)(f)
    }
}

/// Renders an encoded word as `(f,0)(g,0)(f,1)`.
pub fn display_word(alphabet: &RankedAlphabet, word: &[AnnotatedLetter]) -> String {
    word.iter()
        .map(|l| l.display(alphabet).to_string())
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("symbol id {0} is not in the transducer's alphabet")]
    UnknownSymbol(u32),
    #[error("symbol `{symbol}` has {found} constants, expected {expected}")]
    ConstantCount {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("morphism is undefined on ({symbol},{index})")]
    Partial { symbol: String, index: usize },
    #[error("cannot decode word at position {position}: {reason}")]
    Decode { position: usize, reason: String },
}

/// Default encoding of a tree. String leaves encode as their symbol alone.
pub fn encode(t: &Tree) -> Vec<AnnotatedLetter> {
    let mut out = Vec::with_capacity(2 * t.size());
    encode_into(t, &mut out);
    out
}

fn encode_into(t: &Tree, out: &mut Vec<AnnotatedLetter>) {
    out.push(AnnotatedLetter::new(t.symbol(), 0));
    for (i, c) in t.children().iter().enumerate() {
        encode_into(c, out);
        out.push(AnnotatedLetter::new(t.symbol(), i + 1));
    }
}

/// Inverse of [`encode`]: the unique tree whose encoding is `w`.
///
/// Runs in linear time with an explicit stack. Errors name the offending
/// position (the length of `w` when the word ends too early).
pub fn decode(alphabet: &RankedAlphabet, w: &[AnnotatedLetter]) -> Result<Tree, MorphismError> {
    let fail = |position: usize, reason: String| MorphismError::Decode { position, reason };
    // frames: (symbol, arity, children so far)
    let mut stack: Vec<(SymbolId, usize, Vec<Tree>)> = Vec::new();
    let mut pos = 0;
    let mut expect_open = true;
    let mut done: Option<Tree> = None;
    while pos < w.len() {
        let l = w[pos];
        if done.is_some() {
            return Err(fail(pos, "trailing letters after a complete tree".into()));
        }
        let sym = alphabet
            .try_get(l.symbol)
            .ok_or_else(|| fail(pos, format!("unknown symbol id {}", l.symbol.0)))?;
        if expect_open {
            if l.index != 0 {
                return Err(fail(
                    pos,
                    format!("expected an opening letter, found ({},{})", sym.name, l.index),
                ));
            }
            if sym.arity == 0 {
                let leaf = if sym.string_leaf {
                    Tree::string_value(l.symbol, "")
                } else {
                    Tree::leaf(l.symbol)
                };
                finish(&mut stack, &mut done, leaf, &mut expect_open);
            } else {
                stack.push((l.symbol, sym.arity, Vec::new()));
            }
        } else {
            // a child was just completed; the next letter closes that slot
            let (top, arity, children) = stack
                .last_mut()
                .expect("closing letters only expected inside a frame");
            if l.symbol != *top || l.index as usize != children.len() {
                return Err(fail(
                    pos,
                    format!(
                        "expected ({},{}), found ({},{})",
                        alphabet.get(*top).name,
                        children.len(),
                        sym.name,
                        l.index
                    ),
                ));
            }
            if children.len() == *arity {
                let (s, _, ch) = stack.pop().expect("non-empty");
                finish(&mut stack, &mut done, Tree::node(s, ch), &mut expect_open);
            } else {
                expect_open = true;
            }
        }
        pos += 1;
    }
    done.ok_or_else(|| fail(w.len(), "word ends before the tree is complete".into()))
}

fn finish(
    stack: &mut [(SymbolId, usize, Vec<Tree>)],
    done: &mut Option<Tree>,
    t: Tree,
    expect_open: &mut bool,
) {
    match stack.last_mut() {
        Some((_, _, children)) => {
            children.push(t);
            *expect_open = false;
        }
        None => {
            *done = Some(t);
            *expect_open = false;
        }
    }
}

/// A single-state sequential tree-to-string transducer: `k + 1` constants per
/// symbol of arity `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneSts {
    alphabet: Arc<RankedAlphabet>,
    table: Vec<Vec<String>>,
}

impl OneSts {
    pub fn new(alphabet: Arc<RankedAlphabet>, table: Vec<Vec<String>>) -> Result<Self, MorphismError> {
        if table.len() != alphabet.len() {
            return Err(MorphismError::UnknownSymbol(
                table.len().min(alphabet.len()) as u32
            ));
        }
        for (id, sym) in alphabet.iter() {
            let found = table[id.index()].len();
            if found != sym.arity + 1 {
                return Err(MorphismError::ConstantCount {
                    symbol: sym.name.clone(),
                    expected: sym.arity + 1,
                    found,
                });
            }
        }
        Ok(OneSts { alphabet, table })
    }

    /// The transducer printing nothing, except fixed outputs of stand-ins.
    pub fn empty(alphabet: Arc<RankedAlphabet>) -> Self {
        let table = alphabet
            .iter()
            .map(|(_, s)| {
                let mut row = vec![String::new(); s.arity + 1];
                if let Some(out) = &s.fixed_output {
                    row[0] = out.clone();
                }
                row
            })
            .collect();
        OneSts { alphabet, table }
    }

    /// Builds a transducer from `(name, constants)` rows; missing symbols
    /// print nothing (or their fixed output).
    pub fn from_rows<'a>(
        alphabet: Arc<RankedAlphabet>,
        rows: impl IntoIterator<Item = (&'a str, Vec<&'a str>)>,
    ) -> Result<Self, MorphismError> {
        let mut sts = OneSts::empty(Arc::clone(&alphabet));
        for (name, consts) in rows {
            let id = alphabet.lookup(name).ok_or(MorphismError::Partial {
                symbol: name.to_string(),
                index: 0,
            })?;
            sts.set(id, consts.into_iter().map(String::from).collect())?;
        }
        Ok(sts)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn alphabet_arc(&self) -> Arc<RankedAlphabet> {
        Arc::clone(&self.alphabet)
    }

    pub fn constants(&self, f: SymbolId) -> &[String] {
        &self.table[f.index()]
    }

    pub fn set(&mut self, f: SymbolId, constants: Vec<String>) -> Result<(), MorphismError> {
        let sym = self
            .alphabet
            .try_get(f)
            .ok_or(MorphismError::UnknownSymbol(f.0))?;
        if constants.len() != sym.arity + 1 {
            return Err(MorphismError::ConstantCount {
                symbol: sym.name.clone(),
                expected: sym.arity + 1,
                found: constants.len(),
            });
        }
        self.table[f.index()] = constants;
        Ok(())
    }

    /// `⟦τ⟧(t)`. String leaves print their raw value.
    pub fn apply(&self, t: &Tree) -> Result<String, MorphismError> {
        let mut out = String::new();
        self.apply_into(t, &mut out)?;
        Ok(out)
    }

    fn apply_into(&self, t: &Tree, out: &mut String) -> Result<(), MorphismError> {
        let row = self
            .table
            .get(t.symbol().index())
            .ok_or(MorphismError::UnknownSymbol(t.symbol().0))?;
        if let Some(v) = t.value() {
            out.push_str(v);
            return Ok(());
        }
        if row.len() != t.children().len() + 1 {
            return Err(MorphismError::ConstantCount {
                symbol: self.alphabet.get(t.symbol()).name.clone(),
                expected: row.len(),
                found: t.children().len() + 1,
            });
        }
        out.push_str(&row[0]);
        for (c, u) in t.children().iter().zip(&row[1..]) {
            self.apply_into(c, out)?;
            out.push_str(u);
        }
        Ok(())
    }
}

/// A morphism from annotated letters to output words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Morphism {
    pub map: BTreeMap<AnnotatedLetter, String>,
}

impl Morphism {
    pub fn get(&self, l: AnnotatedLetter) -> Option<&str> {
        self.map.get(&l).map(String::as_str)
    }

    /// Letterwise image of a word. Letters outside the domain map to `None`.
    pub fn apply_word(&self, w: &[AnnotatedLetter]) -> Option<String> {
        let mut out = String::new();
        for l in w {
            out.push_str(self.map.get(l)?);
        }
        Some(out)
    }
}

pub fn morph_of(tau: &OneSts) -> Morphism {
    let mut map = BTreeMap::new();
    for (id, _) in tau.alphabet.iter() {
        for (i, u) in tau.constants(id).iter().enumerate() {
            map.insert(AnnotatedLetter::new(id, i), u.clone());
        }
    }
    Morphism { map }
}

/// The transducer of a morphism; fails unless the morphism is total on the
/// annotated letters of `alphabet`.
pub fn sts_of(alphabet: Arc<RankedAlphabet>, mu: &Morphism) -> Result<OneSts, MorphismError> {
    let mut table = Vec::with_capacity(alphabet.len());
    for (id, sym) in alphabet.iter() {
        let mut row = Vec::with_capacity(sym.arity + 1);
        for i in 0..=sym.arity {
            let u = mu
                .get(AnnotatedLetter::new(id, i))
                .ok_or_else(|| MorphismError::Partial {
                    symbol: sym.name.clone(),
                    index: i,
                })?;
            row.push(u.to_string());
        }
        table.push(row);
    }
    OneSts::new(alphabet, table)
}

/// The grammar of the encodings of a domain: one nonterminal `A_q` per useful
/// state plus a start symbol `S` with a unit rule to every initial `A_q`.
///
/// Rule order: the start rules in state order, then one body rule per
/// transition in declaration order. States that are unproductive or not
/// reachable from an initial state are dropped first.
pub fn domain_to_grammar(d: &Domain) -> Cfg<AnnotatedLetter> {
    let productive: Vec<bool> = d.minimal_sizes().iter().map(Option::is_some).collect();
    let usable = |t: &crate::adt::Transition| {
        productive[t.state.index()] && t.children.iter().all(|c| productive[c.index()])
    };
    let mut reachable = vec![false; d.state_count()];
    let mut stack: Vec<StateId> = d
        .initial_states()
        .filter(|q| productive[q.index()])
        .collect();
    for q in &stack {
        reachable[q.index()] = true;
    }
    while let Some(q) = stack.pop() {
        for t in d.transitions().iter().filter(|t| t.state == q && usable(t)) {
            for c in &t.children {
                if !reachable[c.index()] {
                    reachable[c.index()] = true;
                    stack.push(*c);
                }
            }
        }
    }

    let mut names = vec!["S".to_string()];
    let mut nt_of: Vec<Option<NtId>> = vec![None; d.state_count()];
    for q in d.state_ids().filter(|q| reachable[q.index()]) {
        nt_of[q.index()] = Some(NtId(names.len() as u32));
        names.push(format!("A_{}", d.state_name(q)));
    }
    let mut g = Cfg::new(names, NtId(0));
    for q in d.state_ids() {
        if let (Some(a), true) = (nt_of[q.index()], d.is_initial(q)) {
            g.add_rule(NtId(0), vec![GSym::N(a)]);
        }
    }
    for t in d.transitions() {
        let Some(lhs) = nt_of[t.state.index()] else {
            continue;
        };
        if !usable(t) {
            continue;
        }
        let mut rhs = vec![GSym::T(AnnotatedLetter::new(t.symbol, 0))];
        for (i, c) in t.children.iter().enumerate() {
            rhs.push(GSym::N(nt_of[c.index()].expect("children of reachable states are reachable")));
            rhs.push(GSym::T(AnnotatedLetter::new(t.symbol, i + 1)));
        }
        g.add_rule(lhs, rhs);
    }
    g
}
