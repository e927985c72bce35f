//! Ranked alphabets, trees and domains (top-down tree automata).
//!
//! Symbols are identified by their index in a [`RankedAlphabet`]; the index
//! order is the declaration order and is used for every deterministic
//! tie-break in the crate.

mod benchmarks;
mod parse;

pub use benchmarks::{binary_source, grammar_source, html_source};
pub use parse::{
    desugar_primitives, domain_of, parse_adt, AdtDeclaration, AdtError, ClassDecl, ClassKind,
    Field, FieldType, Primitive,
};

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Index of a symbol inside its [`RankedAlphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a state inside its [`Domain`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankedSymbol {
    pub name: String,
    pub arity: usize,
    /// Constructor name used when emitting code.
    pub display_name: String,
    /// Output that is known in advance (stand-ins for primitive values).
    pub fixed_output: Option<String>,
    /// The designated string-leaf symbol: arity 0, carries a raw value.
    pub string_leaf: bool,
}

impl RankedSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        let name = name.into();
        RankedSymbol {
            display_name: name.clone(),
            name,
            arity,
            fixed_output: None,
            string_leaf: false,
        }
    }

    pub fn string_leaf(name: impl Into<String>) -> Self {
        RankedSymbol {
            string_leaf: true,
            ..RankedSymbol::new(name, 0)
        }
    }

    pub fn with_fixed_output(mut self, output: impl Into<String>) -> Self {
        self.fixed_output = Some(output.into());
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("string-leaf symbol `{0}` must have arity 0")]
    StringLeafArity(String),
    #[error("unknown symbol id {0}")]
    UnknownSymbol(u32),
    #[error("unknown state id {0}")]
    UnknownState(u32),
    #[error("transition for `{symbol}` has {found} child states, expected {expected}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("unproductive states (no finite tree is accepted): {}", .0.join(", "))]
    Unproductive(Vec<String>),
    #[error("tree has {found} children under `{symbol}`, expected {expected}")]
    TreeArity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("leaf value given for non string-leaf symbol `{0}`, or missing on a string leaf")]
    LeafValue(String),
}

/// A finite ranked alphabet in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedAlphabet {
    symbols: Vec<RankedSymbol>,
    by_name: HashMap<String, SymbolId>,
}

impl RankedAlphabet {
    pub fn new(symbols: Vec<RankedSymbol>) -> Result<Self, DomainError> {
        let mut by_name = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.string_leaf && s.arity != 0 {
                return Err(DomainError::StringLeafArity(s.name.clone()));
            }
            if by_name.insert(s.name.clone(), SymbolId(i as u32)).is_some() {
                return Err(DomainError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(RankedAlphabet { symbols, by_name })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, id: SymbolId) -> &RankedSymbol {
        &self.symbols[id.index()]
    }

    pub fn try_get(&self, id: SymbolId) -> Option<&RankedSymbol> {
        self.symbols.get(id.index())
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn arity(&self, id: SymbolId) -> usize {
        self.get(id).arity
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> + '_ {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &RankedSymbol)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn string_leaf(&self) -> Option<SymbolId> {
        self.iter().find(|(_, s)| s.string_leaf).map(|(id, _)| id)
    }
}

/// A tree over a ranked alphabet.
///
/// Trees are ordered by size first, then by root symbol declaration order,
/// then children left to right, then leaf value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    symbol: SymbolId,
    children: Vec<Tree>,
    value: Option<String>,
    size: usize,
}

impl Tree {
    /// Builds a node without checking it against an alphabet.
    pub fn node(symbol: SymbolId, children: Vec<Tree>) -> Tree {
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        Tree {
            symbol,
            children,
            value: None,
            size,
        }
    }

    pub fn leaf(symbol: SymbolId) -> Tree {
        Tree::node(symbol, Vec::new())
    }

    pub fn string_value(symbol: SymbolId, value: impl Into<String>) -> Tree {
        Tree {
            symbol,
            children: Vec::new(),
            value: Some(value.into()),
            size: 1,
        }
    }

    /// Builds a node checked against `alphabet`.
    pub fn build(
        alphabet: &RankedAlphabet,
        symbol: SymbolId,
        children: Vec<Tree>,
    ) -> Result<Tree, DomainError> {
        let sym = alphabet
            .try_get(symbol)
            .ok_or(DomainError::UnknownSymbol(symbol.0))?;
        if sym.string_leaf {
            return Err(DomainError::LeafValue(sym.name.clone()));
        }
        if sym.arity != children.len() {
            return Err(DomainError::TreeArity {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: children.len(),
            });
        }
        Ok(Tree::node(symbol, children))
    }

    pub fn symbol(&self) -> SymbolId {
        self.symbol
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn value(&self) -> Option<&str> {
        self.value.as_deref()
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Tree::depth).max().unwrap_or(0)
    }

    /// Pre-order iterator over all subtrees, the tree itself first.
    pub fn subtrees(&self) -> Vec<&Tree> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend(t.children.iter().rev());
        }
        out
    }

    /// Compact constructor syntax, e.g. `cons(node(div,nil),nil)`.
    pub fn display<'a>(&'a self, alphabet: &'a RankedAlphabet) -> TreeDisplay<'a> {
        TreeDisplay {
            tree: self,
            alphabet,
            scala: false,
        }
    }

    /// Constructor syntax with explicit `()` on nullary constructors,
    /// e.g. `cons(node(div(),nil()),nil())`.
    pub fn display_scala<'a>(&'a self, alphabet: &'a RankedAlphabet) -> TreeDisplay<'a> {
        TreeDisplay {
            tree: self,
            alphabet,
            scala: true,
        }
    }

    /// Checks that every node respects the alphabet.
    pub fn validate(&self, alphabet: &RankedAlphabet) -> Result<(), DomainError> {
        for t in self.subtrees() {
            let sym = alphabet
                .try_get(t.symbol)
                .ok_or(DomainError::UnknownSymbol(t.symbol.0))?;
            if sym.arity != t.children.len() {
                return Err(DomainError::TreeArity {
                    symbol: sym.name.clone(),
                    expected: sym.arity,
                    found: t.children.len(),
                });
            }
            if sym.string_leaf != t.value.is_some() {
                return Err(DomainError::LeafValue(sym.name.clone()));
            }
        }
        Ok(())
    }

    /// Replaces the leaf values of the string leaves, in pre-order, using `f`
    /// applied to the leaf's pre-order index among string leaves.
    pub(crate) fn map_values(&self, counter: &mut usize, f: &dyn Fn(usize) -> String) -> Tree {
        if self.value.is_some() {
            let i = *counter;
            *counter += 1;
            return Tree::string_value(self.symbol, f(i));
        }
        let children = self
            .children
            .iter()
            .map(|c| c.map_values(counter, f))
            .collect();
        Tree::node(self.symbol, children)
    }

    pub(crate) fn count_values(&self) -> usize {
        self.subtrees().iter().filter(|t| t.value.is_some()).count()
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then(self.symbol.cmp(&other.symbol))
            .then_with(|| self.children.cmp(&other.children))
            .then_with(|| self.value.cmp(&other.value))
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct TreeDisplay<'a> {
    tree: &'a Tree,
    alphabet: &'a RankedAlphabet,
    scala: bool,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.tree;
        if let Some(v) = &t.value {
            return write!(f, "{:?}", v);
        }
        let (name, stand_in) = match self.alphabet.try_get(t.symbol) {
            Some(s) => (s.name.as_str(), s.fixed_output.is_some()),
            None => ("?", false),
        };
        f.write_str(name)?;
        if t.children.is_empty() {
            // stand-in values read like literals: `N(1)`, `Name("foo")`
            if self.scala && !stand_in {
                f.write_str("()")?;
            }
            return Ok(());
        }
        f.write_str("(")?;
        for (i, c) in t.children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(
                f,
                "{}",
                TreeDisplay {
                    tree: c,
                    alphabet: self.alphabet,
                    scala: self.scala
                }
            )?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub symbol: SymbolId,
    pub state: StateId,
    pub children: Vec<StateId>,
}

/// A top-down tree automaton `(Σ, Q, I, δ)` describing the trees a printer
/// has to handle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    alphabet: Arc<RankedAlphabet>,
    states: Vec<String>,
    initial: Vec<bool>,
    transitions: Vec<Transition>,
}

impl Domain {
    pub fn new(
        alphabet: Arc<RankedAlphabet>,
        states: Vec<String>,
        initial: Vec<StateId>,
        transitions: Vec<Transition>,
    ) -> Result<Self, DomainError> {
        let mut init = vec![false; states.len()];
        for q in initial {
            *init
                .get_mut(q.index())
                .ok_or(DomainError::UnknownState(q.0))? = true;
        }
        for t in &transitions {
            let sym = alphabet
                .try_get(t.symbol)
                .ok_or(DomainError::UnknownSymbol(t.symbol.0))?;
            if sym.arity != t.children.len() {
                return Err(DomainError::ArityMismatch {
                    symbol: sym.name.clone(),
                    expected: sym.arity,
                    found: t.children.len(),
                });
            }
            for q in std::iter::once(&t.state).chain(&t.children) {
                if q.index() >= states.len() {
                    return Err(DomainError::UnknownState(q.0));
                }
            }
        }
        Ok(Domain {
            alphabet,
            states,
            initial: init,
            transitions,
        })
    }

    /// Same as [`Domain::new`] with every state initial.
    pub fn all_initial(
        alphabet: Arc<RankedAlphabet>,
        states: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self, DomainError> {
        let initial = (0..states.len() as u32).map(StateId).collect();
        Domain::new(alphabet, states, initial, transitions)
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn alphabet_arc(&self) -> Arc<RankedAlphabet> {
        Arc::clone(&self.alphabet)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn lookup_state(&self, name: &str) -> Option<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| StateId(i as u32))
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initial[q.index()]
    }

    pub fn initial_states(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|q| self.is_initial(*q))
    }

    pub fn all_states_initial(&self) -> bool {
        self.initial.iter().all(|b| *b)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// `|D|`: the sum over transitions of `1 + arity`.
    pub fn size(&self) -> usize {
        self.transitions.iter().map(|t| 1 + t.children.len()).sum()
    }

    pub fn accepts_at(&self, tree: &Tree, q: StateId) -> bool {
        if tree.value.is_some() {
            return self
                .transitions
                .iter()
                .any(|t| t.state == q && t.symbol == tree.symbol);
        }
        self.transitions.iter().any(|t| {
            t.state == q
                && t.symbol == tree.symbol
                && t.children.len() == tree.children.len()
                && t
                    .children
                    .iter()
                    .zip(&tree.children)
                    .all(|(cq, ct)| self.accepts_at(ct, *cq))
        })
    }

    /// Membership in `L(D)`: accepted at some initial state.
    pub fn accepts(&self, tree: &Tree) -> bool {
        self.initial_states().any(|q| self.accepts_at(tree, q))
    }

    /// Minimal tree size per state; `None` for unproductive states.
    pub fn minimal_sizes(&self) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.states.len()];
        loop {
            let mut changed = false;
            for t in &self.transitions {
                let mut total = 1usize;
                let mut ok = true;
                for c in &t.children {
                    match best[c.index()] {
                        Some(s) => total += s,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && best[t.state.index()].is_none_or(|b| total < b) {
                    best[t.state.index()] = Some(total);
                    changed = true;
                }
            }
            if !changed {
                return best;
            }
        }
    }

    pub fn unproductive_states(&self) -> Vec<StateId> {
        self.minimal_sizes()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(i, _)| StateId(i as u32))
            .collect()
    }

    pub fn check_productive(&self) -> Result<(), DomainError> {
        let bad = self.unproductive_states();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(DomainError::Unproductive(
                bad.iter().map(|q| self.state_name(*q).to_string()).collect(),
            ))
        }
    }

    /// The transition chosen for each state's minimal tree: the first
    /// transition, in declaration order, that reaches the minimal size.
    fn minimal_choice(&self) -> Vec<Option<usize>> {
        let sizes = self.minimal_sizes();
        let mut choice = vec![None; self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            let q = t.state.index();
            if choice[q].is_some() {
                continue;
            }
            let total: Option<usize> = t
                .children
                .iter()
                .map(|c| sizes[c.index()])
                .sum::<Option<usize>>()
                .map(|s| s + 1);
            if total.is_some() && total == sizes[q] {
                choice[q] = Some(i);
            }
        }
        choice
    }

    /// The minimal tree accepted at `q`: smallest size, ties resolved by
    /// transition declaration order. Subtrees of minimal trees are minimal.
    pub fn minimal_tree(&self, q: StateId) -> Result<Tree, DomainError> {
        let choice = self.minimal_choice();
        self.build_minimal(q, &choice)
            .ok_or_else(|| DomainError::Unproductive(vec![self.state_name(q).to_string()]))
    }

    /// Minimal trees of every state (`None` when unproductive).
    pub fn minimal_trees(&self) -> Vec<Option<Tree>> {
        let choice = self.minimal_choice();
        self.state_ids()
            .map(|q| self.build_minimal(q, &choice))
            .collect()
    }

    fn build_minimal(&self, q: StateId, choice: &[Option<usize>]) -> Option<Tree> {
        let t = &self.transitions[choice[q.index()]?];
        if self.alphabet.get(t.symbol).string_leaf {
            return Some(Tree::string_value(t.symbol, ""));
        }
        let children = t
            .children
            .iter()
            .map(|c| self.build_minimal(*c, choice))
            .collect::<Option<Vec<_>>>()?;
        Some(Tree::node(t.symbol, children))
    }

    /// Minimal height of a tree accepted at each state.
    pub fn minimal_depths(&self) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.states.len()];
        loop {
            let mut changed = false;
            for t in &self.transitions {
                let d = t
                    .children
                    .iter()
                    .map(|c| best[c.index()])
                    .try_fold(0usize, |acc, d| d.map(|d| acc.max(d)));
                if let Some(d) = d {
                    let d = d + 1;
                    if best[t.state.index()].is_none_or(|b| d < b) {
                        best[t.state.index()] = Some(d);
                        changed = true;
                    }
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// Deterministic enumeration of the trees of `L(D)` with depth at most
    /// `max_depth`, ordered by size, then root symbol declaration order, then
    /// children left to right. Returns at most `max_count` trees.
    pub fn enumerate_trees(&self, max_count: usize, max_depth: usize) -> Vec<Tree> {
        let mut out = Vec::new();
        if max_count == 0 || max_depth == 0 {
            return out;
        }
        let arity = self.alphabet.max_arity();
        let max_size = if arity <= 1 {
            max_depth
        } else {
            // (A^d - 1) / (A - 1), saturating
            let mut total = 0usize;
            let mut level = 1usize;
            for _ in 0..max_depth {
                total = total.saturating_add(level);
                level = level.saturating_mul(arity);
            }
            total
        };
        let mut gen = Enumerator {
            domain: self,
            memo: HashMap::new(),
        };
        let mut size = 1;
        while out.len() < max_count && size <= max_size {
            let needed = max_count - out.len();
            let mut layer: Vec<Tree> = Vec::new();
            for t in &self.transitions {
                if !self.is_initial(t.state) {
                    continue;
                }
                gen.trees_of_transition(t, size, max_depth, needed, &mut layer);
            }
            layer.sort();
            layer.dedup();
            layer.truncate(needed);
            out.extend(layer);
            size += 1;
        }
        out
    }
}

struct Enumerator<'a> {
    domain: &'a Domain,
    memo: HashMap<(StateId, usize, usize), Vec<Tree>>,
}

impl Enumerator<'_> {
    /// All trees accepted at `q` with exactly `size` nodes and depth ≤ `depth`,
    /// sorted and deduplicated.
    fn trees_at(&mut self, q: StateId, size: usize, depth: usize) -> Vec<Tree> {
        if size == 0 || depth == 0 {
            return Vec::new();
        }
        if let Some(v) = self.memo.get(&(q, size, depth)) {
            return v.clone();
        }
        let mut all = Vec::new();
        let domain = self.domain;
        for t in domain.transitions.iter().filter(|t| t.state == q) {
            self.trees_of_transition(t, size, depth, usize::MAX, &mut all);
        }
        all.sort();
        all.dedup();
        self.memo.insert((q, size, depth), all.clone());
        all
    }

    /// Appends up to `limit` trees built from `t`, in ascending order.
    fn trees_of_transition(
        &mut self,
        t: &Transition,
        size: usize,
        depth: usize,
        limit: usize,
        out: &mut Vec<Tree>,
    ) {
        let sym = self.domain.alphabet.get(t.symbol);
        let k = t.children.len();
        if k == 0 {
            if size == 1 && depth >= 1 {
                let tree = if sym.string_leaf {
                    Tree::string_value(t.symbol, "")
                } else {
                    Tree::leaf(t.symbol)
                };
                out.push(tree);
            }
            return;
        }
        if size < 1 + k || depth < 2 {
            return;
        }
        let mut produced = 0usize;
        for parts in compositions(size - 1, k) {
            let lists: Vec<Vec<Tree>> = t
                .children
                .iter()
                .zip(&parts)
                .map(|(q, s)| self.trees_at(*q, *s, depth - 1))
                .collect();
            if lists.iter().any(|l| l.is_empty()) {
                continue;
            }
            let mut idx = vec![0usize; k];
            loop {
                let children = idx.iter().zip(&lists).map(|(i, l)| l[*i].clone()).collect();
                out.push(Tree::node(t.symbol, children));
                produced += 1;
                if produced >= limit {
                    return;
                }
                // odometer, last position fastest
                let mut pos = k;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < lists[pos].len() {
                        break;
                    }
                    idx[pos] = 0;
                    if pos == 0 {
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos == usize::MAX {
                    break;
                }
            }
        }
    }
}

/// Compositions of `n` into `k` positive parts, first part ascending.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            if n >= 1 {
                prefix.push(n);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for first in 1..=n.saturating_sub(k - 1) {
            prefix.push(first);
            go(n - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        go(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// The cubic lower-bound family: `A_j(B_j(F_j))` lists of depth 1 to 3 with
/// `n` symbols per level, states `q2, q1, q0`, all initial.
pub fn gen_lower_bound_domain(n: usize) -> Domain {
    assert!(n >= 1, "lower-bound family needs n ≥ 1");
    let mut symbols = Vec::with_capacity(3 * n);
    for j in 1..=n {
        symbols.push(RankedSymbol::new(format!("A{j}"), 1));
    }
    for j in 1..=n {
        symbols.push(RankedSymbol::new(format!("B{j}"), 1));
    }
    for j in 1..=n {
        symbols.push(RankedSymbol::new(format!("F{j}"), 0));
    }
    let alphabet = Arc::new(RankedAlphabet::new(symbols).expect("distinct names"));
    let (q2, q1, q0) = (StateId(0), StateId(1), StateId(2));
    let mut transitions = Vec::with_capacity(3 * n);
    for j in 0..n {
        transitions.push(Transition {
            symbol: SymbolId(j as u32),
            state: q2,
            children: vec![q1],
        });
    }
    for j in 0..n {
        transitions.push(Transition {
            symbol: SymbolId((n + j) as u32),
            state: q1,
            children: vec![q0],
        });
    }
    for j in 0..n {
        transitions.push(Transition {
            symbol: SymbolId((2 * n + j) as u32),
            state: q0,
            children: vec![],
        });
    }
    Domain::all_initial(
        alphabet,
        vec!["q2".into(), "q1".into(), "q0".into()],
        transitions,
    )
    .expect("well-formed by construction")
}

/// Parses compact constructor syntax (`cons(node(div,nil),nil)`) against an
/// alphabet. String leaves are written as quoted literals.
pub fn parse_tree(alphabet: &RankedAlphabet, text: &str) -> Result<Tree, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let t = parse_tree_at(alphabet, &chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(format!("trailing input at offset {pos}"));
    }
    Ok(t)
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while *pos < chars.len() && chars[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_tree_at(alphabet: &RankedAlphabet, chars: &[char], pos: &mut usize) -> Result<Tree, String> {
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&'"') {
        // a quoted stand-in name such as "foo", or a raw string-leaf value
        let start = *pos;
        *pos += 1;
        let mut value = String::new();
        while let Some(&c) = chars.get(*pos) {
            *pos += 1;
            match c {
                '"' => break,
                '\\' => {
                    let e = chars.get(*pos).copied().ok_or("unterminated escape")?;
                    *pos += 1;
                    value.push(match e {
                        'n' => '\n',
                        't' => '\t',
                        other => other,
                    });
                }
                c => value.push(c),
            }
        }
        let quoted: String = chars[start..*pos].iter().collect();
        if let Some(id) = alphabet.lookup(&quoted) {
            return Ok(Tree::leaf(id));
        }
        let leaf = alphabet
            .string_leaf()
            .ok_or_else(|| format!("string literal at offset {start} but no string-leaf symbol"))?;
        return Ok(Tree::string_value(leaf, value));
    }
    let start = *pos;
    while *pos < chars.len() && !matches!(chars[*pos], '(' | ')' | ',') && !chars[*pos].is_whitespace()
    {
        *pos += 1;
    }
    let name: String = chars[start..*pos].iter().collect();
    if name.is_empty() {
        return Err(format!("expected constructor at offset {start}"));
    }
    let id = alphabet
        .lookup(&name)
        .ok_or_else(|| format!("unknown constructor `{name}`"))?;
    let arity = alphabet.arity(id);
    skip_ws(chars, pos);
    let mut children = Vec::new();
    if chars.get(*pos) == Some(&'(') {
        *pos += 1;
        skip_ws(chars, pos);
        if chars.get(*pos) == Some(&')') {
            *pos += 1;
        } else {
            loop {
                children.push(parse_tree_at(alphabet, chars, pos)?);
                skip_ws(chars, pos);
                match chars.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(format!("expected `,` or `)` at offset {}", *pos)),
                }
            }
        }
    }
    if children.len() != arity {
        return Err(format!(
            "`{name}` expects {arity} arguments, found {}",
            children.len()
        ));
    }
    Ok(Tree::node(id, children))
}

/// Trees of `set` whose direct subtrees are missing from `set`.
pub fn closure_violations<'a>(set: &'a [Tree]) -> Vec<(&'a Tree, &'a Tree)> {
    let members: HashSet<&Tree> = set.iter().collect();
    let mut bad = Vec::new();
    for t in set {
        for c in &t.children {
            if !members.contains(c) {
                bad.push((t, c));
            }
        }
    }
    bad
}
