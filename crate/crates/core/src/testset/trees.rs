use std::collections::HashSet;

use super::{linearize, phi3, TestSetError};
use crate::adt::{closure_violations, Domain, StateId, Transition, Tree};
use crate::morphism::{decode, domain_to_grammar, encode};

/// A tree test set of `d`: two transducers that agree on every returned tree
/// agree on the whole domain.
///
/// The set is the decoding of the cubic test set of the linearised encoding
/// grammar, together with the minimal tree of every state. It is sorted by
/// the tree order, contained in the domain and closed under subtrees (both
/// asserted). Requires every state to be initial and productive.
pub fn tree_test_set(d: &Domain) -> Result<Vec<Tree>, TestSetError> {
    if !d.all_states_initial() {
        return Err(TestSetError::NotAllInitial);
    }
    if let Some(q) = d.unproductive_states().first() {
        return Err(TestSetError::Unproductive(d.state_name(*q).to_string()));
    }
    let g = domain_to_grammar(d);
    let (lin, minimal_words) = linearize(&g)?;
    let alphabet = d.alphabet();

    let mut seen: HashSet<Tree> = HashSet::new();
    let mut out: Vec<Tree> = Vec::new();
    for w in phi3(&lin) {
        let t = decode(alphabet, &w).map_err(|e| TestSetError::Decode(e.to_string()))?;
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    let minimal_trees = d.minimal_trees();
    for q in d.state_ids() {
        let name = format!("A_{}", d.state_name(q));
        let nt = g
            .names()
            .iter()
            .position(|n| *n == name)
            .expect("every state of a productive all-initial domain has a nonterminal");
        let t = decode(alphabet, &minimal_words[nt]).map_err(|e| TestSetError::Decode(e.to_string()))?;
        assert_eq!(
            Some(&t),
            minimal_trees[q.index()].as_ref(),
            "minimal words and minimal trees must agree"
        );
        if seen.insert(t.clone()) {
            out.push(t);
        }
    }
    out.sort();
    assert!(
        closure_violations(&out).is_empty(),
        "tree test set is not closed under subtrees"
    );
    assert!(out.iter().all(|t| d.accepts(t)), "tree test set leaves the domain");
    Ok(out)
}

/// Size of every state's smallest tree containing a string leaf.
fn leaf_sizes(d: &Domain, leaf: crate::adt::SymbolId, min: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; d.state_count()];
    loop {
        let mut changed = false;
        for t in d.transitions() {
            let Some(size) = leaf_size_via(t, leaf, min, &best).map(|(s, _)| s) else {
                continue;
            };
            if best[t.state.index()].is_none_or(|b| size < b) {
                best[t.state.index()] = Some(size);
                changed = true;
            }
        }
        if !changed {
            return best;
        }
    }
}

/// Size of the smallest tree with a string leaf built from `t`, and the child
/// position that carries the leaf (`None` when `t` is the leaf itself).
fn leaf_size_via(
    t: &Transition,
    leaf: crate::adt::SymbolId,
    min: &[Option<usize>],
    with_leaf: &[Option<usize>],
) -> Option<(usize, Option<usize>)> {
    if t.symbol == leaf {
        return Some((1, None));
    }
    let base: usize = 1 + t
        .children
        .iter()
        .map(|c| min[c.index()])
        .sum::<Option<usize>>()?;
    t.children
        .iter()
        .enumerate()
        .filter_map(|(i, c)| Some((base - min[c.index()]? + with_leaf[c.index()]?, Some(i))))
        .min_by_key(|(s, i)| (*s, *i))
}

fn leaf_tree(d: &Domain, q: StateId, leaf: crate::adt::SymbolId, min: &[Option<usize>], with_leaf: &[Option<usize>], minimal: &[Option<Tree>]) -> Tree {
    let target = with_leaf[q.index()].expect("caller checked");
    let (t, pos) = d
        .transitions()
        .iter()
        .filter(|t| t.state == q)
        .find_map(|t| match leaf_size_via(t, leaf, min, with_leaf) {
            Some((s, pos)) if s == target => Some((t, pos)),
            _ => None,
        })
        .expect("a transition reaches the minimum");
    match pos {
        None => Tree::string_value(t.symbol, ""),
        Some(p) => {
            let children = t
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == p {
                        leaf_tree(d, *c, leaf, min, with_leaf, minimal)
                    } else {
                        minimal[c.index()].clone().expect("productive")
                    }
                })
                .collect();
            Tree::node(t.symbol, children)
        }
    }
}

/// The linear test set for domains whose trees carry string values: for each
/// symbol, one default tree with every string leaf set to `#` and, for each
/// argument position, the variant where the first string leaf below that
/// argument is `?` instead.
///
/// Every argument position must admit a tree containing a string leaf.
pub fn linear_string_test_set(d: &Domain) -> Result<Vec<Tree>, TestSetError> {
    let alphabet = d.alphabet();
    let leaf = alphabet.string_leaf().ok_or(TestSetError::NoStringLeaf)?;
    let min = d.minimal_sizes();
    let minimal = d.minimal_trees();
    let with_leaf = leaf_sizes(d, leaf, &min);
    let mut out: Vec<Tree> = Vec::new();
    let mut seen: HashSet<Tree> = HashSet::new();
    for (f, sym) in alphabet.iter() {
        let Some(t) = d.transitions().iter().find(|t| t.symbol == f) else {
            continue;
        };
        let mut args = Vec::with_capacity(sym.arity);
        for (i, c) in t.children.iter().enumerate() {
            if with_leaf[c.index()].is_none() {
                return Err(TestSetError::NoLeafBelow {
                    symbol: sym.name.clone(),
                    index: i + 1,
                });
            }
            args.push(leaf_tree(d, *c, leaf, &min, &with_leaf, &minimal));
        }
        let hash = |tree: &Tree| tree.map_values(&mut 0, &|_| "#".to_string());
        let default = if f == leaf {
            Tree::string_value(f, "#")
        } else {
            Tree::node(f, args.iter().map(hash).collect())
        };
        let mut variants = vec![default];
        for i in 0..args.len() {
            let children = args
                .iter()
                .enumerate()
                .map(|(j, a)| {
                    if i == j {
                        a.map_values(&mut 0, &|k| if k == 0 { "?" } else { "#" }.to_string())
                    } else {
                        hash(a)
                    }
                })
                .collect();
            variants.push(Tree::node(f, children));
        }
        for v in variants {
            debug_assert!(v.count_values() > 0 || sym.arity == 0);
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    Ok(out)
}

/// The tree encodings of a test set, for inspection.
pub fn encoded(trees: &[Tree]) -> Vec<Vec<crate::morphism::AnnotatedLetter>> {
    trees.iter().map(encode).collect()
}
