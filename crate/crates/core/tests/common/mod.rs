//! Generators and independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use printsynth::adt::{Domain, RankedAlphabet, RankedSymbol, StateId, SymbolId, Transition, Tree};
use printsynth::equations::{brute_force_solve, split_at_sep, SolutionAutomaton, Term, WordEquation};
use printsynth::synthesis::{make_reg_equation, Sample};
use printsynth::testset::{Cfg, GSym, NtId};
use printsynth::OneSts;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random productive domain with every state initial.
///
/// State `q` first gets a transition whose children are all below `q`, which
/// makes every state productive; the remaining symbols land anywhere. Some
/// symbols get a second transition into another state.
pub fn random_domain(rng: &mut impl Rng, max_symbols: usize, max_states: usize, max_arity: usize) -> Domain {
    let states = rng.gen_range(1..=max_states.min(max_symbols));
    let symbols = rng.gen_range(states..=max_symbols);
    let mut arities = Vec::with_capacity(symbols);
    let mut transitions: Vec<Transition> = Vec::new();
    for f in 0..symbols {
        let (q, arity, children): (usize, usize, Vec<usize>) = if f < states {
            let arity = if f == 0 { 0 } else { rng.gen_range(0..=max_arity) };
            (f, arity, (0..arity).map(|_| rng.gen_range(0..f)).collect())
        } else {
            let arity = rng.gen_range(0..=max_arity);
            (
                rng.gen_range(0..states),
                arity,
                (0..arity).map(|_| rng.gen_range(0..states)).collect(),
            )
        };
        arities.push(arity);
        transitions.push(Transition {
            symbol: SymbolId(f as u32),
            state: StateId(q as u32),
            children: children.iter().map(|c| StateId(*c as u32)).collect(),
        });
        if states > 1 && rng.gen_bool(0.2) {
            let other = (q + rng.gen_range(1..states)) % states;
            transitions.push(Transition {
                symbol: SymbolId(f as u32),
                state: StateId(other as u32),
                children: (0..arity).map(|_| StateId(rng.gen_range(0..states) as u32)).collect(),
            });
        }
    }
    let alphabet = RankedAlphabet::new(
        arities
            .iter()
            .enumerate()
            .map(|(i, k)| RankedSymbol::new(format!("f{i}"), *k))
            .collect(),
    )
    .expect("distinct names");
    let d = Domain::all_initial(
        Arc::new(alphabet),
        (0..states).map(|q| format!("q{q}")).collect(),
        transitions,
    )
    .expect("well-formed");
    assert!(d.unproductive_states().is_empty());
    d
}

pub fn random_word(rng: &mut impl Rng, gamma: &[char], max_len: usize) -> String {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *gamma.choose(rng).expect("non-empty")).collect()
}

pub fn random_sts(rng: &mut impl Rng, alphabet: &Arc<RankedAlphabet>, gamma: &[char], max_len: usize) -> OneSts {
    let table = alphabet
        .iter()
        .map(|(_, s)| (0..=s.arity).map(|_| random_word(rng, gamma, max_len)).collect())
        .collect();
    OneSts::new(Arc::clone(alphabet), table).expect("one row per symbol")
}

/// A transducer whose constants are pairwise distinct words, so every
/// output determines the tree.
pub fn tagged_sts(alphabet: &Arc<RankedAlphabet>) -> OneSts {
    let table = alphabet
        .iter()
        .map(|(f, s)| (0..=s.arity).map(|i| format!("<{}.{}>", f.0, i)).collect())
        .collect();
    OneSts::new(Arc::clone(alphabet), table).expect("one row per symbol")
}

/// A random tree over `alphabet`, ignoring any domain.
pub fn random_tree(rng: &mut impl Rng, alphabet: &RankedAlphabet, depth: usize) -> Tree {
    let ids: Vec<SymbolId> = alphabet.ids().collect();
    let leaves: Vec<SymbolId> = ids.iter().copied().filter(|f| alphabet.arity(*f) == 0).collect();
    let f = if depth <= 1 {
        *leaves.choose(rng).expect("a nullary symbol")
    } else {
        *ids.choose(rng).expect("non-empty")
    };
    let children = (0..alphabet.arity(f))
        .map(|_| random_tree(rng, alphabet, depth - 1))
        .collect();
    Tree::node(f, children)
}

/// A random tree of `d` rooted at any state, with depth at most `depth`
/// (falling back to minimal trees at the bottom).
pub fn random_domain_tree(rng: &mut impl Rng, d: &Domain, depth: usize) -> Tree {
    let q = StateId(rng.gen_range(0..d.state_count()) as u32);
    random_tree_at(rng, d, q, depth, &d.minimal_trees(), &d.minimal_depths())
}

fn random_tree_at(
    rng: &mut impl Rng,
    d: &Domain,
    q: StateId,
    depth: usize,
    minimal: &[Option<Tree>],
    min_depth: &[Option<usize>],
) -> Tree {
    let options: Vec<&Transition> = d
        .transitions()
        .iter()
        .filter(|t| t.state == q)
        .filter(|t| t.children.iter().all(|c| min_depth[c.index()].is_some_and(|m| m < depth)))
        .collect();
    match options.choose(rng) {
        None => minimal[q.index()].clone().expect("productive"),
        Some(t) => Tree::node(
            t.symbol,
            t.children
                .iter()
                .map(|c| random_tree_at(rng, d, *c, depth - 1, minimal, min_depth))
                .collect(),
        ),
    }
}

/// Domain trees of depth at most `depth`: all of them when there are at
/// most `cap`, otherwise the first `cap / 2` in enumeration order plus
/// `cap / 2` random ones.
pub fn domain_trees(d: &Domain, depth: usize, cap: usize, seed: u64) -> Vec<Tree> {
    let all = d.enumerate_trees(cap + 1, depth);
    if all.len() <= cap {
        return all;
    }
    let mut out: Vec<Tree> = all.into_iter().take(cap / 2).collect();
    let mut r = rng(seed);
    while out.len() < cap {
        out.push(random_domain_tree(&mut r, d, depth));
    }
    out
}

/// Membership in `L(g)` by a fixpoint over spans: `table[A][i][j]` holds
/// once some rule of `A` matches `w[i..j]` under the current table. Handles
/// unit and ε-cycles, unlike a plain recursive descent.
pub fn cfg_accepts<T: Clone + Eq + std::fmt::Debug>(g: &Cfg<T>, w: &[T]) -> bool {
    let n = w.len();
    let nts = g.nonterminal_count();
    let mut table = vec![vec![vec![false; n + 1]; n + 1]; nts];
    fn matches<T: Eq>(rhs: &[GSym<T>], w: &[T], i: usize, j: usize, table: &[Vec<Vec<bool>>]) -> bool {
        match rhs.split_first() {
            None => i == j,
            Some((GSym::T(t), rest)) => i < j && w[i] == *t && matches(rest, w, i + 1, j, table),
            Some((GSym::N(b), rest)) => {
                (i..=j).any(|m| table[b.index()][i][m] && matches(rest, w, m, j, table))
            }
        }
    }
    loop {
        let mut changed = false;
        for r in g.rules() {
            for i in 0..=n {
                for j in i..=n {
                    if !table[r.lhs.index()][i][j] && matches(&r.rhs, w, i, j, &table) {
                        table[r.lhs.index()][i][j] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return table[g.start().index()][0][n];
        }
    }
}

/// Every word of `g` derivable in at most `max_steps` leftmost rewriting
/// steps, deduplicated.
pub fn cfg_words<T: Clone + Eq + std::hash::Hash + std::fmt::Debug>(g: &Cfg<T>, max_steps: usize, max_len: usize) -> Vec<Vec<T>> {
    let mut out = std::collections::HashSet::new();
    let mut frontier: Vec<Vec<GSym<T>>> = vec![vec![GSym::N(g.start())]];
    for _ in 0..=max_steps {
        let mut next = Vec::new();
        for form in frontier {
            let terminals = form.iter().filter(|s| matches!(s, GSym::T(_))).count();
            if terminals > max_len {
                continue;
            }
            match form.iter().position(|s| matches!(s, GSym::N(_))) {
                None => {
                    out.insert(
                        form.into_iter()
                            .map(|s| match s {
                                GSym::T(t) => t,
                                GSym::N(_) => unreachable!(),
                            })
                            .collect::<Vec<T>>(),
                    );
                }
                Some(p) => {
                    let GSym::N(a) = form[p] else { unreachable!() };
                    for r in g.rules().iter().filter(|r| r.lhs == a) {
                        let mut f = form[..p].to_vec();
                        f.extend(r.rhs.iter().cloned());
                        f.extend(form[p + 1..].iter().cloned());
                        next.push(f);
                    }
                }
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

/// A random linear grammar over `{a, b, c}`: every nonterminal gets a
/// terminating rule, plus random rules with at most one nonterminal.
pub fn random_linear_cfg(rng: &mut impl Rng, max_nts: usize, max_rules: usize) -> Cfg<char> {
    let n = rng.gen_range(1..=max_nts);
    let mut g = Cfg::new((0..n).map(|i| format!("N{i}")).collect(), NtId(0));
    let letters = ['a', 'b', 'c'];
    let terms = |rng: &mut dyn rand::RngCore, max: usize| -> Vec<GSym<char>> {
        let k = rng.gen_range(0..=max);
        (0..k).map(|_| GSym::T(letters[rng.gen_range(0..3)])).collect()
    };
    for a in 0..n {
        let mut rhs = terms(rng, 2);
        if rhs.is_empty() {
            rhs.push(GSym::T('a'));
        }
        g.add_rule(NtId(a as u32), rhs);
    }
    let extra = rng.gen_range(0..=max_rules);
    for _ in 0..extra {
        let a = NtId(rng.gen_range(0..n) as u32);
        let b = NtId(rng.gen_range(0..n) as u32);
        let mut rhs = terms(rng, 2);
        rhs.push(GSym::N(b));
        rhs.extend(terms(rng, 2));
        g.add_rule(a, rhs);
    }
    g
}

/// `u0 X(first) u1 X(first+1) ⋯ uk = rhs` over consecutive variables.
pub fn sequential_equation(first: usize, constants: &[&str], rhs: &str) -> WordEquation<usize> {
    let mut lhs = Vec::new();
    for (i, u) in constants.iter().enumerate() {
        if !u.is_empty() {
            lhs.push(Term::Text(u.to_string()));
        }
        if i + 1 < constants.len() {
            lhs.push(Term::Var(first + i));
        }
    }
    WordEquation::new(lhs, rhs)
}

/// Solutions of equations sharing one variable sequence, read off the
/// intersected solution automaton, as value vectors.
pub fn automaton_solutions(formula: &[WordEquation<usize>]) -> BTreeSet<Vec<String>> {
    let mut acc: Option<SolutionAutomaton> = None;
    for eq in formula {
        let a = SolutionAutomaton::from_equation(eq).expect("sequential");
        acc = Some(match acc {
            None => a,
            Some(b) => b.intersect(&a).expect("same variables"),
        });
    }
    acc.expect("at least one equation")
        .words(usize::MAX)
        .iter()
        .map(|w| split_at_sep(w))
        .collect()
}

/// Brute-force solutions as value vectors in variable order.
pub fn brute_solutions(formula: &[WordEquation<usize>], max_len: usize) -> BTreeSet<Vec<String>> {
    brute_force_solve(formula, max_len)
        .expect("small search space")
        .into_iter()
        .map(|a| a.into_values().collect())
        .collect()
}

/// All words over `gamma` of length at most `max_len`, shortest first.
pub fn all_words(gamma: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for c in gamma {
                next.push(format!("{w}{c}"));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Every tuple of `n` words over `gamma` whose lengths sum to at most
/// `total`.
pub fn constant_tuples(gamma: &[char], n: usize, total: usize) -> Vec<Vec<String>> {
    let words = all_words(gamma, total);
    let mut out = Vec::new();
    fn go(words: &[String], n: usize, budget: usize, cur: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for w in words.iter().filter(|w| w.len() <= budget) {
            cur.push(w.clone());
            go(words, n, budget - w.len(), cur, out);
            cur.pop();
        }
    }
    go(&words, n, total, &mut Vec::new(), &mut out);
    out
}

/// The first tree on which two transducers differ.
pub fn first_disagreement<'t>(a: &OneSts, b: &OneSts, trees: &'t [Tree]) -> Option<&'t Tree> {
    trees.iter().find(|t| a.apply(t).unwrap() != b.apply(t).unwrap())
}

/// Per symbol, up to `limit` constant tuples that make a transducer agree
/// with `tau` on the closed set `trees`. A symbol absent from `trees` maps
/// to `None` (unconstrained).
pub fn agreeing_constants(tau: &OneSts, trees: &[Tree], limit: usize) -> Vec<Option<Vec<Vec<String>>>> {
    let alphabet = tau.alphabet_arc();
    let sample: Sample = trees.iter().map(|t| (t.clone(), tau.apply(t).unwrap())).collect();
    let mut acc: Vec<Option<SolutionAutomaton>> = vec![None; alphabet.len()];
    for (t, w) in sample.iter() {
        let eq = make_reg_equation(t, w, &sample, &alphabet).unwrap();
        let a = SolutionAutomaton::from_equation(&eq).unwrap();
        let f = t.symbol().index();
        acc[f] = Some(match acc[f].take() {
            None => a,
            Some(b) => b.intersect(&a).unwrap(),
        });
    }
    acc.into_iter()
        .map(|a| a.map(|a| a.words(limit).iter().map(|w| split_at_sep(w)).collect()))
        .collect()
}

/// A transducer agreeing with `tau` on `trees`, drawn from `choices`
/// (see [`agreeing_constants`]); unconstrained symbols get random constants.
pub fn pick_agreeing(rng: &mut impl Rng, tau: &OneSts, choices: &[Option<Vec<Vec<String>>>], gamma: &[char]) -> OneSts {
    let alphabet = tau.alphabet_arc();
    let table = alphabet
        .iter()
        .map(|(f, s)| match &choices[f.index()] {
            Some(options) => options.choose(rng).expect("tau itself is a solution").clone(),
            None => (0..=s.arity).map(|_| random_word(rng, gamma, 2)).collect(),
        })
        .collect();
    OneSts::new(alphabet, table).unwrap()
}

/// The printer of the grammar walkthrough: terminals in backquotes,
/// nonterminals prefixed by `N`, one rule per line.
pub fn grammar_printer(alphabet: Arc<RankedAlphabet>) -> OneSts {
    OneSts::from_rows(
        alphabet,
        [
            ("a", vec!["a"]),
            ("b", vec!["b"]),
            ("NilChar", vec![""]),
            ("ConsChar", vec!["", "", ""]),
            ("Terminal", vec!["`", "`"]),
            ("NonTerminal", vec!["N", ""]),
            ("Rule", vec!["", " ->", ""]),
            ("ConsRule", vec!["\n", "", ""]),
            ("NilRule", vec![""]),
            ("ConsSymbol", vec![" ", "", ""]),
            ("NilSymbol", vec![""]),
            ("Grammar", vec!["Start: ", "", ""]),
        ],
    )
    .unwrap()
}

/// The HTML printer producing `<.div(<.span())` style templates.
pub fn html_printer(alphabet: Arc<RankedAlphabet>) -> OneSts {
    OneSts::from_rows(
        alphabet,
        [
            ("node", vec!["<.", "", ""]),
            ("div", vec!["div"]),
            ("pre", vec!["pre"]),
            ("span", vec!["span"]),
            ("cons", vec!["(", ")", ""]),
            ("nil", vec![""]),
        ],
    )
    .unwrap()
}
