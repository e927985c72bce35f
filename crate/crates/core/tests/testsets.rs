mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::{
    agreeing_constants, all_words, cfg_accepts, cfg_words, domain_trees, first_disagreement, pick_agreeing,
    random_domain, random_linear_cfg, random_sts, rng,
};
use printsynth::adt::{
    binary_source, closure_violations, desugar_primitives, domain_of, gen_lower_bound_domain, grammar_source,
    html_source, parse_adt, Domain,
};
use printsynth::morphism::domain_to_grammar;
use printsynth::testset::{linearize, optimal_paths, phi3, tree_test_set, Cfg, GrammarGraph, Vertex};
use printsynth::OneSts;

fn builtin(src: &str) -> Domain {
    domain_of(&desugar_primitives(&parse_adt(src).unwrap())).unwrap()
}

#[test]
fn lower_bound_family_is_cubic_and_complete() {
    for n in 1..=8 {
        let d = gen_lower_bound_domain(n);
        let ts = tree_test_set(&d).unwrap();
        assert_eq!(ts.len(), n * n * n + n * n + n, "n = {n}");
        // the domain is finite and the test set must be all of it
        let mut all = d.enumerate_trees(usize::MAX, 3);
        all.sort();
        assert_eq!(ts, all);
    }
}

#[test]
fn benchmark_sizes() {
    assert_eq!(tree_test_set(&builtin(binary_source())).unwrap().len(), 15);
    assert_eq!(tree_test_set(&builtin(html_source())).unwrap().len(), 35);
    let grammar = tree_test_set(&builtin(grammar_source())).unwrap().len();
    assert!((80..=180).contains(&grammar), "grammar test set has {grammar} trees");
}

#[test]
fn random_test_sets_are_closed_sorted_and_in_domain() {
    for seed in 0..200 {
        let d = random_domain(&mut rng(seed), 6, 3, 2);
        let ts = tree_test_set(&d).unwrap();
        assert!(closure_violations(&ts).is_empty(), "seed {seed}");
        assert!(ts.windows(2).all(|w| w[0] < w[1]), "seed {seed}");
        assert!(ts.iter().all(|t| d.accepts(t)), "seed {seed}");
        let bound = 2 * d.size().pow(3) + d.state_count();
        assert!(ts.len() <= bound, "seed {seed}");
    }
}

#[test]
fn agreement_on_test_set_implies_agreement_up_to_depth_five() {
    let gamma = ['p', 'q'];
    let mut trials = 0;
    let mut nontrivial = 0;
    for seed in 0..300 {
        let mut r = rng(1000 + seed);
        let d = random_domain(&mut r, 6, 3, 2);
        let ts = tree_test_set(&d).unwrap();
        let trees = domain_trees(&d, 5, 2000, seed);
        let tau = random_sts(&mut r, &d.alphabet_arc(), &gamma, 2);
        let choices = agreeing_constants(&tau, &ts, 16);
        for _ in 0..4 {
            let other = pick_agreeing(&mut r, &tau, &choices, &gamma);
            assert_eq!(first_disagreement(&tau, &other, &ts), None);
            if other != tau {
                nontrivial += 1;
            }
            trials += 1;
            if let Some(t) = first_disagreement(&tau, &other, &trees) {
                panic!(
                    "seed {seed}: transducers agree on the test set but not on {}",
                    t.display(d.alphabet())
                );
            }
        }
    }
    assert_eq!(trials, 1200);
    assert!(nontrivial > 100, "only {nontrivial} distinct agreeing pairs");
}

/// All transducers over `{ε, p, q}` grouped by their outputs on the test
/// set; within a group the outputs on the domain must coincide.
#[test]
fn exhaustive_soundness_on_d2() {
    let d = gen_lower_bound_domain(2);
    let ts = tree_test_set(&d).unwrap();
    let trees = d.enumerate_trees(usize::MAX, 5);
    let alphabet = d.alphabet_arc();
    let slots: Vec<usize> = alphabet.iter().map(|(_, s)| s.arity + 1).collect();
    let total: usize = slots.iter().sum();
    let consts = ["", "p", "q"];
    let mut by_signature: HashMap<Vec<String>, Vec<String>> = HashMap::new();
    let mut digits = vec![0usize; total];
    loop {
        let mut it = digits.iter();
        let table = slots
            .iter()
            .map(|k| (0..*k).map(|_| consts[*it.next().unwrap()].to_string()).collect())
            .collect();
        let sts = OneSts::new(Arc::clone(&alphabet), table).unwrap();
        let sig: Vec<String> = ts.iter().map(|t| sts.apply(t).unwrap()).collect();
        let full: Vec<String> = trees.iter().map(|t| sts.apply(t).unwrap()).collect();
        let prev = by_signature.entry(sig).or_insert_with(|| full.clone());
        assert_eq!(*prev, full);
        // next digit vector
        let mut i = 0;
        while i < total {
            digits[i] += 1;
            if digits[i] < consts.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == total {
            break;
        }
    }
}

/// Lexicographically least shortest path by exhaustive enumeration.
fn brute_optimal_path<T: Clone + Eq + std::fmt::Debug>(
    g: &GrammarGraph<T>,
    from: Vertex,
    to: Vertex,
    max_len: usize,
) -> Option<Vec<usize>> {
    let mut layer: Vec<(Vertex, Vec<usize>)> = vec![(from, Vec::new())];
    for _ in 0..=max_len {
        let mut hits: Vec<Vec<usize>> = layer.iter().filter(|(v, _)| *v == to).map(|(_, p)| p.clone()).collect();
        if !hits.is_empty() {
            hits.sort();
            return hits.into_iter().next();
        }
        let mut next = Vec::new();
        for (v, p) in &layer {
            for e in g.edges() {
                if Vertex::Nt(e.from) == *v {
                    let mut q = p.clone();
                    q.push(e.rule);
                    next.push((e.to, q));
                }
            }
        }
        layer = next;
    }
    None
}

fn vertex_index(v: Vertex, n: usize) -> usize {
    match v {
        Vertex::Nt(a) => a.index(),
        Vertex::Bottom => n,
    }
}

fn check_paths<T: Clone + Eq + std::fmt::Debug>(lin: &Cfg<T>, max_len: usize) {
    let g = GrammarGraph::new(lin);
    let table = optimal_paths(&g);
    let n = lin.nonterminal_count();
    let vertices: Vec<Vertex> = (0..n)
        .map(|a| Vertex::Nt(printsynth::testset::NtId(a as u32)))
        .chain([Vertex::Bottom])
        .collect();
    for u in &vertices[..n] {
        for v in &vertices {
            let got = table.get(vertex_index(*u, n), vertex_index(*v, n)).map(<[usize]>::to_vec);
            let want = brute_optimal_path(&g, *u, *v, max_len);
            if let Some(w) = &got {
                assert!(w.len() <= max_len, "raise max_len");
            }
            assert_eq!(got, want, "{u:?} -> {v:?}");
        }
    }
}

#[test]
fn d2_graph_paths_match_exhaustive_search() {
    let g = domain_to_grammar(&gen_lower_bound_domain(2));
    let (lin, _) = linearize(&g).unwrap();
    check_paths(&lin, 6);
    let graph = GrammarGraph::new(&lin);
    let table = optimal_paths(&graph);
    let n = lin.nonterminal_count();
    // S has a unit rule to every state, so S reaches ⊥ through A_q0 in two steps
    assert_eq!(table.get(0, n).map(<[usize]>::len), Some(2));
}

#[test]
fn random_graph_paths_match_exhaustive_search() {
    for seed in 0..150 {
        let g = random_linear_cfg(&mut rng(seed), 4, 6);
        check_paths(&g, 5);
    }
}

#[test]
fn phi3_words_belong_to_the_grammar() {
    for seed in 0..150 {
        let g = random_linear_cfg(&mut rng(seed), 4, 6);
        let words = phi3(&g);
        let r = g.rules().len();
        assert!(words.len() <= 2 * r * r * r);
        for w in &words {
            assert!(cfg_accepts(&g, w), "seed {seed}: {w:?} not derivable");
        }
    }
}

/// Morphisms `{a,b,c}* → {p,q}*` with images of length at most 2, grouped by
/// their values on `Φ₃(G)`; each group must agree on sampled words of `L(G)`.
#[test]
fn phi3_is_a_test_set_for_random_linear_grammars() {
    let images = all_words(&['p', 'q'], 2);
    for seed in 0..60 {
        let g = random_linear_cfg(&mut rng(500 + seed), 3, 5);
        let t = phi3(&g);
        let l = cfg_words(&g, 7, 14);
        let apply = |m: &[&String; 3], w: &[char]| -> String {
            w.iter().map(|c| m[(*c as u8 - b'a') as usize].as_str()).collect()
        };
        let mut groups: HashMap<Vec<String>, Vec<String>> = HashMap::new();
        for x in &images {
            for y in &images {
                for z in &images {
                    let m = [x, y, z];
                    let sig: Vec<String> = t.iter().map(|w| apply(&m, w)).collect();
                    let full: Vec<String> = l.iter().map(|w| apply(&m, w)).collect();
                    let prev = groups.entry(sig).or_insert_with(|| full.clone());
                    assert_eq!(*prev, full, "seed {seed}");
                }
            }
        }
    }
}

#[test]
fn lin_preserves_membership_of_phi3_words_in_original_grammar() {
    let g = domain_to_grammar(&builtin(html_source()));
    let (lin, _) = linearize(&g).unwrap();
    for w in phi3(&lin) {
        assert!(cfg_accepts(&g, &w));
    }
}

/// The two transducers separating `A_x(B_y(F_z))` from the rest of `D_n`.
fn separating_pair(d: &Domain, x: usize, y: usize, z: usize) -> (OneSts, OneSts) {
    let a = d.alphabet_arc();
    let mut rows1: Vec<(String, Vec<&str>)> = Vec::new();
    let mut rows2: Vec<(String, Vec<&str>)> = Vec::new();
    let n = a.len() / 3;
    for j in 1..=n {
        let (r1, r2) = if j == x { (vec!["", "pq"], vec!["pq", ""]) } else { (vec!["", ""], vec!["", ""]) };
        rows1.push((format!("A{j}"), r1));
        rows2.push((format!("A{j}"), r2));
        let b = if j == y { vec!["", ""] } else { vec!["p", "q"] };
        rows1.push((format!("B{j}"), b.clone()));
        rows2.push((format!("B{j}"), b));
        let f = if j == z { vec!["qp"] } else { vec![""] };
        rows1.push((format!("F{j}"), f.clone()));
        rows2.push((format!("F{j}"), f));
    }
    let build = |rows: &[(String, Vec<&str>)]| {
        OneSts::from_rows(Arc::clone(&a), rows.iter().map(|(n, v)| (n.as_str(), v.clone()))).unwrap()
    };
    (build(&rows1), build(&rows2))
}

#[test]
fn every_depth_three_tree_of_d2_is_needed() {
    let d = gen_lower_bound_domain(2);
    let all = d.enumerate_trees(usize::MAX, 3);
    let a = d.alphabet();
    for x in 1..=2 {
        for y in 1..=2 {
            for z in 1..=2 {
                let (t1, t2) = separating_pair(&d, x, y, z);
                let text = format!("A{x}(B{y}(F{z}))");
                let target = printsynth::adt::parse_tree(a, &text).unwrap();
                assert_eq!(t1.apply(&target).unwrap(), "qppq");
                assert_eq!(t2.apply(&target).unwrap(), "pqqp");
                for t in all.iter().filter(|t| **t != target) {
                    assert_eq!(t1.apply(t).unwrap(), t2.apply(t).unwrap(), "{}", t.display(a));
                }
            }
        }
    }
}
