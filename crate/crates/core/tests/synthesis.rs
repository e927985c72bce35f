mod common;

use std::collections::HashMap;
use std::sync::Arc;

use common::{domain_trees, first_disagreement, grammar_printer, html_printer, random_domain, random_sts, rng};
use printsynth::adt::{
    binary_source, desugar_primitives, domain_of, gen_lower_bound_domain, grammar_source, html_source, parse_adt,
    parse_tree, Domain, RankedAlphabet, RankedSymbol, Tree,
};
use printsynth::equations::{brute_force_solve, split_at_sep};
use printsynth::synthesis::{
    emit_code, interactive_learn, learn_from_domain, learn_from_sample, make_equation, AnswerOutcome, EmitOptions,
    Event, InferenceConfig, InferenceState, MapOracle, Oracle, Question, QuestionKind, Sample, SynthesisError,
    TransducerOracle,
};
use printsynth::testset::tree_test_set;
use printsynth::OneSts;

fn builtin(src: &str) -> Domain {
    domain_of(&desugar_primitives(&parse_adt(src).unwrap())).unwrap()
}

fn tree(a: &RankedAlphabet, text: &str) -> Tree {
    parse_tree(a, text).unwrap()
}

fn html_sample(a: &RankedAlphabet) -> Sample {
    [
        ("node(div,nil)", "<.div"),
        ("div", "div"),
        ("span", "span"),
        ("pre", "pre"),
        ("cons(node(div,nil),nil)", "(<.div)"),
        ("nil", ""),
    ]
    .into_iter()
    .map(|(t, w)| (tree(a, t), w.to_string()))
    .collect()
}

#[test]
fn learns_from_the_html_sample() {
    let d = builtin(html_source());
    let a = d.alphabet_arc();
    let sample = html_sample(&a);
    let sts = learn_from_sample(&a, &sample).unwrap().unwrap();
    for (t, w) in sample.iter() {
        assert_eq!(sts.apply(t).unwrap(), w);
    }
}

#[test]
fn unsatisfiable_sample_agrees_with_brute_force() {
    let a = Arc::new(RankedAlphabet::new(vec![RankedSymbol::new("nil", 0), RankedSymbol::new("cons", 2)]).unwrap());
    let sample: Sample = [(tree(&a, "nil"), "x".to_string()), (tree(&a, "cons(nil,nil)"), "y".to_string())]
        .into_iter()
        .collect();
    assert_eq!(learn_from_sample(&a, &sample).unwrap(), None);
    // the raw equations, with repeated letters, have no solution either
    let formula: Vec<_> = sample.iter().map(|(t, w)| make_equation(t, w)).collect();
    assert!(brute_force_solve(&formula, 1).unwrap().is_empty());
}

#[test]
fn empty_sample_gives_the_silent_printer() {
    let d = builtin(html_source());
    let a = d.alphabet_arc();
    let sts = learn_from_sample(&a, &Sample::new()).unwrap().unwrap();
    assert_eq!(sts, OneSts::empty(a));
}

#[test]
fn open_samples_are_rejected() {
    let d = builtin(html_source());
    let a = d.alphabet_arc();
    let sample: Sample = [(tree(&a, "node(div,nil)"), "x".to_string())].into_iter().collect();
    assert!(matches!(
        learn_from_sample(&a, &sample),
        Err(SynthesisError::NotClosed { .. })
    ));
}

#[test]
fn learn_from_domain_recovers_the_html_printer() {
    let d = builtin(html_source());
    let reference = html_printer(d.alphabet_arc());
    let (sts, calls) = learn_from_domain(&d, &mut TransducerOracle(reference.clone())).unwrap();
    assert_eq!(calls, tree_test_set(&d).unwrap().len());
    let two = tree(d.alphabet(), "cons(node(div,nil),cons(node(div,nil),nil))");
    assert_eq!(sts.apply(&two).unwrap(), "(<.div)(<.div)");
    let trees = domain_trees(&d, 5, 10_000, 7);
    assert_eq!(first_disagreement(&sts, &reference, &trees), None);
}

#[test]
fn learn_from_domain_on_d2_with_the_separating_printer() {
    let d = gen_lower_bound_domain(2);
    let tau = OneSts::from_rows(
        d.alphabet_arc(),
        [
            ("A1", vec!["", "pq"]),
            ("A2", vec!["", ""]),
            ("B1", vec!["", ""]),
            ("B2", vec!["p", "q"]),
            ("F1", vec!["qp"]),
            ("F2", vec![""]),
        ],
    )
    .unwrap();
    let (sts, calls) = learn_from_domain(&d, &mut TransducerOracle(tau.clone())).unwrap();
    assert_eq!(calls, 14);
    let all = d.enumerate_trees(usize::MAX, 3);
    assert_eq!(all.len(), 14);
    assert_eq!(first_disagreement(&sts, &tau, &all), None);
}

#[test]
fn learn_from_domain_single_symbol() {
    let d = builtin("case class K()");
    let mut oracle = MapOracle {
        answers: HashMap::from([("K".to_string(), "k".to_string())]),
    };
    let (sts, calls) = learn_from_domain(&d, &mut oracle).unwrap();
    assert_eq!(calls, 1);
    assert_eq!(sts.constants(d.alphabet().lookup("K").unwrap()), ["k"]);
}

#[test]
fn learn_from_domain_reports_the_conflict() {
    let d = builtin("abstract class L\ncase class Nil() extends L\ncase class Cons(t: L) extends L");
    let mut oracle = MapOracle {
        answers: HashMap::from([
            ("Nil".to_string(), "xx".to_string()),
            ("Cons(Nil)".to_string(), "x".to_string()),
            ("Cons(Cons(Nil))".to_string(), "x".to_string()),
            ("Cons(Cons(Cons(Nil)))".to_string(), "x".to_string()),
        ]),
    };
    match learn_from_domain(&d, &mut oracle) {
        Err(SynthesisError::Inconsistent { examples }) => {
            let trees: Vec<&str> = examples.iter().map(|(t, _)| t.as_str()).collect();
            assert!(trees.iter().all(|t| t.starts_with("Cons")), "{trees:?}");
        }
        other => panic!("expected a conflict, got {other:?}"),
    }
}

fn grammar_state(config: InferenceConfig) -> (Domain, OneSts, InferenceState) {
    let d = builtin(grammar_source());
    let reference = grammar_printer(d.alphabet_arc());
    let state = InferenceState::new(&d, config).unwrap();
    (d, reference, state)
}

/// Answers with `reference` until the open question is about `stop`.
fn run_until(state: &mut InferenceState, reference: &OneSts, stop: Option<&str>) {
    while let Some(q) = state.question() {
        if Some(q.tree_text.as_str()) == stop {
            return;
        }
        let w = reference.apply(&q.tree).unwrap();
        assert_eq!(state.answer(&w).unwrap(), AnswerOutcome::Accepted);
    }
}

#[test]
fn grammar_session_learns_the_exact_constants() {
    let d = builtin(grammar_source());
    let reference = grammar_printer(d.alphabet_arc());
    let learned = interactive_learn(&d, &mut TransducerOracle(reference.clone()), InferenceConfig::default()).unwrap();
    assert_eq!(learned.sts, reference);
    let s = learned.stats;
    assert_eq!(s.inferred + s.asked(), tree_test_set(&d).unwrap().len());
    assert!(s.asked() <= d.state_count() + 3 * d.size());
    assert_eq!(s.asked(), 14);
    let a = d.alphabet();
    let c = |name: &str| learned.sts.constants(a.lookup(name).unwrap()).to_vec();
    assert_eq!(c("ConsRule"), ["\n", "", ""]);
    assert_eq!(c("Grammar"), ["Start: ", "", ""]);
}

#[test]
fn grammar_session_offers_two_and_four_suggestions() {
    let d = builtin(grammar_source());
    let reference = grammar_printer(d.alphabet_arc());
    let learned = interactive_learn(&d, &mut TransducerOracle(reference), InferenceConfig::default()).unwrap();
    let suggestion_questions: Vec<&String> = learned
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Asked {
                tree,
                kind: QuestionKind::Suggestions,
            } => Some(tree),
            _ => None,
        })
        .collect();
    assert_eq!(
        suggestion_questions,
        [
            "NonTerminal(ConsChar(a,NilChar))",
            "Rule(NonTerminal(NilChar),ConsSymbol(Terminal(a),NilSymbol))"
        ]
    );
    // the candidate lists themselves
    let (_, reference, mut state) = grammar_state(InferenceConfig::default());
    run_until(&mut state, &reference, Some("NonTerminal(ConsChar(a,NilChar))"));
    assert_eq!(state.question().unwrap().suggestions, ["Na", "aN"]);
    run_until(
        &mut state,
        &reference,
        Some("Rule(NonTerminal(NilChar),ConsSymbol(Terminal(a),NilSymbol))"),
    );
    assert_eq!(
        state.question().unwrap().suggestions,
        ["N  `a`->", "N - `a`>", "N -> `a`", "N `a` ->"]
    );
}

#[test]
fn hints_follow_child_outputs() {
    let (_, reference, mut state) = grammar_state(InferenceConfig::default());
    run_until(&mut state, &reference, Some("Terminal(a)"));
    let q = state.question().unwrap();
    assert_eq!(q.hint.as_deref(), Some("[...]a[...]"));
    run_until(&mut state, &reference, Some("Grammar(NonTerminal(NilChar),NilRule)"));
    assert_eq!(state.question().unwrap().hint.as_deref(), Some("[...]N[...]"));
}

#[test]
fn inconsistent_answer_is_rejected_then_corrected() {
    let (_, reference, mut state) = grammar_state(InferenceConfig::default());
    let target = "ConsRule(Rule(NonTerminal(NilChar),NilSymbol),NilRule)";
    run_until(&mut state, &reference, Some(target));
    assert!(!state.is_consistent("N- >"));
    match state.answer("N- >").unwrap() {
        AnswerOutcome::Rejected { message, examples } => {
            assert!(message.starts_with("We cannot have the transducer convert"));
            assert!(message.contains(target));
            assert_eq!(examples, ["N ->", "N ->bar"]);
        }
        AnswerOutcome::Accepted => panic!("accepted an impossible answer"),
    }
    assert_eq!(state.question().unwrap().tree_text, target);
    assert!(state.is_consistent("\nN ->"));
    assert_eq!(state.answer("\nN ->").unwrap(), AnswerOutcome::Accepted);
    assert_eq!(state.stats().rejected, 1);
}

#[test]
fn emitted_code_for_the_grammar_session() {
    let decl = parse_adt(grammar_source()).unwrap();
    let d = domain_of(&desugar_primitives(&decl)).unwrap();
    let reference = grammar_printer(d.alphabet_arc());
    let learned = interactive_learn(&d, &mut TransducerOracle(reference), InferenceConfig::default()).unwrap();
    let code = emit_code(&learned.sts, &decl, &learned.asked, EmitOptions::default());
    assert!(code.contains("  case Grammar(t1,t2) ⇒ \"Start: \" + print(t1) + print(t2)\n"));
    assert!(code.contains("  case ConsRule(t1,t2) ⇒ \"\\n\" + print(t1) + print(t2)\n"));
    assert!(code.contains("  case NilChar() ⇒ \"\"\n"));
    assert!(code.contains("  case ConsRule(Rule(NonTerminal(NilChar()),NilSymbol()),NilRule()) => \"\\nN ->\"\n"));
    let contract = code.split("ensuring").nth(1).unwrap();
    assert_eq!(contract.matches("  case ").count(), 15);
}

#[test]
fn ambiguity_is_detected_and_resolved() {
    let d = builtin(html_source());
    let a = d.alphabet_arc();
    let sample = html_sample(&a);
    let two = tree(&a, "cons(node(div,nil),cons(node(div,nil),nil))");
    let mut trees: Vec<Tree> = sample.iter().map(|(t, _)| t.clone()).collect();
    trees.sort();
    trees.push(two.clone());
    let reference = html_printer(Arc::clone(&a));
    let config = InferenceConfig::default();
    let mut state = InferenceState::from_trees(Arc::clone(&a), trees.clone(), config);
    run_until(&mut state, &reference, Some(&two.display(&a).to_string()));
    let cons = a.lookup("cons").unwrap();
    let solutions: Vec<Vec<String>> = state.solution(cons).unwrap().words(10).iter().map(|w| split_at_sep(w)).collect();
    assert!(solutions.len() >= 2);
    assert!(solutions.contains(&vec!["(".into(), ")".into(), "".into()]));
    assert!(solutions.contains(&vec!["(".into(), "".into(), ")".into()]));
    let q = state.question().unwrap();
    assert!(q.suggestions.contains(&"(<.div)(<.div)".to_string()));
    assert!(q.suggestions.contains(&"(<.div(<.div))".to_string()));

    let mut other = state.clone();
    state.answer("(<.div)(<.div)").unwrap();
    let tau = state.finish().unwrap();
    assert_eq!(tau.constants(cons), ["(", ")", ""]);
    assert_eq!(tau, reference);

    other.answer("(<.div(<.div))").unwrap();
    let tau2 = other.finish().unwrap();
    assert_eq!(tau2.constants(cons), ["(", "", ")"]);
}

#[test]
fn stand_ins_are_never_asked() {
    let decl = parse_adt("case class Name(s: String)").unwrap();
    let d = domain_of(&desugar_primitives(&decl)).unwrap();
    let mut state = InferenceState::new(&d, InferenceConfig::default()).unwrap();
    let q = state.question().unwrap().clone();
    assert!(q.tree_text.starts_with("Name("), "{}", q.tree_text);
    assert!(q.hint.is_some());
    let w = format!("<{}>", q.child_outputs[0]);
    state.answer(&w).unwrap();
    assert!(state.is_done(), "{:?}", state.question());
    assert_eq!(state.stats().asked(), 1);
    let sts = state.finish().unwrap();
    let code = emit_code(&sts, &decl, state.asked(), EmitOptions::default());
    assert!(code.contains("  case Name(t1) ⇒ \"<\" + print(t1) + \">\"\n"));
}

#[test]
fn answering_without_a_question_fails() {
    let d = builtin("case class K()");
    let mut state = InferenceState::new(&d, InferenceConfig::default()).unwrap();
    state.answer("k").unwrap();
    assert!(state.is_done());
    assert_eq!(state.answer("k"), Err(SynthesisError::NoQuestion));
}

/// Records every question and answers with the reference.
struct Recording {
    reference: OneSts,
    questions: Vec<Question>,
}

impl Oracle for Recording {
    fn answer(&mut self, q: &Question) -> Result<String, String> {
        self.questions.push(q.clone());
        self.reference.apply(&q.tree).map_err(|e| e.to_string())
    }
}

#[test]
fn random_sessions_respect_the_query_bound() {
    for seed in 0..60 {
        let mut r = rng(seed);
        let d = random_domain(&mut r, 12, 4, 3);
        let reference = random_sts(&mut r, &d.alphabet_arc(), &['p', 'q'], 2);
        let mut oracle = Recording {
            reference: reference.clone(),
            questions: Vec::new(),
        };
        let learned = interactive_learn(&d, &mut oracle, InferenceConfig::default()).unwrap();
        let s = learned.stats;
        assert_eq!(s.asked(), oracle.questions.len());
        assert!(s.asked() <= d.state_count() + 3 * d.size(), "seed {seed}");
        assert_eq!(s.inferred + s.asked(), tree_test_set(&d).unwrap().len());
        for q in &oracle.questions {
            let mut seen = q.suggestions.clone();
            seen.dedup();
            assert_eq!(seen.len(), q.suggestions.len());
            assert!(q.suggestions.is_empty() || q.suggestions.contains(&reference.apply(&q.tree).unwrap()));
        }
        // inferred outputs are the reference's, not merely consistent ones
        let a = d.alphabet();
        for e in &learned.events {
            if let Event::Inferred { tree, output } = e {
                assert_eq!(reference.apply(&parse_tree(a, tree).unwrap()).unwrap(), *output, "seed {seed}");
            }
        }
        let trees = domain_trees(&d, 5, 2000, seed);
        assert_eq!(first_disagreement(&learned.sts, &reference, &trees), None, "seed {seed}");
    }
}

#[test]
fn binary_session() {
    let d = builtin(binary_source());
    let reference = OneSts::from_rows(
        d.alphabet_arc(),
        [("Empty", vec![""]), ("Zero", vec!["", "0"]), ("One", vec!["", "1"])],
    )
    .unwrap();
    let learned = interactive_learn(&d, &mut TransducerOracle(reference.clone()), InferenceConfig::default()).unwrap();
    assert_eq!(learned.stats.testset_size, 15);
    assert!(learned.stats.asked() <= d.state_count() + 3 * d.size());
    assert_eq!(learned.sts, reference);
}

#[test]
fn scripted_oracle_failures_propagate() {
    let d = builtin(html_source());
    let mut oracle = MapOracle::default();
    assert!(matches!(
        interactive_learn(&d, &mut oracle, InferenceConfig::default()),
        Err(SynthesisError::Oracle(_))
    ));
}
