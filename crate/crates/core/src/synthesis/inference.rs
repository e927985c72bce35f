use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use super::emit::make_hint;
use super::sample::{conflicting_examples, learn_from_sample, make_reg_equation, Sample};
use super::SynthesisError;
use crate::adt::{Domain, RankedAlphabet, SymbolId, Tree};
use crate::equations::{split_at_sep, Nfa, SolutionAutomaton, WordEquation};
use crate::morphism::{AnnotatedLetter, OneSts};
use crate::testset::tree_test_set;

/// Recorded equations per symbol beyond which the invariant re-check is
/// skipped; re-intersecting from scratch is quadratic over a session.
const INVARIANT_CHECK_LIMIT: usize = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InferenceConfig {
    /// Largest candidate list offered as numbered suggestions.
    pub max_suggestions: usize,
    /// Re-derive each updated solution automaton from its recorded
    /// equations and compare.
    pub check_invariants: bool,
}

impl Default for InferenceConfig {
    fn default() -> Self {
        InferenceConfig {
            max_suggestions: 9,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuestionKind {
    /// Free text, nothing to go by.
    Plain,
    /// Free text with a `[...]x[...]` pattern.
    Hint,
    /// A numbered list of candidates.
    Suggestions,
}

/// An output the synthesizer cannot infer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Question {
    pub tree: Tree,
    /// Compact constructor syntax, e.g. `cons(node(div,nil),nil)`.
    pub tree_text: String,
    pub child_outputs: Vec<String>,
    pub hint: Option<String>,
    /// Distinct candidates, shortest first then by character order.
    pub suggestions: Vec<String>,
}

impl Question {
    fn plain(alphabet: &RankedAlphabet, tree: &Tree) -> Self {
        Question {
            tree: tree.clone(),
            tree_text: tree.display(alphabet).to_string(),
            child_outputs: Vec::new(),
            hint: None,
            suggestions: Vec::new(),
        }
    }

    pub fn kind(&self) -> QuestionKind {
        if !self.suggestions.is_empty() {
            QuestionKind::Suggestions
        } else if self.hint.is_some() {
            QuestionKind::Hint
        } else {
            QuestionKind::Plain
        }
    }
}

/// The counters of a session, split the way benchmark rows report them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub testset_size: usize,
    pub inferred: usize,
    pub asked_plain: usize,
    pub asked_hint: usize,
    pub asked_suggestions: usize,
    pub rejected: usize,
}

impl Stats {
    pub fn asked(&self) -> usize {
        self.asked_plain + self.asked_hint + self.asked_suggestions
    }

    pub fn remaining(&self) -> usize {
        self.testset_size - self.inferred - self.asked()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Inferred { tree: String, output: String },
    Asked { tree: String, kind: QuestionKind },
    Answered { tree: String, answer: String },
    Rejected { tree: String, answer: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnswerOutcome {
    Accepted,
    Rejected { message: String, examples: Vec<String> },
}

/// The interactive learning loop as a resumable state machine.
///
/// The state is always advanced: after construction and after every accepted
/// answer, every output that is already determined is recorded, so
/// [`question`](Self::question) is either the next open question or `None`
/// when the session is complete.
#[derive(Clone, Debug)]
pub struct InferenceState {
    alphabet: Arc<RankedAlphabet>,
    config: InferenceConfig,
    pending: VecDeque<Tree>,
    sample: Sample,
    /// `None` stands for the universal language: no equation recorded yet.
    sol: Vec<Option<SolutionAutomaton>>,
    /// Candidate outputs of the open question; `None` when unconstrained.
    possible: Option<Nfa<char>>,
    recorded: Vec<Vec<WordEquation<AnnotatedLetter>>>,
    current: Option<Question>,
    asked: Vec<(Tree, String)>,
    stats: Stats,
    events: Vec<Event>,
}

impl InferenceState {
    pub fn new(domain: &Domain, config: InferenceConfig) -> Result<Self, SynthesisError> {
        let trees = tree_test_set(domain)?;
        Ok(Self::from_trees(domain.alphabet_arc(), trees, config))
    }

    /// Runs the loop over `trees`, which must be ordered subtrees first.
    pub fn from_trees(alphabet: Arc<RankedAlphabet>, trees: Vec<Tree>, config: InferenceConfig) -> Self {
        let n = alphabet.len();
        let mut state = InferenceState {
            config,
            pending: trees.into(),
            sample: Sample::new(),
            sol: vec![None; n],
            possible: None,
            recorded: vec![Vec::new(); n],
            current: None,
            asked: Vec::new(),
            stats: Stats::default(),
            events: Vec::new(),
            alphabet,
        };
        state.stats.testset_size = state.pending.len();
        state.advance();
        state
    }

    pub fn alphabet(&self) -> &RankedAlphabet {
        &self.alphabet
    }

    pub fn question(&self) -> Option<&Question> {
        self.current.as_ref()
    }

    pub fn is_done(&self) -> bool {
        self.current.is_none()
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    /// The pairs answered by the user, in order.
    pub fn asked(&self) -> &[(Tree, String)] {
        &self.asked
    }

    /// The solution automaton of `f`, `None` while unconstrained.
    pub fn solution(&self, f: SymbolId) -> Option<&SolutionAutomaton> {
        self.sol[f.index()].as_ref()
    }

    fn show(&self, t: &Tree) -> String {
        t.display(&self.alphabet).to_string()
    }

    fn child_outputs(&self, t: &Tree) -> Vec<String> {
        t.children()
            .iter()
            .map(|c| {
                self.sample
                    .get(c)
                    .expect("pending trees come after their subtrees")
                    .to_string()
            })
            .collect()
    }

    /// Records determined outputs until a question is needed.
    fn advance(&mut self) {
        debug_assert!(self.current.is_none());
        while let Some(t) = self.pending.front().cloned() {
            let sym = self.alphabet.get(t.symbol());
            let forced = if let Some(v) = t.value() {
                Some(v.to_string())
            } else if let Some(out) = sym.fixed_output.clone() {
                Some(out)
            } else {
                None
            };
            if let Some(w) = forced {
                let eq = self.equation(&t, &w);
                let a = SolutionAutomaton::from_equation(&eq).expect("regular equations are sequential");
                let next = match &self.sol[t.symbol().index()] {
                    None => a,
                    Some(s) => s.intersect(&a).expect("same variables"),
                };
                assert!(!next.is_empty(), "fixed output contradicts earlier outputs");
                self.commit(t, w, eq, Some(next), false);
                continue;
            }
            let children = self.child_outputs(&t);
            let (possible, candidates) = match &self.sol[t.symbol().index()] {
                Some(s) if s.words(2).len() == 1 => {
                    // a single solution: print with it directly
                    let values = split_at_sep(&s.words(1)[0]);
                    let mut w = values[0].clone();
                    for (c, v) in children.iter().zip(&values[1..]) {
                        w.push_str(c);
                        w.push_str(v);
                    }
                    let eq = self.equation(&t, &w);
                    self.commit(t, w, eq, None, false);
                    continue;
                }
                Some(s) => {
                    let nfa = s.substitute_separators(&children);
                    let words = nfa.enumerate_distinct_words(self.config.max_suggestions.max(1) + 1);
                    (Some(nfa), words)
                }
                None => (None, Vec::new()),
            };
            assert!(
                possible.is_none() || !candidates.is_empty(),
                "solution automata stay non-empty"
            );
            if possible.is_some() && candidates.len() == 1 {
                let w: String = candidates[0].iter().collect();
                let eq = self.equation(&t, &w);
                // every solution prints w here, so sol(f) is unchanged
                self.commit(t, w, eq, None, false);
                continue;
            }
            let suggestions: Vec<String> = if candidates.len() >= 2 && candidates.len() <= self.config.max_suggestions {
                candidates.iter().map(|w| w.iter().collect()).collect()
            } else {
                Vec::new()
            };
            let hint = if suggestions.is_empty() { make_hint(&children) } else { None };
            let tree_text = self.show(&t);
            let q = Question {
                tree: t,
                tree_text,
                child_outputs: children,
                hint,
                suggestions,
            };
            self.events.push(Event::Asked {
                tree: q.tree_text.clone(),
                kind: q.kind(),
            });
            self.possible = possible;
            self.current = Some(q);
            return;
        }
    }

    fn equation(&self, t: &Tree, w: &str) -> WordEquation<AnnotatedLetter> {
        make_reg_equation(t, w, &self.sample, &self.alphabet).expect("children are recorded")
    }

    /// Adds `t ↦ w` to the sample; `next` replaces the solution automaton of
    /// the root symbol when given.
    fn commit(
        &mut self,
        t: Tree,
        w: String,
        eq: WordEquation<AnnotatedLetter>,
        next: Option<SolutionAutomaton>,
        asked: bool,
    ) {
        let f = t.symbol().index();
        if let Some(next) = next {
            self.sol[f] = Some(next);
        }
        self.recorded[f].push(eq);
        if self.config.check_invariants && self.recorded[f].len() <= INVARIANT_CHECK_LIMIT {
            self.check_invariant(f);
        }
        let popped = self.pending.pop_front();
        debug_assert_eq!(popped.as_ref(), Some(&t));
        let text = self.show(&t);
        if asked {
            self.events.push(Event::Answered {
                tree: text,
                answer: w.clone(),
            });
            self.asked.push((t.clone(), w.clone()));
        } else {
            self.stats.inferred += 1;
            self.events.push(Event::Inferred {
                tree: text,
                output: w.clone(),
            });
        }
        self.sample.insert(t, w);
    }

    /// `sol(f)` must equal the intersection of the automata of all recorded
    /// equations rooted at `f`.
    fn check_invariant(&self, f: usize) {
        let mut acc: Option<SolutionAutomaton> = None;
        for eq in &self.recorded[f] {
            let a = SolutionAutomaton::from_equation(eq).expect("regular equations are sequential");
            acc = Some(match acc {
                None => a,
                Some(b) => b.intersect(&a).expect("same variables"),
            });
        }
        let sol = self.sol[f].as_ref().expect("a recorded symbol is constrained");
        assert!(
            acc.as_ref().is_some_and(|a| a.equivalent(sol)),
            "solution automaton of `{}` drifted from its equations",
            self.alphabet.get(SymbolId(f as u32)).name
        );
    }

    /// Whether `answer` is an output some transducer consistent with the
    /// recorded outputs produces for the open question.
    pub fn is_consistent(&self, answer: &str) -> bool {
        let Some(q) = &self.current else {
            return false;
        };
        match &self.possible {
            Some(nfa) => nfa.contains(&answer.chars().collect::<Vec<_>>()),
            None => SolutionAutomaton::from_equation(&self.equation(&q.tree, answer))
                .map(|a| !a.is_empty())
                .unwrap_or(false),
        }
    }

    /// Submits the output of the open question. Inconsistent answers are
    /// rejected with a message and leave the question open.
    pub fn answer(&mut self, answer: &str) -> Result<AnswerOutcome, SynthesisError> {
        let q = self.current.clone().ok_or(SynthesisError::NoQuestion)?;
        let f = q.tree.symbol().index();
        let eq = self.equation(&q.tree, answer);
        let a = SolutionAutomaton::from_equation(&eq)?;
        let next = match &self.sol[f] {
            None => a,
            Some(s) => s.intersect(&a)?,
        };
        if next.is_empty() {
            let examples = self.consistent_examples(&q);
            let message = rejection_message(&q.tree_text, answer, &examples);
            self.stats.rejected += 1;
            self.events.push(Event::Rejected {
                tree: q.tree_text.clone(),
                answer: answer.to_string(),
                message: message.clone(),
            });
            return Ok(AnswerOutcome::Rejected { message, examples });
        }
        match q.kind() {
            QuestionKind::Plain => self.stats.asked_plain += 1,
            QuestionKind::Hint => self.stats.asked_hint += 1,
            QuestionKind::Suggestions => self.stats.asked_suggestions += 1,
        }
        self.current = None;
        self.possible = None;
        self.commit(q.tree, answer.to_string(), eq, Some(next), true);
        self.advance();
        Ok(AnswerOutcome::Accepted)
    }

    fn consistent_examples(&self, q: &Question) -> Vec<String> {
        match &self.possible {
            Some(nfa) => nfa
                .enumerate_distinct_words(2)
                .into_iter()
                .map(|w| w.into_iter().collect())
                .collect(),
            None => {
                let base = q.child_outputs.concat();
                vec![base.clone(), format!("{base}bar")]
            }
        }
    }

    /// The learned transducer, once every question is answered.
    pub fn finish(&self) -> Result<OneSts, SynthesisError> {
        if !self.is_done() {
            return Err(SynthesisError::Unfinished);
        }
        // sol(f) is the intersection of every recorded equation of f, so its
        // shortest word is what solving the whole sample would return
        let mut sts = OneSts::empty(Arc::clone(&self.alphabet));
        for (f, sol) in self.sol.iter().enumerate() {
            let f = SymbolId(f as u32);
            if self.alphabet.get(f).string_leaf {
                continue;
            }
            if let Some(sol) = sol {
                let Some(w) = sol.shortest_word() else {
                    return Err(inconsistent(&self.alphabet, &self.sample)?);
                };
                sts.set(f, split_at_sep(&w))?;
            }
        }
        for (t, w) in self.sample.iter() {
            assert_eq!(
                sts.apply(t)?,
                w,
                "learned transducer disagrees with the sample on {}",
                t.display(&self.alphabet)
            );
        }
        Ok(sts)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('\n', "\\n")
}

fn rejection_message(tree: &str, answer: &str, examples: &[String]) -> String {
    let shown: Vec<String> = examples.iter().map(|e| format!("'{}'", escape(e))).collect();
    format!(
        "We cannot have the transducer convert {tree}\nto {}.\nPlease enter something consistent with what you previously entered (e.g. {},...)?",
        escape(answer),
        shown.join(",")
    )
}

fn inconsistent(alphabet: &RankedAlphabet, sample: &Sample) -> Result<SynthesisError, SynthesisError> {
    let examples = conflicting_examples(alphabet, sample)?
        .into_iter()
        .map(|(t, w)| (t.display(alphabet).to_string(), w))
        .collect();
    Ok(SynthesisError::Inconsistent { examples })
}

/// Something that knows the intended printer.
pub trait Oracle {
    fn answer(&mut self, question: &Question) -> Result<String, String>;
}

/// Answers with a reference transducer.
#[derive(Clone, Debug)]
pub struct TransducerOracle(pub OneSts);

impl Oracle for TransducerOracle {
    fn answer(&mut self, question: &Question) -> Result<String, String> {
        self.0.apply(&question.tree).map_err(|e| e.to_string())
    }
}

/// Answers from a table keyed by compact tree text.
#[derive(Clone, Debug, Default)]
pub struct MapOracle {
    pub answers: HashMap<String, String>,
}

impl Oracle for MapOracle {
    fn answer(&mut self, question: &Question) -> Result<String, String> {
        self.answers
            .get(&question.tree_text)
            .cloned()
            .ok_or_else(|| format!("no scripted answer for {}", question.tree_text))
    }
}

/// Result of a completed interactive run.
#[derive(Clone, Debug)]
pub struct Learned {
    pub sts: OneSts,
    pub stats: Stats,
    pub asked: Vec<(Tree, String)>,
    pub events: Vec<Event>,
}

/// Runs the interactive loop against a scripted oracle. The first rejected
/// answer aborts the run.
pub fn interactive_learn(
    domain: &Domain,
    oracle: &mut dyn Oracle,
    config: InferenceConfig,
) -> Result<Learned, SynthesisError> {
    let mut state = InferenceState::new(domain, config)?;
    while let Some(q) = state.question() {
        let w = oracle.answer(q).map_err(SynthesisError::Oracle)?;
        if let AnswerOutcome::Rejected { message, .. } = state.answer(&w)? {
            return Err(SynthesisError::Rejected(message));
        }
    }
    Ok(Learned {
        sts: state.finish()?,
        stats: state.stats(),
        asked: state.asked().to_vec(),
        events: state.events().to_vec(),
    })
}

/// Asks the oracle for every tree of the test set, then solves. Returns the
/// transducer and the number of oracle calls. Outputs fixed in advance are
/// not asked.
pub fn learn_from_domain(domain: &Domain, oracle: &mut dyn Oracle) -> Result<(OneSts, usize), SynthesisError> {
    let alphabet = domain.alphabet_arc();
    let mut sample = Sample::new();
    let mut calls = 0;
    for t in tree_test_set(domain)? {
        if t.value().is_some() {
            continue;
        }
        let w = match &alphabet.get(t.symbol()).fixed_output {
            Some(out) => out.clone(),
            None => {
                calls += 1;
                oracle
                    .answer(&Question::plain(&alphabet, &t))
                    .map_err(SynthesisError::Oracle)?
            }
        };
        sample.insert(t, w);
    }
    match learn_from_sample(&alphabet, &sample)? {
        Some(sts) => Ok((sts, calls)),
        None => Err(inconsistent(&alphabet, &sample)?),
    }
}
