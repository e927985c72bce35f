use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};

use super::{EquationError, Letter, Nfa, WordEquation};

static INTERSECTIONS: AtomicU64 = AtomicU64::new(0);

/// Number of [`SolutionAutomaton::intersect`] calls made by this process.
/// Every call asserts the size bound, so this is also the number of checks.
pub fn intersection_count() -> u64 {
    INTERSECTIONS.load(Ordering::Relaxed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    /// Number of separators read to reach the state.
    layer: u32,
    /// Length of every word reaching the state.
    depth: u32,
    accepting: bool,
    /// Sorted by letter, at most one edge per letter.
    edges: Vec<(Letter, u32)>,
}

/// Layered acyclic DFA over characters and a separator, accepting the
/// separator-joined values of the solutions of one or more sequential
/// equations over the same variables.
///
/// Every state is reached by words of a single length and a single number of
/// separators. The automaton is kept trim; the empty language has no states,
/// otherwise state 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionAutomaton {
    variables: usize,
    states: Vec<State>,
}

impl SolutionAutomaton {
    /// The automaton of one equation `u0 X0 u1 ⋯ Xk u(k+1) = w`.
    pub fn from_equation<V>(eq: &WordEquation<V>) -> Result<Self, EquationError>
    where
        V: Clone + Eq + Hash + Debug,
    {
        eq.check_sequential()?;
        let vars = eq.variables().len();
        if vars == 0 {
            return Err(EquationError::NoVariable);
        }
        let consts: Vec<Vec<char>> = eq.constants().iter().map(|c| c.chars().collect()).collect();
        let rhs: Vec<char> = eq.rhs.chars().collect();
        let k = vars - 1;
        let n = rhs.len();
        let matches_at = |b: usize, u: &[char]| b + u.len() <= n && rhs[b..b + u.len()] == *u;
        let mut prefix_const = Vec::with_capacity(vars);
        let mut acc = 0usize;
        for c in consts.iter().take(vars) {
            acc += c.len();
            prefix_const.push(acc);
        }

        let empty = SolutionAutomaton {
            variables: vars,
            states: Vec::new(),
        };
        if !matches_at(0, &consts[0]) {
            return Ok(empty);
        }
        let mut ids: HashMap<(usize, usize), u32> = HashMap::new();
        let mut states: Vec<State> = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |a: usize, b: usize, states: &mut Vec<State>, queue: &mut VecDeque<(usize, usize)>| {
            *ids.entry((a, b)).or_insert_with(|| {
                states.push(State {
                    layer: a as u32,
                    depth: (b - prefix_const[a] + a) as u32,
                    accepting: false,
                    edges: Vec::new(),
                });
                queue.push_back((a, b));
                (states.len() - 1) as u32
            })
        };
        intern(0, consts[0].len(), &mut states, &mut queue);
        let mut order = Vec::new();
        while let Some((a, b)) = queue.pop_front() {
            order.push((a, b));
            let mut edges = Vec::new();
            if a < k && matches_at(b, &consts[a + 1]) {
                let to = intern(a + 1, b + consts[a + 1].len(), &mut states, &mut queue);
                edges.push((Letter::Sep, to));
            }
            if b < n {
                let to = intern(a, b + 1, &mut states, &mut queue);
                edges.push((Letter::Char(rhs[b]), to));
            }
            let id = order.len() - 1;
            states[id].edges = edges;
            states[id].accepting = a == k && rhs[b..] == consts[k + 1][..];
        }
        Ok(SolutionAutomaton {
            variables: vars,
            states,
        }
        .trimmed())
    }

    /// The automaton of the empty language over `variables` variables.
    pub fn empty(variables: usize) -> Self {
        SolutionAutomaton {
            variables,
            states: Vec::new(),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.variables
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Drops states that cannot reach acceptance and renumbers the rest in
    /// breadth-first order from the initial state.
    fn trimmed(self) -> Self {
        let n = self.states.len();
        if n == 0 {
            return self;
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, s) in self.states.iter().enumerate() {
            for (_, t) in &s.edges {
                rev[*t as usize].push(i as u32);
            }
        }
        let mut live = vec![false; n];
        let mut stack: Vec<u32> = Vec::new();
        for (i, s) in self.states.iter().enumerate() {
            if s.accepting {
                live[i] = true;
                stack.push(i as u32);
            }
        }
        while let Some(s) = stack.pop() {
            for p in &rev[s as usize] {
                if !live[*p as usize] {
                    live[*p as usize] = true;
                    stack.push(*p);
                }
            }
        }
        if !live[0] {
            return SolutionAutomaton::empty(self.variables);
        }
        let mut new_id = vec![u32::MAX; n];
        let mut order = vec![0u32];
        new_id[0] = 0;
        let mut i = 0;
        while i < order.len() {
            let s = order[i] as usize;
            for (_, t) in &self.states[s].edges {
                let t = *t as usize;
                if live[t] && new_id[t] == u32::MAX {
                    new_id[t] = order.len() as u32;
                    order.push(t as u32);
                }
            }
            i += 1;
        }
        let states = order
            .iter()
            .map(|old| {
                let s = &self.states[*old as usize];
                State {
                    layer: s.layer,
                    depth: s.depth,
                    accepting: s.accepting,
                    edges: s
                        .edges
                        .iter()
                        .filter(|(_, t)| live[*t as usize])
                        .map(|(l, t)| (*l, new_id[*t as usize]))
                        .collect(),
                }
            })
            .collect();
        SolutionAutomaton {
            variables: self.variables,
            states,
        }
    }

    /// Language intersection as a reachable product.
    ///
    /// Both operands are layered, so a product state is determined by either
    /// component. The result never has more reachable states than the smaller
    /// operand; this is asserted on every call.
    pub fn intersect(&self, other: &SolutionAutomaton) -> Result<SolutionAutomaton, EquationError> {
        INTERSECTIONS.fetch_add(1, Ordering::Relaxed);
        if self.variables != other.variables {
            return Err(EquationError::MismatchedVariables {
                left: self.variables,
                right: other.variables,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(SolutionAutomaton::empty(self.variables));
        }
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let mut left_partner: HashMap<u32, u32> = HashMap::new();
        let mut right_partner: HashMap<u32, u32> = HashMap::new();
        let mut pairs: Vec<(u32, u32)> = vec![(0, 0)];
        ids.insert((0, 0), 0);
        let mut states: Vec<State> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let (sp, sq) = (&self.states[p as usize], &other.states[q as usize]);
            assert_eq!(
                (sp.layer, sp.depth),
                (sq.layer, sq.depth),
                "paired states must be reached by words of the same shape"
            );
            assert_eq!(*left_partner.entry(p).or_insert(q), q, "left state paired twice");
            assert_eq!(*right_partner.entry(q).or_insert(p), p, "right state paired twice");
            let mut edges = Vec::new();
            let (mut x, mut y) = (0, 0);
            while x < sp.edges.len() && y < sq.edges.len() {
                let (lx, tx) = sp.edges[x];
                let (ly, ty) = sq.edges[y];
                match lx.cmp(&ly) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        let next = ids.len() as u32;
                        let id = *ids.entry((tx, ty)).or_insert_with(|| {
                            pairs.push((tx, ty));
                            next
                        });
                        edges.push((lx, id));
                        x += 1;
                        y += 1;
                    }
                }
            }
            states.push(State {
                layer: sp.layer,
                depth: sp.depth,
                accepting: sp.accepting && sq.accepting,
                edges,
            });
            i += 1;
        }
        assert!(
            states.len() <= self.states.len().min(other.states.len()),
            "intersection has {} reachable states, operands have {} and {}",
            states.len(),
            self.states.len(),
            other.states.len()
        );
        Ok(SolutionAutomaton {
            variables: self.variables,
            states,
        }
        .trimmed())
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        if self.is_empty() {
            return false;
        }
        let mut s = 0usize;
        for l in word {
            match self.states[s].edges.iter().find(|(x, _)| x == l) {
                Some((_, t)) => s = *t as usize,
                None => return false,
            }
        }
        self.states[s].accepting
    }

    /// The shortest accepted word, ties broken lexicographically with the
    /// separator first.
    pub fn shortest_word(&self) -> Option<Vec<Letter>> {
        if self.is_empty() {
            return None;
        }
        let n = self.states.len();
        // distances to acceptance; states are acyclic and trim
        let mut dist = vec![u32::MAX; n];
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut queue = VecDeque::new();
        for (i, s) in self.states.iter().enumerate() {
            for (_, t) in &s.edges {
                rev[*t as usize].push(i as u32);
            }
            if s.accepting {
                dist[i] = 0;
                queue.push_back(i as u32);
            }
        }
        while let Some(s) = queue.pop_front() {
            for p in &rev[s as usize] {
                if dist[*p as usize] == u32::MAX {
                    dist[*p as usize] = dist[s as usize] + 1;
                    queue.push_back(*p);
                }
            }
        }
        let mut word = Vec::new();
        let mut s = 0usize;
        while dist[s] > 0 {
            let (l, t) = self.states[s]
                .edges
                .iter()
                .find(|(_, t)| dist[*t as usize] + 1 == dist[s])
                .expect("a state at distance d has a successor at d - 1");
            word.push(*l);
            s = *t as usize;
        }
        Some(word)
    }

    /// Every accepted word, in depth-first order with smaller letters first.
    /// The language is finite; `limit` caps the output.
    pub fn words(&self, limit: usize) -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        if self.is_empty() {
            return out;
        }
        let mut prefix = Vec::new();
        self.collect_words(0, &mut prefix, &mut out, limit);
        out
    }

    fn collect_words(&self, s: usize, prefix: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if self.states[s].accepting {
            out.push(prefix.clone());
        }
        for (l, t) in &self.states[s].edges {
            prefix.push(*l);
            self.collect_words(*t as usize, prefix, out, limit);
            prefix.pop();
        }
    }

    /// The same language as an NFA over [`Letter`].
    pub fn to_nfa(&self) -> Nfa<Letter> {
        let mut nfa = Nfa::new();
        if self.is_empty() {
            return nfa;
        }
        let ids: Vec<u32> = self.states.iter().map(|_| nfa.add_state()).collect();
        for (i, s) in self.states.iter().enumerate() {
            nfa.set_accepting(ids[i], s.accepting);
            for (l, t) in &s.edges {
                nfa.add_edge(ids[i], *l, ids[*t as usize]);
            }
        }
        nfa.set_start(ids[0]);
        nfa
    }

    /// Replaces the separator leaving layer `a` by the word `fills[a]`: the
    /// result recognises the outputs `μ(X0)·fills[0]·μ(X1)⋯μ(Xk)` over all
    /// solutions `μ`.
    pub fn substitute_separators(&self, fills: &[String]) -> Nfa<char> {
        assert_eq!(
            fills.len() + 1,
            self.variables,
            "one fill word per separator"
        );
        let mut nfa = Nfa::new();
        if self.is_empty() {
            return nfa;
        }
        let ids: Vec<u32> = self.states.iter().map(|_| nfa.add_state()).collect();
        for (i, s) in self.states.iter().enumerate() {
            nfa.set_accepting(ids[i], s.accepting);
            for (l, t) in &s.edges {
                match l {
                    Letter::Char(c) => nfa.add_edge(ids[i], *c, ids[*t as usize]),
                    Letter::Sep => {
                        let fill: Vec<char> = fills[s.layer as usize].chars().collect();
                        if fill.is_empty() {
                            nfa.add_epsilon(ids[i], ids[*t as usize]);
                        } else {
                            let mut from = ids[i];
                            for (j, c) in fill.iter().enumerate() {
                                let to = if j + 1 == fill.len() {
                                    ids[*t as usize]
                                } else {
                                    nfa.add_state()
                                };
                                nfa.add_edge(from, *c, to);
                                from = to;
                            }
                        }
                    }
                }
            }
        }
        nfa.set_start(ids[0]);
        nfa
    }

    /// Language equality, by a product walk.
    pub fn equivalent(&self, other: &SolutionAutomaton) -> bool {
        if self.variables != other.variables {
            return false;
        }
        if self.is_empty() || other.is_empty() {
            return self.is_empty() && other.is_empty();
        }
        // both are trim, so a missing edge on one side is a difference
        let mut seen = HashMap::new();
        let mut stack = vec![(0u32, 0u32)];
        seen.insert((0u32, 0u32), ());
        while let Some((p, q)) = stack.pop() {
            let (sp, sq) = (&self.states[p as usize], &other.states[q as usize]);
            if sp.accepting != sq.accepting || sp.edges.len() != sq.edges.len() {
                return false;
            }
            for ((lx, tx), (ly, ty)) in sp.edges.iter().zip(&sq.edges) {
                if lx != ly {
                    return false;
                }
                if seen.insert((*tx, *ty), ()).is_none() {
                    stack.push((*tx, *ty));
                }
            }
        }
        true
    }

    /// Whether every accepted word has exactly `variables - 1` separators and
    /// the transition graph is acyclic (layers and depths only increase).
    pub fn is_layered(&self) -> bool {
        self.states.iter().all(|s| {
            s.edges.iter().all(|(l, t)| {
                let t = &self.states[*t as usize];
                let layer_step = if *l == Letter::Sep { 1 } else { 0 };
                t.layer == s.layer + layer_step && t.depth == s.depth + 1
            }) && (!s.accepting || s.layer as usize + 1 == self.variables)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{display_letters, join_with_sep, Term};
    use super::*;

    fn eq(lhs: &str, rhs: &str) -> WordEquation<char> {
        // upper-case letters are variables, everything else is text
        let terms = lhs
            .chars()
            .map(|c| {
                if c.is_ascii_uppercase() {
                    Term::Var(c)
                } else {
                    Term::Text(c.to_string())
                }
            })
            .collect();
        WordEquation::new(terms, rhs)
    }

    fn words(a: &SolutionAutomaton) -> Vec<String> {
        a.words(usize::MAX).iter().map(|w| display_letters(w)).collect()
    }

    #[test]
    fn figure_pair() {
        let a = SolutionAutomaton::from_equation(&eq("XpYZ", "pqpp")).unwrap();
        let b = SolutionAutomaton::from_equation(&eq("XYpZ", "qppp")).unwrap();
        assert!(a.contains(&join_with_sep(&["", "q", "pp"])));
        let c = a.intersect(&b).unwrap();
        let got: std::collections::BTreeSet<String> = words(&c).into_iter().collect();
        let want = ["·q·pp", "·qp·p", "·qpp·"].map(String::from).into_iter().collect();
        assert_eq!(got, want);
        assert_eq!(c.shortest_word().unwrap(), join_with_sep(&["", "q", "pp"]));
        assert!(c.is_layered());
    }

    #[test]
    fn trivial_and_empty() {
        let a = SolutionAutomaton::from_equation(&eq("X", "")).unwrap();
        assert_eq!(a.shortest_word(), Some(vec![]));
        let e = SolutionAutomaton::from_equation(&eq("XaY", "bb")).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.shortest_word(), None);
        assert!(a.intersect(&SolutionAutomaton::empty(1)).unwrap().is_empty());
        assert!(a.intersect(&a).unwrap().equivalent(&a));
    }

    #[test]
    fn mismatched_variables() {
        let a = SolutionAutomaton::from_equation(&eq("X", "p")).unwrap();
        let b = SolutionAutomaton::from_equation(&eq("XY", "p")).unwrap();
        assert_eq!(
            a.intersect(&b),
            Err(EquationError::MismatchedVariables { left: 1, right: 2 })
        );
    }

    #[test]
    fn repeated_variable_rejected() {
        assert!(matches!(
            SolutionAutomaton::from_equation(&eq("XX", "pp")),
            Err(EquationError::RepeatedVariable(_))
        ));
    }

    #[test]
    fn substitution_chain() {
        // node: X0 "div" X1 "" X2 = "<.div"
        let a = SolutionAutomaton::from_equation(&WordEquation::new(
            vec![
                Term::Var(0),
                Term::Text("div".into()),
                Term::Var(1),
                Term::Var(2),
            ],
            "<.div",
        ))
        .unwrap();
        let nfa = a.substitute_separators(&["span".into(), "".into()]);
        assert_eq!(nfa.recognizes_exactly_one(), Some("<.span".chars().collect()));
    }
}
