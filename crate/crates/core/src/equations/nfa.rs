use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;

#[derive(Clone, Debug, Default)]
struct NState<L> {
    accepting: bool,
    eps: Vec<u32>,
    edges: Vec<(L, u32)>,
}

/// A nondeterministic automaton with ε-moves over an ordered letter type.
///
/// Word queries return the shortest word first, ties broken by the letter
/// order. The empty automaton has no start state.
#[derive(Clone, Debug)]
pub struct Nfa<L> {
    states: Vec<NState<L>>,
    start: Option<u32>,
}

impl<L> Default for Nfa<L> {
    fn default() -> Self {
        Nfa {
            states: Vec::new(),
            start: None,
        }
    }
}

/// Prefix tree of excluded words; node 0 is the root.
struct Trie<L> {
    children: Vec<HashMap<L, u32>>,
    terminal: Vec<bool>,
}

impl<L: Copy + Eq + Hash> Trie<L> {
    fn new(words: &[Vec<L>]) -> Self {
        let mut t = Trie {
            children: vec![HashMap::new()],
            terminal: vec![false],
        };
        for w in words {
            let mut node = 0usize;
            for l in w {
                let next = t.children.len() as u32;
                let child = *t.children[node].entry(*l).or_insert(next);
                if child == next {
                    t.children.push(HashMap::new());
                    t.terminal.push(false);
                }
                node = child as usize;
            }
            t.terminal[node] = true;
        }
        t
    }
}

/// Product state: automaton state and trie node (`None` once the word has
/// left every excluded prefix).
type Pair = (u32, Option<u32>);

impl<L: Copy + Ord + Hash> Nfa<L> {
    pub fn new() -> Self {
        Nfa::default()
    }

    pub fn add_state(&mut self) -> u32 {
        self.states.push(NState {
            accepting: false,
            eps: Vec::new(),
            edges: Vec::new(),
        });
        (self.states.len() - 1) as u32
    }

    pub fn set_start(&mut self, s: u32) {
        self.start = Some(s);
    }

    pub fn set_accepting(&mut self, s: u32, accepting: bool) {
        self.states[s as usize].accepting = accepting;
    }

    pub fn add_edge(&mut self, from: u32, letter: L, to: u32) {
        self.states[from as usize].edges.push((letter, to));
    }

    pub fn add_epsilon(&mut self, from: u32, to: u32) {
        self.states[from as usize].eps.push(to);
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    fn closure(&self, set: &mut BTreeSet<u32>) {
        let mut stack: Vec<u32> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for t in &self.states[s as usize].eps {
                if set.insert(*t) {
                    stack.push(*t);
                }
            }
        }
    }

    pub fn contains(&self, word: &[L]) -> bool {
        let Some(start) = self.start else {
            return false;
        };
        let mut cur = BTreeSet::from([start]);
        self.closure(&mut cur);
        for l in word {
            let mut next = BTreeSet::new();
            for s in &cur {
                for (x, t) in &self.states[*s as usize].edges {
                    if x == l {
                        next.insert(*t);
                    }
                }
            }
            self.closure(&mut next);
            if next.is_empty() {
                return false;
            }
            cur = next;
        }
        cur.iter().any(|s| self.states[*s as usize].accepting)
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    pub fn shortest_word(&self) -> Option<Vec<L>> {
        self.shortest_excluding(&[])
    }

    /// The shortest (then smallest) accepted word outside `excluded`.
    ///
    /// Works on the product of the automaton with the complement of the
    /// prefix tree of `excluded`, so the cost is linear in the product size.
    pub fn shortest_excluding(&self, excluded: &[Vec<L>]) -> Option<Vec<L>> {
        let start = self.start?;
        let trie = Trie::new(excluded);
        // forward exploration of the product
        let mut ids: HashMap<Pair, u32> = HashMap::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut eps: Vec<Vec<u32>> = Vec::new();
        let mut edges: Vec<Vec<(L, u32)>> = Vec::new();
        let mut intern = |p: Pair, pairs: &mut Vec<Pair>, eps: &mut Vec<Vec<u32>>, edges: &mut Vec<Vec<(L, u32)>>| {
            *ids.entry(p).or_insert_with(|| {
                pairs.push(p);
                eps.push(Vec::new());
                edges.push(Vec::new());
                (pairs.len() - 1) as u32
            })
        };
        intern((start, Some(0)), &mut pairs, &mut eps, &mut edges);
        let mut i = 0;
        while i < pairs.len() {
            let (s, node) = pairs[i];
            let st = &self.states[s as usize];
            for t in &st.eps {
                let id = intern((*t, node), &mut pairs, &mut eps, &mut edges);
                eps[i].push(id);
            }
            for (l, t) in &st.edges {
                let next_node = node.and_then(|n| trie.children[n as usize].get(l).copied());
                let id = intern((*t, next_node), &mut pairs, &mut eps, &mut edges);
                edges[i].push((*l, id));
            }
            i += 1;
        }
        let accepting = |p: Pair| {
            self.states[p.0 as usize].accepting
                && match p.1 {
                    None => true,
                    Some(n) => !trie.terminal[n as usize],
                }
        };
        // backward 0-1 BFS: letters needed to reach acceptance
        let n = pairs.len();
        let mut rev: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for i in 0..n {
            for t in &eps[i] {
                rev[*t as usize].push((i as u32, 0));
            }
            for (_, t) in &edges[i] {
                rev[*t as usize].push((i as u32, 1));
            }
        }
        let mut dist = vec![u32::MAX; n];
        let mut deque = VecDeque::new();
        for (i, p) in pairs.iter().enumerate() {
            if accepting(*p) {
                dist[i] = 0;
                deque.push_back(i as u32);
            }
        }
        while let Some(s) = deque.pop_front() {
            let d = dist[s as usize];
            for (p, w) in &rev[s as usize] {
                let nd = d + w;
                if nd < dist[*p as usize] {
                    dist[*p as usize] = nd;
                    if *w == 0 {
                        deque.push_front(*p);
                    } else {
                        deque.push_back(*p);
                    }
                }
            }
        }
        // greedy descent over sets of product states
        let eps_closure = |set: &mut BTreeSet<u32>| {
            let mut stack: Vec<u32> = set.iter().copied().collect();
            while let Some(s) = stack.pop() {
                for t in &eps[s as usize] {
                    if set.insert(*t) {
                        stack.push(*t);
                    }
                }
            }
        };
        let mut cur = BTreeSet::from([0u32]);
        eps_closure(&mut cur);
        let mut d = cur.iter().map(|s| dist[*s as usize]).min()?;
        if d == u32::MAX {
            return None;
        }
        let mut word = Vec::new();
        while d > 0 {
            let mut best: Option<L> = None;
            for s in &cur {
                for (l, t) in &edges[*s as usize] {
                    if dist[*t as usize] == d - 1 && best.is_none_or(|b| *l < b) {
                        best = Some(*l);
                    }
                }
            }
            let l = best.expect("a set at distance d has a successor at d - 1");
            let mut next = BTreeSet::new();
            for s in &cur {
                for (x, t) in &edges[*s as usize] {
                    if *x == l && dist[*t as usize] == d - 1 {
                        next.insert(*t);
                    }
                }
            }
            eps_closure(&mut next);
            cur = next;
            word.push(l);
            d -= 1;
        }
        Some(word)
    }

    /// The only accepted word, if the language is a singleton.
    pub fn recognizes_exactly_one(&self) -> Option<Vec<L>> {
        let w = self.shortest_word()?;
        match self.shortest_excluding(std::slice::from_ref(&w)) {
            None => Some(w),
            Some(_) => None,
        }
    }

    /// Up to `k` distinct accepted words, shortest first, obtained by
    /// repeatedly excluding the words found so far.
    pub fn enumerate_distinct_words(&self, k: usize) -> Vec<Vec<L>> {
        let mut found: Vec<Vec<L>> = Vec::new();
        while found.len() < k {
            match self.shortest_excluding(&found) {
                Some(w) => found.push(w),
                None => break,
            }
        }
        found
    }
}
