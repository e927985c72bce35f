use std::collections::{HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use super::cfg::{Cfg, GSym, NtId};

/// A vertex of the grammar graph: a nonterminal or the sink `⊥`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Nt(NtId),
    Bottom,
}

/// The edge contributed by a linear rule `A → u B v` (or `A → u`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<T> {
    /// Index of the rule in the linear grammar; also the edge order.
    pub rule: usize,
    pub from: NtId,
    pub to: Vertex,
    pub west: Vec<T>,
    pub east: Vec<T>,
}

/// The labelled graph of a linear grammar.
#[derive(Clone, Debug)]
pub struct GrammarGraph<T> {
    nonterminals: usize,
    start: NtId,
    edges: Vec<Edge<T>>,
    /// Outgoing edge indices per nonterminal, ascending.
    out: Vec<Vec<usize>>,
}

impl<T: Clone + Eq + Debug> GrammarGraph<T> {
    /// Panics unless `g` is linear.
    pub fn new(g: &Cfg<T>) -> Self {
        assert!(g.is_linear(), "the grammar graph needs a linear grammar");
        let n = g.nonterminal_count();
        let mut edges = Vec::with_capacity(g.rules().len());
        let mut out = vec![Vec::new(); n];
        for (i, r) in g.rules().iter().enumerate() {
            let split = r.rhs.iter().position(|s| matches!(s, GSym::N(_)));
            let terms = |xs: &[GSym<T>]| {
                xs.iter()
                    .map(|s| match s {
                        GSym::T(t) => t.clone(),
                        GSym::N(_) => unreachable!("linear rule"),
                    })
                    .collect::<Vec<T>>()
            };
            let edge = match split {
                Some(p) => {
                    let GSym::N(b) = r.rhs[p] else { unreachable!() };
                    Edge {
                        rule: i,
                        from: r.lhs,
                        to: Vertex::Nt(b),
                        west: terms(&r.rhs[..p]),
                        east: terms(&r.rhs[p + 1..]),
                    }
                }
                None => Edge {
                    rule: i,
                    from: r.lhs,
                    to: Vertex::Bottom,
                    west: terms(&r.rhs),
                    east: Vec::new(),
                },
            };
            out[r.lhs.index()].push(i);
            edges.push(edge);
        }
        GrammarGraph {
            nonterminals: n,
            start: g.start(),
            edges,
            out,
        }
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    fn vertex_index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Nt(n) => n.index(),
            Vertex::Bottom => self.nonterminals,
        }
    }

    /// The word derived along a path from some nonterminal to `⊥`: the west
    /// parts in path order followed by the east parts in reverse order.
    pub fn path_word(&self, path: &[usize]) -> Vec<T> {
        let mut w: Vec<T> = Vec::new();
        for e in path {
            w.extend(self.edges[*e].west.iter().cloned());
        }
        for e in path.iter().rev() {
            w.extend(self.edges[*e].east.iter().cloned());
        }
        w
    }
}

/// Optimal path between every pair of vertices: fewest edges, then
/// lexicographically smallest sequence of rule indices.
#[derive(Clone, Debug)]
pub struct PathTable {
    vertices: usize,
    paths: Vec<Option<Vec<usize>>>,
}

impl PathTable {
    pub fn get(&self, from: usize, to: usize) -> Option<&[usize]> {
        self.paths[from * self.vertices + to].as_deref()
    }
}

/// Breadth-first search from every vertex. Scanning each layer in the order
/// it was discovered and edges in rule order discovers every vertex first
/// through its optimal path, since prefixes of optimal paths are optimal.
pub fn optimal_paths<T: Clone + Eq + Debug>(g: &GrammarGraph<T>) -> PathTable {
    let v = g.nonterminals + 1;
    let mut paths = vec![None; v * v];
    for src in 0..g.nonterminals {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; v];
        let mut seen = vec![false; v];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        while let Some(x) = queue.pop_front() {
            if x == g.nonterminals {
                continue;
            }
            for e in &g.out[x] {
                let y = g.vertex_index(g.edges[*e].to);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, *e));
                    queue.push_back(y);
                }
            }
        }
        for dst in 0..v {
            if !seen[dst] {
                continue;
            }
            let mut path = Vec::new();
            let mut cur = dst;
            while let Some((p, e)) = parent[cur] {
                path.push(e);
                cur = p;
            }
            path.reverse();
            paths[src * v + dst] = Some(path);
        }
    }
    // ⊥ only reaches itself
    paths[g.nonterminals * v + g.nonterminals] = Some(Vec::new());
    PathTable { vertices: v, paths }
}

/// The cubic test set of a linear grammar: for every sequence of at most
/// three edges `e1..en`, the word of the path
/// `P1 e1 P2 ⋯ en P(n+1)` where `P1` is the optimal path from the start
/// symbol to the source of `e1`, `Pi` the optimal path between consecutive
/// edges and `P(n+1)` the optimal path from the target of `en` to `⊥`.
///
/// Sequences whose connecting paths do not exist are skipped. Words are
/// deduplicated in the order they are first produced.
pub fn phi3<T: Clone + Eq + Hash + Debug>(lin: &Cfg<T>) -> Vec<Vec<T>> {
    let g = GrammarGraph::new(lin);
    let table = optimal_paths(&g);
    let bottom = g.nonterminals;
    let start = g.start.index();
    let edge_count = g.edges.len();
    let mut seen: HashSet<Vec<T>> = HashSet::new();
    let mut out: Vec<Vec<T>> = Vec::new();
    let mut emit = |path: &[usize]| {
        let w = g.path_word(path);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    };

    let mut seq: Vec<usize> = Vec::with_capacity(3);
    let mut path: Vec<usize> = Vec::new();
    for n in 0..=3usize {
        if n > 0 && edge_count == 0 {
            break;
        }
        seq.clear();
        seq.resize(n, 0);
        loop {
            // stitch P1 e1 P2 ... en P(n+1)
            path.clear();
            let mut at = start;
            let mut ok = true;
            for e in &seq {
                let edge = &g.edges[*e];
                match table.get(at, edge.from.index()) {
                    Some(p) => path.extend_from_slice(p),
                    None => {
                        ok = false;
                        break;
                    }
                }
                path.push(*e);
                at = g.vertex_index(edge.to);
            }
            if ok {
                if let Some(p) = table.get(at, bottom) {
                    path.extend_from_slice(p);
                    emit(&path);
                }
            }
            if !advance(&mut seq, edge_count) {
                break;
            }
        }
    }
    let r = lin.rules().len() as u128;
    assert!(
        out.len() as u128 <= 2 * r * r * r,
        "cubic test set has {} words for {} rules",
        out.len(),
        r
    );
    out
}

/// Next sequence in odometer order, last position fastest.
fn advance(seq: &mut [usize], base: usize) -> bool {
    for i in (0..seq.len()).rev() {
        seq[i] += 1;
        if seq[i] < base {
            return true;
        }
        seq[i] = 0;
    }
    false
}
