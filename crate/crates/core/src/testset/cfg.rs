use std::fmt::Debug;

use super::TestSetError;

/// Index of a nonterminal inside its [`Cfg`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NtId(pub u32);

impl NtId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GSym<T> {
    T(T),
    N(NtId),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule<T> {
    pub lhs: NtId,
    pub rhs: Vec<GSym<T>>,
}

impl<T> Rule<T> {
    pub fn nonterminals(&self) -> impl Iterator<Item = (usize, NtId)> + '_ {
        self.rhs.iter().enumerate().filter_map(|(i, s)| match s {
            GSym::N(n) => Some((i, *n)),
            GSym::T(_) => None,
        })
    }
}

/// A context-free grammar; rules are kept in insertion order, which is the
/// fixed total order used for every tie-break.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cfg<T> {
    names: Vec<String>,
    rules: Vec<Rule<T>>,
    start: NtId,
}

impl<T: Clone + Eq + Debug> Cfg<T> {
    pub fn new(names: Vec<String>, start: NtId) -> Self {
        assert!(start.index() < names.len(), "start symbol must be declared");
        Cfg {
            names,
            rules: Vec::new(),
            start,
        }
    }

    pub fn add_rule(&mut self, lhs: NtId, rhs: Vec<GSym<T>>) {
        assert!(lhs.index() < self.names.len(), "undeclared nonterminal");
        for s in &rhs {
            if let GSym::N(n) = s {
                assert!(n.index() < self.names.len(), "undeclared nonterminal");
            }
        }
        self.rules.push(Rule { lhs, rhs });
    }

    pub fn rules(&self) -> &[Rule<T>] {
        &self.rules
    }

    pub fn start(&self) -> NtId {
        self.start
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, n: NtId) -> &str {
        &self.names[n.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `|G|`: the sum over rules of `1 + |rhs|`.
    pub fn size(&self) -> usize {
        self.rules.iter().map(|r| 1 + r.rhs.len()).sum()
    }

    /// Every rule mentions at most one nonterminal.
    pub fn is_linear(&self) -> bool {
        self.rules.iter().all(|r| r.nonterminals().count() <= 1)
    }

    /// A minimal word of every nonterminal (`None` when unproductive):
    /// shortest length, ties resolved by the first rule in rule order that
    /// reaches the minimum, recursively.
    pub fn minimal_words(&self) -> Vec<Option<Vec<T>>> {
        let n = self.names.len();
        let mut len: Vec<Option<usize>> = vec![None; n];
        loop {
            let mut changed = false;
            for r in &self.rules {
                let total = r
                    .rhs
                    .iter()
                    .map(|s| match s {
                        GSym::T(_) => Some(1),
                        GSym::N(m) => len[m.index()],
                    })
                    .sum::<Option<usize>>();
                if let Some(total) = total {
                    if len[r.lhs.index()].is_none_or(|l| total < l) {
                        len[r.lhs.index()] = Some(total);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        // Finalise nonterminals by increasing length. A rule may only be
        // chosen once its nonterminals are finalised, which rules out cycles
        // through unit or empty rules; otherwise the first minimal rule wins.
        let mut choice: Vec<Option<usize>> = vec![None; n];
        let mut lengths: Vec<usize> = len.iter().flatten().copied().collect();
        lengths.sort_unstable();
        lengths.dedup();
        for l in lengths {
            loop {
                let mut progress = false;
                for a in 0..n {
                    if choice[a].is_some() || len[a] != Some(l) {
                        continue;
                    }
                    let pick = self.rules.iter().position(|r| {
                        r.lhs.index() == a
                            && r.rhs
                                .iter()
                                .map(|s| match s {
                                    GSym::T(_) => Some(1),
                                    GSym::N(m) => choice[m.index()].and(len[m.index()]),
                                })
                                .sum::<Option<usize>>()
                                == Some(l)
                    });
                    if pick.is_some() {
                        choice[a] = pick;
                        progress = true;
                    }
                }
                if !progress {
                    break;
                }
            }
        }
        // chosen rules only refer to earlier finalised nonterminals
        fn build<T: Clone>(
            g: &[Rule<T>],
            choice: &[Option<usize>],
            a: NtId,
            out: &mut Vec<T>,
        ) {
            let r = &g[choice[a.index()].expect("productive")];
            for s in &r.rhs {
                match s {
                    GSym::T(t) => out.push(t.clone()),
                    GSym::N(m) => build(g, choice, *m, out),
                }
            }
        }
        (0..n)
            .map(|a| {
                choice[a].map(|_| {
                    let mut w = Vec::new();
                    build(&self.rules, &choice, NtId(a as u32), &mut w);
                    w
                })
            })
            .collect()
    }

    /// Nonterminals that derive no terminal word.
    pub fn unproductive(&self) -> Vec<NtId> {
        self.minimal_words()
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_none())
            .map(|(i, _)| NtId(i as u32))
            .collect()
    }
}

/// `Lin(G)`: each rule with `n ≥ 2` nonterminals is replaced by `n` rules,
/// the `i`-th keeping only its `i`-th nonterminal and substituting the
/// minimal words of the others. Also returns the minimal words used.
pub fn linearize<T: Clone + Eq + Debug>(g: &Cfg<T>) -> Result<(Cfg<T>, Vec<Vec<T>>), TestSetError> {
    let minimal = g.minimal_words();
    if let Some(i) = minimal.iter().position(Option::is_none) {
        return Err(TestSetError::Unproductive(g.names[i].clone()));
    }
    let minimal: Vec<Vec<T>> = minimal.into_iter().map(|w| w.expect("checked")).collect();
    let mut lin = Cfg::new(g.names.clone(), g.start);
    for r in &g.rules {
        let nts: Vec<usize> = r.nonterminals().map(|(i, _)| i).collect();
        if nts.len() <= 1 {
            lin.rules.push(r.clone());
            continue;
        }
        for keep in &nts {
            let mut rhs = Vec::with_capacity(r.rhs.len());
            for (i, s) in r.rhs.iter().enumerate() {
                match s {
                    GSym::N(m) if i != *keep => {
                        rhs.extend(minimal[m.index()].iter().cloned().map(GSym::T))
                    }
                    other => rhs.push(other.clone()),
                }
            }
            lin.rules.push(Rule { lhs: r.lhs, rhs });
        }
    }
    Ok((lin, minimal))
}
