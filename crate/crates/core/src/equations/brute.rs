use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use super::{Assignment, EquationError, Term, WordEquation};

const SEARCH_LIMIT: u128 = 10_000_000;

/// Every assignment with values of length at most `max_len` satisfying all
/// equations, found by trying every vector of value lengths.
///
/// Unlike [`super::solve`] this accepts any formula, including repeated
/// variables and overlapping variable sequences.
pub fn brute_force_solve<V>(
    formula: &[WordEquation<V>],
    max_len: usize,
) -> Result<BTreeSet<Assignment<V>>, EquationError>
where
    V: Clone + Ord + Hash + Debug,
{
    let mut vars: Vec<V> = Vec::new();
    let mut index: HashMap<V, usize> = HashMap::new();
    for eq in formula {
        for v in eq.variables() {
            if !index.contains_key(&v) {
                index.insert(v.clone(), vars.len());
                vars.push(v);
            }
        }
    }
    let space = (max_len as u128 + 1).checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if space > SEARCH_LIMIT {
        return Err(EquationError::SearchSpace(space));
    }
    let rhs: Vec<Vec<char>> = formula.iter().map(|e| e.rhs.chars().collect()).collect();
    let mut out = BTreeSet::new();
    let mut lens = vec![0usize; vars.len()];
    loop {
        let mut values: Vec<Option<&[char]>> = vec![None; vars.len()];
        let ok = formula.iter().zip(&rhs).all(|(eq, w)| {
            let mut pos = 0usize;
            for t in &eq.lhs {
                match t {
                    Term::Text(s) => {
                        for c in s.chars() {
                            if w.get(pos) != Some(&c) {
                                return false;
                            }
                            pos += 1;
                        }
                    }
                    Term::Var(v) => {
                        let i = index[v];
                        let end = pos + lens[i];
                        if end > w.len() {
                            return false;
                        }
                        let slice = &w[pos..end];
                        match values[i] {
                            Some(prev) if prev != slice => return false,
                            Some(_) => {}
                            None => values[i] = Some(slice),
                        }
                        pos = end;
                    }
                }
            }
            pos == w.len()
        });
        if ok {
            out.insert(
                vars.iter()
                    .zip(&values)
                    .map(|(v, s)| (v.clone(), s.map(|s| s.iter().collect()).unwrap_or_default()))
                    .collect(),
            );
        }
        // next length vector
        let mut i = 0;
        loop {
            if i == lens.len() {
                return Ok(out);
            }
            lens[i] += 1;
            if lens[i] <= max_len {
                break;
            }
            lens[i] = 0;
            i += 1;
        }
    }
}
