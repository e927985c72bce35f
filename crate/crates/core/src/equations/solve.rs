use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use super::{split_at_sep, EquationError, SolutionAutomaton, WordEquation};

/// A value for every variable of a formula.
pub type Assignment<V> = BTreeMap<V, String>;

/// Solves a sequential formula: a conjunction of equations where any two
/// equations either share no variable or have the same variable sequence.
///
/// Returns `None` when unsatisfiable. Otherwise each group of equations is
/// solved by intersecting their automata and reading the shortest accepted
/// word; the result is checked against every equation before returning.
pub fn solve<V>(formula: &[WordEquation<V>]) -> Result<Option<Assignment<V>>, EquationError>
where
    V: Clone + Ord + Hash + Debug,
{
    let mut groups: Vec<(Vec<V>, Vec<&WordEquation<V>>)> = Vec::new();
    let mut group_of: HashMap<V, usize> = HashMap::new();
    for eq in formula {
        eq.check_sequential()?;
        let vars = eq.variables();
        if vars.is_empty() {
            if eq.satisfied_by(|_| None) {
                continue;
            }
            return Ok(None);
        }
        match group_of.get(&vars[0]) {
            Some(g) => {
                if groups[*g].0 != vars {
                    return Err(EquationError::OverlappingSequences(format!("{:?}", vars[0])));
                }
                groups[*g].1.push(eq);
            }
            None => {
                for v in &vars {
                    if group_of.contains_key(v) {
                        return Err(EquationError::OverlappingSequences(format!("{v:?}")));
                    }
                }
                for v in &vars {
                    group_of.insert(v.clone(), groups.len());
                }
                groups.push((vars, vec![eq]));
            }
        }
    }

    let mut assignment = Assignment::new();
    for (vars, eqs) in &groups {
        let mut acc = SolutionAutomaton::from_equation(eqs[0])?;
        for eq in &eqs[1..] {
            if acc.is_empty() {
                break;
            }
            acc = acc.intersect(&SolutionAutomaton::from_equation(eq)?)?;
        }
        let Some(word) = acc.shortest_word() else {
            return Ok(None);
        };
        for (v, value) in vars.iter().zip(split_at_sep(&word)) {
            assignment.insert(v.clone(), value);
        }
    }
    for eq in formula {
        assert!(
            eq.satisfied_by(|v| assignment.get(v).cloned()),
            "solver produced an assignment violating {eq:?}"
        );
    }
    Ok(Some(assignment))
}
