//! Sequence-form strategies, polytope membership, and best responses.

use crate::error::{Error, Result};
use crate::treeplex::{Treeplex, EMPTY_SEQ};

/// Absolute tolerance for polytope membership.
pub const POLYTOPE_TOL: f64 = 1e-9;

/// Which part of a treeplex a vector is indexed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    /// All sequences, including the empty one.
    Full,
    /// Sequences at or below the given infoset, indexed from its first sequence.
    Rooted(usize),
}

impl Scope {
    /// Global sequence index range covered by this scope.
    pub fn seq_range(self, treeplex: &Treeplex) -> std::ops::Range<usize> {
        match self {
            Scope::Full => 0..treeplex.num_sequences(),
            Scope::Rooted(i) => treeplex.infoset(i).subtree_seqs(),
        }
    }

    /// Infosets covered by this scope.
    pub fn infoset_range(self, treeplex: &Treeplex) -> std::ops::Range<usize> {
        match self {
            Scope::Full => 0..treeplex.num_infosets(),
            Scope::Rooted(i) => i..treeplex.infoset(i).subtree_end_infoset,
        }
    }

    pub fn len(self, treeplex: &Treeplex) -> usize {
        self.seq_range(treeplex).len()
    }

    /// Offset subtracted from global indices to index vectors in this scope.
    pub fn offset(self, treeplex: &Treeplex) -> usize {
        self.seq_range(treeplex).start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SequenceFormStrategy {
    pub scope: Scope,
    pub values: Vec<f64>,
}

impl SequenceFormStrategy {
    pub fn full(values: Vec<f64>) -> Self {
        SequenceFormStrategy {
            scope: Scope::Full,
            values,
        }
    }

    pub fn rooted(infoset: usize, values: Vec<f64>) -> Self {
        SequenceFormStrategy {
            scope: Scope::Rooted(infoset),
            values,
        }
    }
}

/// Mass entering an infoset's actions: the parent value, or 1 for the root of a rooted scope.
#[inline]
fn inflow(values: &[f64], parent: usize, scope_start: usize, is_scope_root: bool) -> f64 {
    if is_scope_root {
        1.0
    } else {
        values[parent - scope_start]
    }
}

/// Whether `strategy` lies in the sequence-form polytope of its scope, within
/// [`POLYTOPE_TOL`].
pub fn validate(strategy: &SequenceFormStrategy, treeplex: &Treeplex) -> Result<bool> {
    validate_values(&strategy.values, strategy.scope, treeplex)
}

/// [`validate`] for a bare vector indexed over `scope`.
pub fn validate_values(v: &[f64], scope: Scope, treeplex: &Treeplex) -> Result<bool> {
    let range = scope.seq_range(treeplex);
    if v.len() != range.len() {
        return Err(Error::DimensionMismatch {
            expected: range.len(),
            found: v.len(),
        });
    }
    if v.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Ok(false);
    }
    if scope == Scope::Full && (v[EMPTY_SEQ] - 1.0).abs() > POLYTOPE_TOL {
        return Ok(false);
    }
    let root = match scope {
        Scope::Full => None,
        Scope::Rooted(i) => Some(i),
    };
    for idx in scope.infoset_range(treeplex) {
        let info = treeplex.infoset(idx);
        let mass: f64 = info.actions().map(|s| v[s - range.start]).sum();
        let expected = inflow(v, info.parent, range.start, root == Some(idx));
        if (mass - expected).abs() > POLYTOPE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sequence form of the behavioral strategy that is uniform at every infoset.
pub fn uniform_strategy(treeplex: &Treeplex) -> SequenceFormStrategy {
    uniform_in(treeplex, Scope::Full)
}

/// Behaviorally uniform strategy restricted to `scope`.
pub fn uniform_in(treeplex: &Treeplex, scope: Scope) -> SequenceFormStrategy {
    let range = scope.seq_range(treeplex);
    let mut values = vec![0.0; range.len()];
    if scope == Scope::Full {
        values[EMPTY_SEQ] = 1.0;
    }
    let root = match scope {
        Scope::Full => None,
        Scope::Rooted(i) => Some(i),
    };
    for idx in scope.infoset_range(treeplex) {
        let info = treeplex.infoset(idx);
        let mass = inflow(&values, info.parent, range.start, root == Some(idx));
        let share = mass / info.num_actions as f64;
        for s in info.actions() {
            values[s - range.start] = share;
        }
    }
    SequenceFormStrategy { scope, values }
}

/// Sequence form of a behavioral strategy given as per-sequence local
/// probabilities (`behavior[(I,a)]` is the probability of `a` at `I`).
pub fn from_behavioral(treeplex: &Treeplex, scope: Scope, behavior: &[f64]) -> SequenceFormStrategy {
    let range = scope.seq_range(treeplex);
    assert_eq!(behavior.len(), range.len(), "behavior must be indexed over the scope");
    let mut values = vec![0.0; range.len()];
    if scope == Scope::Full {
        values[EMPTY_SEQ] = 1.0;
    }
    let root = match scope {
        Scope::Full => None,
        Scope::Rooted(i) => Some(i),
    };
    for idx in scope.infoset_range(treeplex) {
        let info = treeplex.infoset(idx);
        let mass = inflow(&values, info.parent, range.start, root == Some(idx));
        for s in info.actions() {
            values[s - range.start] = mass * behavior[s - range.start];
        }
    }
    SequenceFormStrategy { scope, values }
}

/// Maximizes `⟨gradient, q⟩` over the polytope of `root`. Returns the value
/// and an attaining deterministic strategy; ties go to the lowest sequence
/// index.
pub fn best_response_value(
    treeplex: &Treeplex,
    gradient: &[f64],
    root: Scope,
) -> Result<(f64, SequenceFormStrategy)> {
    let range = root.seq_range(treeplex);
    if gradient.len() != range.len() {
        return Err(Error::DimensionMismatch {
            expected: range.len(),
            found: gradient.len(),
        });
    }
    let start = range.start;
    let infos = root.infoset_range(treeplex);
    // continuation value below each sequence
    let mut below = gradient.to_vec();
    let mut choice = vec![0usize; infos.len()];
    let mut value = 0.0;
    for idx in infos.clone().rev() {
        let info = treeplex.infoset(idx);
        let mut best = f64::NEG_INFINITY;
        let mut arg = info.first_seq;
        for s in info.actions() {
            let v = below[s - start];
            if v > best {
                best = v;
                arg = s;
            }
        }
        choice[idx - infos.start] = arg;
        if root == Scope::Rooted(idx) {
            value = best;
        } else {
            below[info.parent - start] += best;
        }
    }
    if root == Scope::Full {
        value = below[EMPTY_SEQ];
    }

    let mut values = vec![0.0; range.len()];
    if root == Scope::Full {
        values[EMPTY_SEQ] = 1.0;
    }
    for idx in infos.clone() {
        let info = treeplex.infoset(idx);
        let reached = root == Scope::Rooted(idx) || values[info.parent - start] > 0.0;
        if reached {
            values[choice[idx - infos.start] - start] = 1.0;
        }
    }
    Ok((value, SequenceFormStrategy { scope: root, values }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn uniform_on_example() {
        let t = fixtures::example_treeplex();
        let q = uniform_strategy(&t);
        assert_eq!(q.values, vec![1.0, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]);
        assert!(validate(&q, &t).unwrap());
    }

    #[test]
    fn single_infoset_uniform() {
        let t = fixtures::single_infoset(5);
        let q = uniform_strategy(&t);
        assert_eq!(&q.values[1..], &[0.2; 5]);
    }

    #[test]
    fn zeros_do_not_validate() {
        let t = fixtures::example_treeplex();
        let q = SequenceFormStrategy::full(vec![0.0; 7]);
        assert!(!validate(&q, &t).unwrap());
    }

    #[test]
    fn wrong_length_is_error() {
        let t = fixtures::example_treeplex();
        let q = SequenceFormStrategy::full(vec![1.0; 3]);
        assert_eq!(
            validate(&q, &t),
            Err(Error::DimensionMismatch {
                expected: 7,
                found: 3
            })
        );
    }

    #[test]
    fn rooted_validation() {
        let t = fixtures::example_treeplex();
        // rooted at B (index 1): sequences 3, 4
        let good = SequenceFormStrategy::rooted(1, vec![0.3, 0.7]);
        let bad = SequenceFormStrategy::rooted(1, vec![0.3, 0.3]);
        assert!(validate(&good, &t).unwrap());
        assert!(!validate(&bad, &t).unwrap());
        let root = uniform_in(&t, Scope::Rooted(0));
        assert_eq!(root.values, vec![0.5, 0.5, 0.25, 0.25, 0.25, 0.25]);
        assert!(validate(&root, &t).unwrap());
    }

    #[test]
    fn flow_violation_detected() {
        let t = fixtures::example_treeplex();
        let mut q = uniform_strategy(&t);
        q.values[3] += 1e-6;
        assert!(!validate(&q, &t).unwrap());
        q.values[3] -= 1e-6 - 1e-11;
        assert!(validate(&q, &t).unwrap());
    }

    #[test]
    fn best_response_single_infoset() {
        let t = fixtures::single_infoset(2);
        let (v, q) = best_response_value(&t, &[2.0, 5.0], Scope::Rooted(0)).unwrap();
        assert_eq!(v, 5.0);
        assert_eq!(q.values, vec![0.0, 1.0]);
    }

    #[test]
    fn best_response_ties_pick_lowest() {
        let t = fixtures::example_treeplex();
        let (v, q) = best_response_value(&t, &[0.0; 7], Scope::Full).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(q.values, vec![1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!(validate(&q, &t).unwrap());
    }

    #[test]
    fn best_response_adds_subtrees() {
        let t = fixtures::example_treeplex();
        // empty seq 0.5; seq 1 then B->4 (2.0) and C->5 (1.0) beats seq 2 (2.5)
        let g = [0.5, 0.0, 2.5, 0.0, 2.0, 1.0, -1.0];
        let (v, q) = best_response_value(&t, &g, Scope::Full).unwrap();
        assert_eq!(v, 3.5);
        assert_eq!(q.values, vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
    }
}
