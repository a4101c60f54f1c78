use std::sync::Arc;

use super::{regret_matching_into, Phase, RegretMinimizer};
use crate::error::{Error, Result};
use crate::strategy::{Scope, SequenceFormStrategy};
use crate::treeplex::Treeplex;

/// Counterfactual regret minimization over the sequence-form polytope of a
/// scope, with regret matching at every infoset.
///
/// Utilities are gradients indexed over the scope's sequences. Each
/// sequence's counterfactual value is its own utility plus the values of the
/// infosets directly below it, so no reach weighting is needed.
#[derive(Debug, Clone)]
pub struct Cfr {
    treeplex: Arc<Treeplex>,
    scope: Scope,
    offset: usize,
    regrets: Vec<f64>,
    // local action probabilities from the last call to next_element
    behavior: Vec<f64>,
    // scratch for counterfactual values
    values: Vec<f64>,
    phase: Phase,
}

impl Cfr {
    pub fn new(treeplex: Arc<Treeplex>, scope: Scope) -> Self {
        let range = scope.seq_range(&treeplex);
        let n = range.len();
        Cfr {
            offset: range.start,
            treeplex,
            scope,
            regrets: vec![0.0; n],
            behavior: vec![0.0; n],
            values: vec![0.0; n],
            phase: Phase::Ready,
        }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    pub fn treeplex(&self) -> &Arc<Treeplex> {
        &self.treeplex
    }

    /// Cumulative regret of each sequence against its infoset.
    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }
}

impl RegretMinimizer for Cfr {
    type Element = SequenceFormStrategy;
    type Utility = [f64];

    fn next_element(&mut self) -> Result<SequenceFormStrategy> {
        self.phase.start()?;
        let t = &*self.treeplex;
        let off = self.offset;
        let mut out = vec![0.0; self.regrets.len()];
        if self.scope == Scope::Full {
            out[0] = 1.0;
        }
        for idx in self.scope.infoset_range(t) {
            let info = t.infoset(idx);
            let acts = info.first_seq - off..info.first_seq - off + info.num_actions;
            regret_matching_into(&self.regrets[acts.clone()], &mut self.behavior[acts.clone()]);
            let mass = if self.scope == Scope::Rooted(idx) {
                1.0
            } else {
                out[info.parent - off]
            };
            for k in acts {
                out[k] = mass * self.behavior[k];
            }
        }
        Ok(SequenceFormStrategy {
            scope: self.scope,
            values: out,
        })
    }

    fn observe_utility(&mut self, utility: &[f64]) -> Result<()> {
        if utility.len() != self.regrets.len() {
            return Err(Error::DimensionMismatch {
                expected: self.regrets.len(),
                found: utility.len(),
            });
        }
        self.phase.finish()?;
        let t = &*self.treeplex;
        let off = self.offset;
        self.values.copy_from_slice(utility);
        for idx in self.scope.infoset_range(t).rev() {
            let info = t.infoset(idx);
            let acts = info.first_seq - off..info.first_seq - off + info.num_actions;
            let v: f64 = acts
                .clone()
                .map(|k| self.behavior[k] * self.values[k])
                .sum();
            for k in acts {
                self.regrets[k] += self.values[k] - v;
            }
            if self.scope != Scope::Rooted(idx) {
                self.values[info.parent - off] += v;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn chain_by_hand() {
        // R {1, 2}, S {3, 4} below 1
        let t = Arc::new(fixtures::chain_treeplex());
        let mut cfr = Cfr::new(t, Scope::Full);
        let q = cfr.next_element().unwrap();
        assert_eq!(q.values, vec![1.0, 0.5, 0.5, 0.25, 0.25]);
        cfr.observe_utility(&[0.0, 0.0, 1.0, 2.0, 0.0]).unwrap();
        // S: v = 1, regrets (1, -1); R: cf(1) = 1, cf(2) = 1, v = 1, regrets 0
        assert_eq!(cfr.regrets(), &[0.0, 0.0, 0.0, 1.0, -1.0]);
        let q = cfr.next_element().unwrap();
        assert_eq!(q.values, vec![1.0, 0.5, 0.5, 0.5, 0.0]);
        cfr.observe_utility(&[0.0, 0.0, 0.0, 0.0, 4.0]).unwrap();
        // S: v = 0, regrets (1, 3); R: cf(1) = 0, cf(2) = 0
        assert_eq!(cfr.regrets(), &[0.0, 0.0, 0.0, 1.0, 3.0]);
        let q = cfr.next_element().unwrap();
        assert_eq!(q.values, vec![1.0, 0.5, 0.5, 0.125, 0.375]);
    }

    #[test]
    fn rooted_scope_ignores_outside() {
        let t = Arc::new(fixtures::example_treeplex());
        // infoset B: sequences 3, 4
        let mut cfr = Cfr::new(t, Scope::Rooted(1));
        assert_eq!(cfr.next_element().unwrap().values, vec![0.5, 0.5]);
        cfr.observe_utility(&[0.0, 1.0]).unwrap();
        assert_eq!(cfr.next_element().unwrap().values, vec![0.0, 1.0]);
        assert!(cfr.observe_utility(&[0.0; 7]).is_err());
    }
}
