//! Coarse trigger deviations, their convex combinations, and the fixed
//! points of those combinations.
//!
//! A coarse trigger deviation for infoset `Î` with continuation `q̂` (a
//! strategy for the subtree rooted at `Î`) leaves a strategy alone outside
//! that subtree and replaces the play inside it by `q̂`, scaled by the
//! probability of the sequence leading to `Î`.

mod minimizer;

pub use minimizer::{
    psi_minimizer, CtrMinimizer, DeviationUtility, PhiRegretTracker, PsiMinimizer, TriggerMap,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::regret::Mixable;
use crate::strategy::{validate_values, Scope};
use crate::treeplex::{Treeplex, EMPTY_SEQ};

/// Weights are accepted if they sum to one within this tolerance.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TriggerDeviation {
    pub treeplex: Arc<Treeplex>,
    pub infoset: usize,
    /// Strategy for the subtree of `infoset`, indexed from its first sequence.
    pub continuation: Vec<f64>,
}

impl TriggerDeviation {
    pub fn new(treeplex: Arc<Treeplex>, infoset: usize, continuation: Vec<f64>) -> Result<Self> {
        if infoset >= treeplex.num_infosets() {
            return Err(Error::ScopeMismatch(format!(
                "infoset {infoset} out of range for a treeplex with {} infosets",
                treeplex.num_infosets()
            )));
        }
        let want = treeplex.infoset(infoset).subtree_seqs().len();
        if continuation.len() != want {
            return Err(Error::DimensionMismatch {
                expected: want,
                found: continuation.len(),
            });
        }
        Ok(TriggerDeviation {
            treeplex,
            infoset,
            continuation,
        })
    }

    /// `φ(q)`: equal to `q` outside the subtree, `q̂[σ] · q[σ(Î)]` inside.
    pub fn apply(&self, q: &[f64]) -> Result<Vec<f64>> {
        check_len(&self.treeplex, q)?;
        let info = self.treeplex.infoset(self.infoset);
        let mut out = q.to_vec();
        let reach = q[info.parent];
        for (o, c) in out[info.subtree_seqs()].iter_mut().zip(&self.continuation) {
            *o = c * reach;
        }
        Ok(out)
    }

    /// Dense matrix of the map, `m[row][col]`, for cross-checking.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.treeplex.num_sequences();
        let info = self.treeplex.infoset(self.infoset);
        let range = info.subtree_seqs();
        let mut m = vec![vec![0.0; n]; n];
        for (s, row) in m.iter_mut().enumerate() {
            if range.contains(&s) {
                row[info.parent] = self.continuation[s - range.start];
            } else {
                row[s] = 1.0;
            }
        }
        m
    }
}

/// A convex combination of coarse trigger deviations, stored densely: one
/// weight and one continuation per infoset. Infosets with weight zero may
/// have an empty continuation.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedDeviation {
    pub treeplex: Arc<Treeplex>,
    pub weights: Vec<f64>,
    pub continuations: Vec<Vec<f64>>,
}

impl MixedDeviation {
    /// Combines `(weight, deviation)` terms; several terms for one infoset
    /// merge into one with the weighted average continuation.
    pub fn new(treeplex: Arc<Treeplex>, terms: &[(f64, TriggerDeviation)]) -> Result<Self> {
        MixedDeviation::from_terms(treeplex, terms.iter().map(|(w, d)| (*w, d)), true)
    }

    // `checked` is off only for outputs of the deviation minimizer, whose
    // weights sum to one up to rounding accumulated over many triggers.
    fn from_terms<'a, I>(treeplex: Arc<Treeplex>, terms: I, checked: bool) -> Result<Self>
    where
        I: Iterator<Item = (f64, &'a TriggerDeviation)> + Clone,
    {
        let n = treeplex.num_infosets();
        let mut weights = vec![0.0; n];
        let mut continuations: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut count = vec![0usize; n];
        for (w, dev) in terms.clone() {
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::InvalidSpec(format!("negative or non-finite weight {w}")));
            }
            if dev.treeplex.num_sequences() != treeplex.num_sequences() || dev.infoset >= n {
                return Err(Error::ScopeMismatch(
                    "deviation belongs to a different treeplex".into(),
                ));
            }
            let i = dev.infoset;
            count[i] += 1;
            weights[i] += w;
            if count[i] == 1 {
                continuations[i] = dev.continuation.clone();
            }
        }
        // merge repeated infosets: Σ w q / Σ w
        for i in (0..n).filter(|&i| count[i] > 1 && weights[i] > 0.0) {
            let mut acc = vec![0.0; continuations[i].len()];
            for (w, dev) in terms.clone().filter(|(_, d)| d.infoset == i) {
                for (a, c) in acc.iter_mut().zip(&dev.continuation) {
                    *a += w * c;
                }
            }
            let total = weights[i];
            continuations[i] = acc.into_iter().map(|a| a / total).collect();
        }
        if !checked {
            return Ok(MixedDeviation {
                treeplex,
                weights,
                continuations,
            });
        }
        MixedDeviation::from_dense(treeplex, weights, continuations)
    }

    pub fn from_dense(
        treeplex: Arc<Treeplex>,
        weights: Vec<f64>,
        continuations: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = treeplex.num_infosets();
        if weights.len() != n || continuations.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: weights.len().min(continuations.len()),
            });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidSpec(format!("weights sum to {total}, not 1")));
        }
        for (i, (w, c)) in weights.iter().zip(&continuations).enumerate() {
            let want = treeplex.infoset(i).subtree_seqs().len();
            if *w > 0.0 && c.len() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    found: c.len(),
                });
            }
            if !c.is_empty() && !validate_values(c, Scope::Rooted(i), &treeplex)? {
                return Err(Error::InvalidSpec(format!(
                    "continuation of trigger {i} is not a strategy for its subtree"
                )));
            }
        }
        Ok(MixedDeviation {
            treeplex,
            weights,
            continuations,
        })
    }

    /// Total weight of the triggers at or above infoset `i`.
    pub fn cumulative_weight(&self, i: usize) -> f64 {
        self.treeplex
            .ancestors(i)
            .iter()
            .map(|&a| self.weights[a])
            .sum()
    }

    /// `Σ_Î λ[Î] φ_Î(q)`, in `O(|Σ| · depth)`.
    pub fn apply(&self, q: &[f64]) -> Result<Vec<f64>> {
        let t = &*self.treeplex;
        check_len(t, q)?;
        let mut out = vec![0.0; q.len()];
        out[EMPTY_SEQ] = q[EMPTY_SEQ];
        for (i, info) in t.infosets().iter().enumerate() {
            let d = self.cumulative_weight(i);
            for s in info.actions() {
                out[s] = (1.0 - d) * q[s];
            }
            for &a in t.ancestors(i) {
                let w = self.weights[a];
                if w == 0.0 {
                    continue;
                }
                let trig = t.infoset(a);
                let scale = w * q[trig.parent];
                let cont = &self.continuations[a];
                for s in info.actions() {
                    out[s] += scale * cont[s - trig.first_seq];
                }
            }
        }
        Ok(out)
    }

    /// Dense matrix `Σ λ[Î] M_Î`, for cross-checking.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.treeplex.num_sequences();
        let mut m = vec![vec![0.0; n]; n];
        for (i, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let dev = TriggerDeviation {
                treeplex: self.treeplex.clone(),
                infoset: i,
                continuation: self.continuations[i].clone(),
            };
            for (row, drow) in m.iter_mut().zip(dev.matrix()) {
                for (x, y) in row.iter_mut().zip(drow) {
                    *x += w * y;
                }
            }
        }
        m
    }
}

impl Mixable for TriggerDeviation {
    type Mixed = MixedDeviation;

    fn mix(weights: &[f64], items: &[Self]) -> MixedDeviation {
        let treeplex = items[0].treeplex.clone();
        MixedDeviation::from_terms(treeplex, weights.iter().copied().zip(items), false)
            .expect("components come from one treeplex")
    }
}

fn check_len(t: &Treeplex, q: &[f64]) -> Result<()> {
    if q.len() != t.num_sequences() {
        return Err(Error::DimensionMismatch {
            expected: t.num_sequences(),
            found: q.len(),
        });
    }
    Ok(())
}

/// A sequence-form strategy `q` with `φ(q) = q`.
///
/// Sequences are filled top-down. At an infoset whose cumulative trigger
/// weight `d` is positive, `q[σ] = (1/d) Σ_{I' ⪯ I} λ[I'] q̂_{I'}[σ] q[σ(I')]`;
/// where `d` is exactly zero the map is the identity there, and the parent
/// mass is split uniformly.
pub fn fixed_point(phi: &MixedDeviation) -> Vec<f64> {
    fixed_point_impl(phi, false)
}

// `skip_uniform` leaves subtrees with zero cumulative weight empty; only the
// verification suite's fault injection sets it.
pub(crate) fn fixed_point_impl(phi: &MixedDeviation, skip_uniform: bool) -> Vec<f64> {
    let t = &*phi.treeplex;
    let mut q = vec![0.0; t.num_sequences()];
    q[EMPTY_SEQ] = 1.0;
    for (i, info) in t.infosets().iter().enumerate() {
        let d = phi.cumulative_weight(i);
        if d == 0.0 {
            if skip_uniform {
                continue;
            }
            let share = q[info.parent] / info.num_actions as f64;
            for s in info.actions() {
                q[s] = share;
            }
            continue;
        }
        for s in info.actions() {
            q[s] = 0.0;
        }
        for &a in t.ancestors(i) {
            let w = phi.weights[a];
            if w == 0.0 {
                continue;
            }
            let trig = t.infoset(a);
            let scale = w * q[trig.parent];
            let cont = &phi.continuations[a];
            for s in info.actions() {
                q[s] += scale * cont[s - trig.first_seq];
            }
        }
        for s in info.actions() {
            q[s] /= d;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::strategy::{uniform_strategy, validate, SequenceFormStrategy};

    fn example() -> Arc<Treeplex> {
        Arc::new(fixtures::example_treeplex())
    }

    #[test]
    fn deviation_at_b_to_action_four() {
        let t = example();
        // trigger B (sequences 3, 4), always play 4
        let dev = TriggerDeviation::new(t, 1, vec![0.0, 1.0]).unwrap();
        let pi = [1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0];
        let out = dev.apply(&pi).unwrap();
        assert_eq!(out, vec![1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
    }

    #[test]
    fn untriggered_strategy_is_unchanged() {
        let t = example();
        let dev = TriggerDeviation::new(t, 1, vec![0.0, 1.0]).unwrap();
        // plays 2 at A, never reaches B
        let pi = [1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0];
        let out = dev.apply(&pi).unwrap();
        assert_eq!(out, vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn wrong_dimensions() {
        let t = example();
        assert!(TriggerDeviation::new(t.clone(), 1, vec![1.0]).is_err());
        assert!(TriggerDeviation::new(t.clone(), 7, vec![1.0]).is_err());
        let dev = TriggerDeviation::new(t, 1, vec![1.0, 0.0]).unwrap();
        assert!(dev.apply(&[1.0; 3]).is_err());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let t = example();
        let dev = TriggerDeviation::new(t.clone(), 1, vec![1.0, 0.0]).unwrap();
        assert!(MixedDeviation::new(t.clone(), &[(0.5, dev.clone())]).is_err());
        assert!(MixedDeviation::new(t, &[(0.5, dev.clone()), (0.5, dev)]).is_ok());
    }

    #[test]
    fn fixed_point_with_root_trigger() {
        let t = example();
        let root = TriggerDeviation::new(t.clone(), 0, vec![0.2, 0.8, 0.2, 0.0, 0.1, 0.1]).unwrap();
        let phi = MixedDeviation::new(t.clone(), &[(1.0, root.clone())]).unwrap();
        let q = fixed_point(&phi);
        let mut want = vec![1.0];
        want.extend_from_slice(&root.continuation);
        assert_eq!(q, want);
        assert!(validate(&SequenceFormStrategy::full(q), &t).unwrap());
    }

    #[test]
    fn zero_weight_subtrees_are_uniform() {
        let t = example();
        let dev = TriggerDeviation::new(t.clone(), 1, vec![0.0, 1.0]).unwrap();
        let phi = MixedDeviation::new(t.clone(), &[(1.0, dev)]).unwrap();
        let q = fixed_point(&phi);
        assert_eq!(q, vec![1.0, 0.5, 0.5, 0.0, 0.5, 0.25, 0.25]);
        let fq = phi.apply(&q).unwrap();
        assert_eq!(fq, q);
        // uniform strategy is not fixed
        let u = uniform_strategy(&t).values;
        assert_ne!(phi.apply(&u).unwrap(), u);
    }
}
