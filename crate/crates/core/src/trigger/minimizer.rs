use std::sync::Arc;

use super::{fixed_point, MixedDeviation, TriggerDeviation};
use crate::error::{Error, Result};
use crate::regret::{dot, AffineImage, AffineMap, Cfr, ConvexHull, LinearUtility, RegretMatching, RegretMinimizer};
use crate::strategy::{best_response_value, Scope, SequenceFormStrategy};
use crate::treeplex::Treeplex;

/// The utility a deviation receives when the player's strategy is `point`
/// and its utility gradient is `gradient`: `φ ↦ ⟨gradient, φ(point)⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviationUtility {
    pub gradient: Vec<f64>,
    pub point: Vec<f64>,
    /// `⟨gradient, point⟩`.
    pub baseline: f64,
}

impl DeviationUtility {
    pub fn new(gradient: Vec<f64>, point: Vec<f64>) -> Result<Self> {
        if gradient.len() != point.len() {
            return Err(Error::DimensionMismatch {
                expected: point.len(),
                found: gradient.len(),
            });
        }
        let baseline = dot(&gradient, &point);
        Ok(DeviationUtility {
            gradient,
            point,
            baseline,
        })
    }

    /// Value of the trigger deviation for `infoset` with continuation `q̂`
    /// minus the `⟨ℓ_Î, q̂⟩` term: `⟨ℓ, x⟩ - Σ_{σ ∈ Σ_Î} ℓ[σ] x[σ]`.
    pub fn outside_value(&self, treeplex: &Treeplex, infoset: usize) -> f64 {
        let r = treeplex.infoset(infoset).subtree_seqs();
        self.baseline - dot(&self.gradient[r.clone()], &self.point[r])
    }
}

impl LinearUtility<TriggerDeviation> for DeviationUtility {
    fn value(&self, dev: &TriggerDeviation) -> f64 {
        let info = dev.treeplex.infoset(dev.infoset);
        let r = info.subtree_seqs();
        self.outside_value(&dev.treeplex, dev.infoset)
            + self.point[info.parent] * dot(&self.gradient[r], &dev.continuation)
    }
}

/// `q̂ ↦ φ_{Î, q̂}` for a fixed trigger infoset `Î`.
#[derive(Debug, Clone)]
pub struct TriggerMap {
    treeplex: Arc<Treeplex>,
    infoset: usize,
}

impl TriggerMap {
    pub fn new(treeplex: Arc<Treeplex>, infoset: usize) -> Self {
        TriggerMap { treeplex, infoset }
    }

    pub fn infoset(&self) -> usize {
        self.infoset
    }
}

impl AffineMap for TriggerMap {
    type Input = SequenceFormStrategy;
    type Output = TriggerDeviation;
    type Utility = DeviationUtility;

    fn apply(&self, q: &SequenceFormStrategy) -> TriggerDeviation {
        debug_assert_eq!(q.scope, Scope::Rooted(self.infoset));
        TriggerDeviation {
            treeplex: self.treeplex.clone(),
            infoset: self.infoset,
            continuation: q.values.clone(),
        }
    }

    /// `ℓ[σ] · x[σ(Î)]` for `σ ∈ Σ_Î`.
    fn pull_back(&self, u: &DeviationUtility) -> Result<Vec<f64>> {
        let n = self.treeplex.num_sequences();
        if u.gradient.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: u.gradient.len(),
            });
        }
        let info = self.treeplex.infoset(self.infoset);
        let reach = u.point[info.parent];
        Ok(u.gradient[info.subtree_seqs()]
            .iter()
            .map(|g| g * reach)
            .collect())
    }
}

/// Regret minimizer over convex combinations of coarse trigger deviations:
/// one CFR instance per trigger infoset, mixed by regret matching.
pub type PsiMinimizer = ConvexHull<AffineImage<Cfr, TriggerMap>>;

pub fn psi_minimizer(treeplex: Arc<Treeplex>) -> Result<PsiMinimizer> {
    let comps: Vec<_> = (0..treeplex.num_infosets())
        .map(|i| {
            AffineImage::new(
                Cfr::new(treeplex.clone(), Scope::Rooted(i)),
                TriggerMap::new(treeplex.clone(), i),
            )
        })
        .collect();
    let mixer = RegretMatching::new(comps.len())?;
    ConvexHull::new(comps, mixer)
}

/// Accumulates what is needed to report the regret of the deviation
/// minimizer against every fixed coarse trigger deviation.
#[derive(Debug, Clone)]
pub struct PhiRegretTracker {
    treeplex: Arc<Treeplex>,
    // Σ_t of the pulled-back utilities, one vector per trigger
    pulled: Vec<Vec<f64>>,
    // Σ_t of each trigger's outside value
    outside: Vec<f64>,
    // Σ_t ⟨ℓ^t, φ^t(x^t)⟩
    played: f64,
    rounds: usize,
}

impl PhiRegretTracker {
    pub fn new(treeplex: Arc<Treeplex>) -> Self {
        let pulled = treeplex
            .infosets()
            .iter()
            .map(|i| vec![0.0; i.subtree_seqs().len()])
            .collect();
        let outside = vec![0.0; treeplex.num_infosets()];
        PhiRegretTracker {
            treeplex,
            pulled,
            outside,
            played: 0.0,
            rounds: 0,
        }
    }

    fn record(&mut self, phi: &MixedDeviation, u: &DeviationUtility) -> Result<()> {
        let t = self.treeplex.clone();
        for (i, acc) in self.pulled.iter_mut().enumerate() {
            let w = TriggerMap::new(t.clone(), i).pull_back(u)?;
            for (a, v) in acc.iter_mut().zip(w) {
                *a += v;
            }
            self.outside[i] += u.outside_value(&t, i);
        }
        self.played += dot(&u.gradient, &phi.apply(&u.point)?);
        self.rounds += 1;
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// `max_{Î, q̂} Σ_t ⟨ℓ^t, φ_{Î,q̂}(x^t)⟩ - Σ_t ⟨ℓ^t, φ^t(x^t)⟩`.
    pub fn regret(&self) -> f64 {
        (0..self.treeplex.num_infosets())
            .map(|i| {
                let (br, _) = best_response_value(&self.treeplex, &self.pulled[i], Scope::Rooted(i))
                    .expect("accumulator sized to the subtree");
                br + self.outside[i]
            })
            .fold(f64::NEG_INFINITY, f64::max)
            - self.played
    }
}

/// No-coarse-trigger-regret minimizer over a player's sequence-form
/// polytope. Each round it asks a deviation minimizer for a mixed coarse
/// trigger deviation `φ` and plays a fixed point of `φ`.
#[derive(Debug, Clone)]
pub struct CtrMinimizer {
    treeplex: Arc<Treeplex>,
    // None when the player has no infosets
    psi: Option<PsiMinimizer>,
    last: Option<(MixedDeviation, Vec<f64>)>,
    tracker: Option<PhiRegretTracker>,
}

impl CtrMinimizer {
    pub fn new(treeplex: Arc<Treeplex>) -> Result<Self> {
        let psi = if treeplex.num_infosets() == 0 {
            None
        } else {
            Some(psi_minimizer(treeplex.clone())?)
        };
        Ok(CtrMinimizer {
            treeplex,
            psi,
            last: None,
            tracker: None,
        })
    }

    /// Also track the regret of the deviation minimizer (costs one pass over
    /// all trigger subtrees per round).
    pub fn with_tracker(mut self) -> Self {
        self.tracker = Some(PhiRegretTracker::new(self.treeplex.clone()));
        self
    }

    pub fn treeplex(&self) -> &Arc<Treeplex> {
        &self.treeplex
    }

    pub fn tracker(&self) -> Option<&PhiRegretTracker> {
        self.tracker.as_ref()
    }

    /// The deviation behind the current strategy, between `next_element` and
    /// `observe_utility`.
    pub fn last_deviation(&self) -> Option<&MixedDeviation> {
        self.last.as_ref().map(|(phi, _)| phi)
    }
}

impl RegretMinimizer for CtrMinimizer {
    type Element = SequenceFormStrategy;
    type Utility = [f64];

    fn next_element(&mut self) -> Result<SequenceFormStrategy> {
        let Some(psi) = self.psi.as_mut() else {
            return Ok(SequenceFormStrategy::full(vec![1.0]));
        };
        let phi = psi.next_element()?;
        let x = fixed_point(&phi);
        self.last = Some((phi, x.clone()));
        Ok(SequenceFormStrategy::full(x))
    }

    fn observe_utility(&mut self, gradient: &[f64]) -> Result<()> {
        let n = self.treeplex.num_sequences();
        if gradient.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: gradient.len(),
            });
        }
        let Some(psi) = self.psi.as_mut() else {
            return Ok(());
        };
        let (phi, x) = self
            .last
            .take()
            .ok_or(Error::Protocol("observe_utility called before next_element"))?;
        let u = DeviationUtility::new(gradient.to_vec(), x)?;
        if let Some(tr) = self.tracker.as_mut() {
            tr.record(&phi, &u)?;
        }
        psi.observe_utility(&u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::strategy::validate;

    #[test]
    fn deviation_value_matches_application() {
        let t = Arc::new(fixtures::example_treeplex());
        let x = vec![1.0, 0.3, 0.7, 0.1, 0.2, 0.25, 0.05];
        let g = vec![0.5, -1.0, 2.0, 3.0, -0.5, 1.5, 0.25];
        let u = DeviationUtility::new(g.clone(), x.clone()).unwrap();
        let dev = TriggerDeviation::new(t, 0, vec![0.4, 0.6, 0.1, 0.3, 0.2, 0.2]).unwrap();
        let direct = dot(&g, &dev.apply(&x).unwrap());
        assert!((u.value(&dev) - direct).abs() < 1e-12);
    }

    #[test]
    fn plays_valid_strategies() {
        let t = Arc::new(fixtures::example_treeplex());
        let mut m = CtrMinimizer::new(t.clone()).unwrap();
        for k in 0..20 {
            let x = m.next_element().unwrap();
            assert!(validate(&x, &t).unwrap());
            let g: Vec<f64> = (0..7).map(|s| ((s * 7 + k * 3) % 5) as f64 - 2.0).collect();
            m.observe_utility(&g).unwrap();
        }
    }

    #[test]
    fn protocol_errors() {
        let t = Arc::new(fixtures::example_treeplex());
        let mut m = CtrMinimizer::new(t).unwrap();
        assert!(matches!(m.observe_utility(&[0.0; 7]), Err(Error::Protocol(_))));
        assert!(matches!(
            m.observe_utility(&[0.0; 3]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
