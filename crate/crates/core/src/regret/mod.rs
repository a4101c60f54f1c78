//! Online linear optimization: regret matching, counterfactual regret
//! minimization, and the regret circuits used to build minimizers over
//! convex hulls and affine images of sets.

mod cfr;
mod circuits;
mod rm;

pub use cfr::Cfr;
pub use circuits::{AffineImage, AffineMap, ConvexHull};
pub use rm::{regret_matching_into, RegretMatching};

use crate::error::Result;

/// A device that repeatedly outputs a point of some set and is then told the
/// linear utility of that round. Calls must alternate, starting with
/// [`next_element`](RegretMinimizer::next_element).
pub trait RegretMinimizer {
    type Element;
    type Utility: ?Sized;

    fn next_element(&mut self) -> Result<Self::Element>;

    fn observe_utility(&mut self, utility: &Self::Utility) -> Result<()>;
}

/// Linear utility functions that can be evaluated on elements of type `E`.
pub trait LinearUtility<E> {
    fn value(&self, element: &E) -> f64;
}

impl LinearUtility<Vec<f64>> for [f64] {
    fn value(&self, element: &Vec<f64>) -> f64 {
        dot(self, element)
    }
}

impl LinearUtility<crate::strategy::SequenceFormStrategy> for [f64] {
    fn value(&self, element: &crate::strategy::SequenceFormStrategy) -> f64 {
        dot(self, &element.values)
    }
}

/// Elements that can be combined into a convex combination.
pub trait Mixable: Sized {
    type Mixed;

    /// `Σ_k weights[k] * items[k]`; `weights` is a probability vector.
    fn mix(weights: &[f64], items: &[Self]) -> Self::Mixed;
}

impl Mixable for Vec<f64> {
    type Mixed = Vec<f64>;

    fn mix(weights: &[f64], items: &[Self]) -> Vec<f64> {
        let mut out = vec![0.0; items.first().map_or(0, Vec::len)];
        for (w, x) in weights.iter().zip(items) {
            for (o, v) in out.iter_mut().zip(x) {
                *o += w * v;
            }
        }
        out
    }
}

/// Tracks whether a minimizer is waiting for a utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) enum Phase {
    #[default]
    Ready,
    Awaiting,
}

impl Phase {
    pub(crate) fn start(&mut self) -> Result<()> {
        if *self == Phase::Awaiting {
            return Err(crate::Error::Protocol(
                "next_element called twice without observe_utility",
            ));
        }
        *self = Phase::Awaiting;
        Ok(())
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if *self == Phase::Ready {
            return Err(crate::Error::Protocol(
                "observe_utility called before next_element",
            ));
        }
        *self = Phase::Ready;
        Ok(())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
