use rayon::prelude::*;

use super::{LinearUtility, Mixable, Phase, RegretMatching, RegretMinimizer};
use crate::error::{Error, Result};

// below this many components the hull runs serially
const PAR_MIN_LEN: usize = 32;

/// Regret minimizer for the convex hull of several sets, given one
/// minimizer per set. Each round it mixes the components' outputs with
/// weights chosen by regret matching on the components' utilities.
#[derive(Debug, Clone)]
pub struct ConvexHull<M: RegretMinimizer> {
    components: Vec<M>,
    mixer: RegretMatching,
    last: Vec<M::Element>,
    last_weights: Vec<f64>,
    values: Vec<f64>,
    phase: Phase,
}

impl<M> ConvexHull<M>
where
    M: RegretMinimizer,
{
    pub fn new(components: Vec<M>, mixer: RegretMatching) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Arity("a convex hull needs at least one component".into()));
        }
        if mixer.dimension() != components.len() {
            return Err(Error::Arity(format!(
                "mixer over {} weights for {} components",
                mixer.dimension(),
                components.len()
            )));
        }
        let n = components.len();
        Ok(ConvexHull {
            components,
            mixer,
            last: Vec::new(),
            last_weights: Vec::new(),
            values: vec![0.0; n],
            phase: Phase::Ready,
        })
    }

    pub fn components(&self) -> &[M] {
        &self.components
    }

    /// Elements and weights output by the last call to `next_element`.
    pub fn last_output(&self) -> (&[M::Element], &[f64]) {
        (&self.last, &self.last_weights)
    }

    /// Utilities the mixer received in the last round.
    pub fn last_values(&self) -> &[f64] {
        &self.values
    }
}

impl<M> RegretMinimizer for ConvexHull<M>
where
    M: RegretMinimizer + Send,
    M::Element: Mixable + Send + Sync,
    M::Utility: LinearUtility<M::Element> + Sync,
{
    type Element = <M::Element as Mixable>::Mixed;
    type Utility = M::Utility;

    fn next_element(&mut self) -> Result<Self::Element> {
        self.phase.start()?;
        self.last = self
            .components
            .par_iter_mut()
            .with_min_len(PAR_MIN_LEN)
            .map(|c| c.next_element())
            .collect::<Result<Vec<_>>>()?;
        self.last_weights = self.mixer.next_element()?;
        Ok(M::Element::mix(&self.last_weights, &self.last))
    }

    fn observe_utility(&mut self, utility: &Self::Utility) -> Result<()> {
        self.phase.finish()?;
        self.components
            .par_iter_mut()
            .zip(self.last.par_iter())
            .zip(self.values.par_iter_mut())
            .with_min_len(PAR_MIN_LEN)
            .try_for_each(|((c, e), v)| {
                *v = utility.value(e);
                c.observe_utility(utility)
            })?;
        self.mixer.observe_utility(&self.values)
    }
}

/// An affine map `A` together with the adjoint action on utilities: for a
/// utility `u` on the output space, `pull_back(u)` is a linear utility `w` on
/// the input space with `u(A(x)) = ⟨w, x⟩ + c` for a constant `c`.
pub trait AffineMap {
    type Input;
    type Output;
    type Utility: ?Sized;

    fn apply(&self, x: &Self::Input) -> Self::Output;

    fn pull_back(&self, utility: &Self::Utility) -> Result<Vec<f64>>;
}

/// Regret minimizer for the image of a set under an affine map, built from
/// a minimizer for the set.
#[derive(Debug, Clone)]
pub struct AffineImage<M, A> {
    inner: M,
    map: A,
}

impl<M, A> AffineImage<M, A> {
    pub fn new(inner: M, map: A) -> Self {
        AffineImage { inner, map }
    }

    pub fn inner(&self) -> &M {
        &self.inner
    }

    pub fn map(&self) -> &A {
        &self.map
    }
}

impl<M, A> RegretMinimizer for AffineImage<M, A>
where
    M: RegretMinimizer<Utility = [f64]>,
    A: AffineMap<Input = M::Element>,
{
    type Element = A::Output;
    type Utility = A::Utility;

    fn next_element(&mut self) -> Result<A::Output> {
        let x = self.inner.next_element()?;
        Ok(self.map.apply(&x))
    }

    fn observe_utility(&mut self, utility: &A::Utility) -> Result<()> {
        let w = self.map.pull_back(utility)?;
        self.inner.observe_utility(&w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `x ↦ 2x + 1` on the simplex, pulled back as `u ↦ 2u`.
    struct Stretch;

    impl AffineMap for Stretch {
        type Input = Vec<f64>;
        type Output = Vec<f64>;
        type Utility = [f64];

        fn apply(&self, x: &Vec<f64>) -> Vec<f64> {
            x.iter().map(|v| 2.0 * v + 1.0).collect()
        }

        fn pull_back(&self, u: &[f64]) -> Result<Vec<f64>> {
            Ok(u.iter().map(|v| 2.0 * v).collect())
        }
    }

    #[test]
    fn arity_is_checked() {
        let comps = vec![RegretMatching::new(2).unwrap(); 3];
        assert!(matches!(
            ConvexHull::new(comps, RegretMatching::new(2).unwrap()),
            Err(Error::Arity(_))
        ));
        assert!(matches!(
            ConvexHull::<RegretMatching>::new(vec![], RegretMatching::new(1).unwrap()),
            Err(Error::Arity(_))
        ));
    }

    #[test]
    fn hull_alternation_is_enforced() {
        let comps = vec![RegretMatching::new(2).unwrap(); 2];
        let mut hull = ConvexHull::new(comps, RegretMatching::new(2).unwrap()).unwrap();
        assert!(matches!(hull.observe_utility(&[0.0, 0.0][..]), Err(Error::Protocol(_))));
        hull.next_element().unwrap();
        assert!(matches!(hull.next_element(), Err(Error::Protocol(_))));
    }

    #[test]
    fn affine_image_applies_and_pulls_back() {
        let mut m = AffineImage::new(RegretMatching::new(2).unwrap(), Stretch);
        assert_eq!(m.next_element().unwrap(), vec![2.0, 2.0]);
        m.observe_utility(&[1.0, 0.0][..]).unwrap();
        assert_eq!(m.inner().regrets(), &[1.0, -1.0]);
        assert_eq!(m.next_element().unwrap(), vec![3.0, 1.0]);
    }
}
