use super::{dot, Phase, RegretMinimizer};
use crate::error::{Error, Result};

/// Writes the regret-matching distribution for `regrets` into `out`: the
/// positive parts normalized, or uniform when no regret is positive.
pub fn regret_matching_into(regrets: &[f64], out: &mut [f64]) {
    debug_assert_eq!(regrets.len(), out.len());
    let mut total = 0.0;
    for (o, &r) in out.iter_mut().zip(regrets) {
        *o = r.max(0.0);
        total += *o;
    }
    if total > 0.0 {
        for o in out.iter_mut() {
            *o /= total;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// Regret matching over the probability simplex of dimension `m`.
#[derive(Debug, Clone)]
pub struct RegretMatching {
    regrets: Vec<f64>,
    last: Vec<f64>,
    phase: Phase,
}

impl RegretMatching {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Arity("regret matching needs at least one action".into()));
        }
        Ok(RegretMatching {
            regrets: vec![0.0; m],
            last: vec![0.0; m],
            phase: Phase::Ready,
        })
    }

    pub fn dimension(&self) -> usize {
        self.regrets.len()
    }

    pub fn regrets(&self) -> &[f64] {
        &self.regrets
    }
}

impl RegretMinimizer for RegretMatching {
    type Element = Vec<f64>;
    type Utility = [f64];

    fn next_element(&mut self) -> Result<Vec<f64>> {
        self.phase.start()?;
        regret_matching_into(&self.regrets, &mut self.last);
        Ok(self.last.clone())
    }

    fn observe_utility(&mut self, utility: &[f64]) -> Result<()> {
        if utility.len() != self.regrets.len() {
            return Err(Error::DimensionMismatch {
                expected: self.regrets.len(),
                found: utility.len(),
            });
        }
        self.phase.finish()?;
        let v = dot(utility, &self.last);
        for (r, u) in self.regrets.iter_mut().zip(utility) {
            *r += u - v;
        }
        Ok(())
    }
}
