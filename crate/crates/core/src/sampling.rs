//! Random and exhaustive generation of strategies and deviations, for
//! property tests and the verification suites.

use std::sync::Arc;

use rand::Rng;

use crate::strategy::{from_behavioral, Scope};
use crate::treeplex::Treeplex;
use crate::trigger::MixedDeviation;

/// Random point of `[0,1)^k` normalized to the simplex; with probability
/// `zero_prob` each coordinate is zeroed first (at least one stays positive).
fn random_distribution<R: Rng + ?Sized>(rng: &mut R, k: usize, zero_prob: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..k)
        .map(|_| {
            if rng.gen_bool(zero_prob) {
                0.0
            } else {
                rng.gen::<f64>()
            }
        })
        .collect();
    if w.iter().all(|&x| x == 0.0) {
        w[rng.gen_range(0..k)] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Random sequence-form strategy over `scope`. Local distributions are
/// random with some actions given probability zero.
pub fn random_strategy<R: Rng + ?Sized>(treeplex: &Treeplex, scope: Scope, rng: &mut R) -> Vec<f64> {
    let range = scope.seq_range(treeplex);
    let mut behavior = vec![0.0; range.len()];
    for idx in scope.infoset_range(treeplex) {
        let info = treeplex.infoset(idx);
        let local = random_distribution(rng, info.num_actions, 0.2);
        for (s, p) in info.actions().zip(local) {
            behavior[s - range.start] = p;
        }
    }
    from_behavioral(treeplex, scope, &behavior).values
}

/// Random deterministic strategy over `scope`.
pub fn random_vertex<R: Rng + ?Sized>(treeplex: &Treeplex, scope: Scope, rng: &mut R) -> Vec<f64> {
    let range = scope.seq_range(treeplex);
    let mut behavior = vec![0.0; range.len()];
    for idx in scope.infoset_range(treeplex) {
        let info = treeplex.infoset(idx);
        behavior[info.first_seq + rng.gen_range(0..info.num_actions) - range.start] = 1.0;
    }
    from_behavioral(treeplex, scope, &behavior).values
}

/// Number of deterministic strategies over `scope`, saturating at `u128::MAX`.
pub fn vertex_count(treeplex: &Treeplex, scope: Scope) -> u128 {
    let range = scope.seq_range(treeplex);
    // product of the counts of the infosets directly below each sequence
    let mut below = vec![1u128; range.len()];
    let mut count = 1u128;
    for idx in scope.infoset_range(treeplex).rev() {
        let info = treeplex.infoset(idx);
        let here = info
            .actions()
            .fold(0u128, |acc, s| acc.saturating_add(below[s - range.start]));
        if scope == Scope::Rooted(idx) {
            count = here;
        } else {
            let p = &mut below[info.parent - range.start];
            *p = p.saturating_mul(here);
        }
    }
    if scope == Scope::Full {
        count = below[0];
    }
    count
}

/// All deterministic strategies over `scope`, in lexicographic order of the
/// chosen actions (infoset preorder, lowest action first).
pub fn enumerate_vertices(treeplex: &Treeplex, scope: Scope) -> Vec<Vec<f64>> {
    let range = scope.seq_range(treeplex);
    let infos: Vec<usize> = scope.infoset_range(treeplex).collect();
    let mut out = Vec::new();
    let mut cur = vec![0.0; range.len()];
    if scope == Scope::Full {
        cur[0] = 1.0;
    }
    fn rec(
        t: &Treeplex,
        scope: Scope,
        infos: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<f64>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if k == infos.len() {
            out.push(cur.clone());
            return;
        }
        let info = t.infoset(infos[k]);
        let reached = scope == Scope::Rooted(infos[k]) || cur[info.parent - start] > 0.0;
        if !reached {
            rec(t, scope, infos, k + 1, start, cur, out);
            return;
        }
        for s in info.actions() {
            cur[s - start] = 1.0;
            rec(t, scope, infos, k + 1, start, cur, out);
            cur[s - start] = 0.0;
        }
    }
    rec(treeplex, scope, &infos, 0, range.start, &mut cur, &mut out);
    out
}

/// Random mixed deviation. Each trigger weight is zero with probability
/// `zero_weight_prob`; continuations are random strategies of their subtrees.
pub fn random_mixed_deviation<R: Rng + ?Sized>(
    treeplex: &Arc<Treeplex>,
    zero_weight_prob: f64,
    rng: &mut R,
) -> MixedDeviation {
    let n = treeplex.num_infosets();
    let weights = random_distribution(rng, n, zero_weight_prob);
    let continuations = (0..n)
        .map(|i| random_strategy(treeplex, Scope::Rooted(i), rng))
        .collect();
    MixedDeviation::from_dense(treeplex.clone(), weights, continuations)
        .expect("random weights and continuations are valid")
}

/// Random utility vector with entries in `[-range/2, range/2)`.
pub fn random_utility<R: Rng + ?Sized>(len: usize, range: f64, rng: &mut R) -> Vec<f64> {
    (0..len).map(|_| (rng.gen::<f64>() - 0.5) * range).collect()
}
