use std::sync::Arc;

use efcce::games::{generate, GameSpec};
use efcce::sampling::random_mixed_deviation;
use efcce::strategy::{uniform_in, validate_values};
use efcce::{fixed_point, MixedDeviation, Scope, Treeplex};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn residual(phi: &MixedDeviation, q: &[f64]) -> f64 {
    phi.apply(q)
        .unwrap()
        .iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Solves `(M - I) q = 0` with `q[∅] = 1` by least squares on the dense
/// matrix. Where the cumulative weight is zero `M` is the identity and the
/// rows carry no information, so the uniform split is imposed there.
fn linear_system_oracle(t: &Treeplex, phi: &MixedDeviation) -> Vec<f64> {
    let n = t.num_sequences();
    let m = phi.matrix();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs = Vec::new();
    for (s, mrow) in m.iter().enumerate() {
        let mut r = mrow.clone();
        r[s] -= 1.0;
        rows.push(r);
        rhs.push(0.0);
    }
    let mut root = vec![0.0; n];
    root[0] = 1.0;
    rows.push(root);
    rhs.push(1.0);
    for (i, info) in t.infosets().iter().enumerate() {
        if phi.cumulative_weight(i) == 0.0 {
            for s in info.actions() {
                let mut r = vec![0.0; n];
                r[s] = info.num_actions as f64;
                r[info.parent] = -1.0;
                rows.push(r);
                rhs.push(0.0);
            }
        }
    }
    let a = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    let b = DVector::from_vec(rhs);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-14).unwrap().iter().copied().collect()
}

fn sweep(spec: GameSpec, count: usize, seed: u64) {
    let game = generate(&spec).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in game.treeplexes() {
        for k in 0..count {
            let phi = random_mixed_deviation(t, [0.0, 0.5, 0.95][k % 3], &mut rng);
            let q = fixed_point(&phi);
            assert!(residual(&phi, &q) <= 1e-9, "{spec} sample {k}");
            assert!(validate_values(&q, Scope::Full, t).unwrap(), "{spec} sample {k}");
        }
    }
}

#[test]
fn residual_on_kuhn3() {
    sweep(GameSpec::Kuhn3 { ranks: 3 }, 1000, 1);
    sweep(GameSpec::Kuhn3 { ranks: 4 }, 1000, 2);
}

#[test]
fn residual_on_goofspiel3() {
    sweep(GameSpec::Goofspiel3 { ranks: 3 }, 1000, 3);
}

#[test]
fn residual_on_leduc3() {
    sweep(GameSpec::Leduc3 { ranks: 2 }, 100, 4);
}

#[test]
fn matches_linear_system_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [GameSpec::Kuhn2 { ranks: 3 }, GameSpec::Kuhn3 { ranks: 3 }] {
        let game = generate(&spec).unwrap();
        for t in game.treeplexes() {
            for k in 0..60 {
                let phi = random_mixed_deviation(t, [0.0, 0.5, 0.9][k % 3], &mut rng);
                let q = fixed_point(&phi);
                let oracle = linear_system_oracle(t, &phi);
                for (a, b) in q.iter().zip(&oracle) {
                    assert!((a - b).abs() <= 1e-7, "{spec} sample {k}: {q:?} vs {oracle:?}");
                }
            }
        }
    }
}

#[test]
fn uniform_deviation_has_tiny_residual() {
    let game = generate(&GameSpec::Kuhn3 { ranks: 4 }).unwrap();
    for t in game.treeplexes() {
        let n = t.num_infosets();
        let conts = (0..n).map(|i| uniform_in(t, Scope::Rooted(i)).values).collect();
        let phi = MixedDeviation::from_dense(t.clone(), vec![1.0 / n as f64; n], conts).unwrap();
        assert!(residual(&phi, &fixed_point(&phi)) <= 1e-12);
    }
}

#[test]
fn root_trigger_fixed_point_copies_continuation() {
    let game = generate(&GameSpec::Kuhn2 { ranks: 3 }).unwrap();
    let t: &Arc<Treeplex> = game.treeplex(0);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let root = t.roots()[0];
    let cont = efcce::sampling::random_strategy(t, Scope::Rooted(root), &mut rng);
    let n = t.num_infosets();
    let mut w = vec![0.0; n];
    w[root] = 1.0;
    let mut conts = vec![Vec::new(); n];
    conts[root] = cont.clone();
    let q = fixed_point(&MixedDeviation::from_dense(t.clone(), w, conts).unwrap());
    let info = t.infoset(root);
    assert_eq!(&q[info.subtree_seqs()], &cont[..]);
    // other roots are behaviorally uniform
    for &r in t.roots().iter().filter(|&&r| r != root) {
        let other = t.infoset(r);
        let uni = uniform_in(t, Scope::Rooted(r)).values;
        assert_eq!(&q[other.subtree_seqs()], &uni[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fixed_point_property(seed in any::<u64>(), zero in 0.0f64..1.0) {
        let game = generate(&GameSpec::Kuhn2 { ranks: 3 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for t in game.treeplexes() {
            let phi = random_mixed_deviation(t, zero, &mut rng);
            let q = fixed_point(&phi);
            prop_assert!(residual(&phi, &q) <= 1e-9);
            prop_assert!(validate_values(&q, Scope::Full, t).unwrap());
        }
    }
}
