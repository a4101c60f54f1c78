use efcce::dynamics::{brute_force_gap, efcce_gap, log, DEFAULT_VERTEX_CAP};
use efcce::fixtures;
use efcce::games::{generate, GameSpec};
use efcce::sampling::random_strategy;
use efcce::strategy::uniform_in;
use efcce::verify::rate_bound;
use efcce::{all_gradients, fixed_point, run_dynamics, Game, GapAccumulator, MixedDeviation, RunConfig, Scope, Schedule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kuhn2() -> Game {
    generate(&GameSpec::Kuhn2 { ranks: 3 }).unwrap()
}

fn config(t: usize) -> RunConfig {
    let mut c = RunConfig::new(t);
    c.schedule = Schedule::Dyadic;
    c.record_iterates = true;
    c.track_regret = true;
    c
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn gap_matches_brute_force_and_regret() {
    let game = kuhn2();
    for t in [1, 10, 100, 500] {
        let run = run_dynamics(&game, &config(t)).unwrap();
        let gap = efcce_gap(&run.accumulator).unwrap();
        let regrets = run.regrets.unwrap();
        assert!((gap.overall - max(&regrets) / t as f64).abs() <= 1e-9, "T = {t}");
        for (g, r) in gap.per_player.iter().zip(&regrets) {
            assert!((g - r / t as f64).abs() <= 1e-9);
        }
        if t <= 100 {
            let brute = brute_force_gap(&game, run.iterates.as_ref().unwrap(), DEFAULT_VERTEX_CAP).unwrap();
            assert!((gap.overall - brute).abs() <= 1e-9, "T = {t}: {} vs {brute}", gap.overall);
        }
    }
}

#[test]
fn gap_matches_brute_force_on_other_games() {
    for spec in [GameSpec::Goofspiel3 { ranks: 2 }, GameSpec::battleship(2, 1, 1)] {
        let game = generate(&spec).unwrap();
        let run = run_dynamics(&game, &config(20)).unwrap();
        let gap = efcce_gap(&run.accumulator).unwrap().overall;
        let brute = brute_force_gap(&game, run.iterates.as_ref().unwrap(), DEFAULT_VERTEX_CAP).unwrap();
        assert!((gap - brute).abs() <= 1e-9, "{spec}: {gap} vs {brute}");
    }
}

#[test]
fn first_iterates_are_fixed_points_of_uniform_deviations() {
    let game = generate(&GameSpec::Kuhn3 { ranks: 4 }).unwrap();
    let run = run_dynamics(&game, &config(1)).unwrap();
    let first = &run.iterates.unwrap()[0];
    for (x, t) in first.iter().zip(game.treeplexes()) {
        let n = t.num_infosets();
        let conts = (0..n).map(|i| uniform_in(t, Scope::Rooted(i)).values).collect();
        let phi = MixedDeviation::from_dense(t.clone(), vec![1.0 / n as f64; n], conts).unwrap();
        assert_eq!(x, &fixed_point(&phi));
    }
}

#[test]
fn runs_are_bit_identical() {
    let game = generate(&GameSpec::Kuhn3 { ranks: 3 }).unwrap();
    let mut c = config(200);
    c.schedule = Schedule::Every(7);
    let a = run_dynamics(&game, &c).unwrap();
    let b = run_dynamics(&game, &c).unwrap();
    assert_eq!(a.iterates, b.iterates);
    let gaps = |r: &efcce::RunLog| r.checkpoints.iter().map(|c| (c.iter, c.gap.to_bits())).collect::<Vec<_>>();
    assert_eq!(gaps(&a), gaps(&b));
}

#[test]
fn kuhn3_gap_drops_tenfold() {
    let game = generate(&GameSpec::Kuhn3 { ranks: 4 }).unwrap();
    let mut c = RunConfig::new(5000);
    c.schedule = Schedule::Every(10);
    let first = run_dynamics(&game, &RunConfig::new(1)).unwrap().checkpoints[0].gap;
    let run = run_dynamics(&game, &c).unwrap();
    assert_eq!(run.checkpoints.len(), 500);
    let bound = rate_bound(&game);
    for cp in &run.checkpoints {
        assert!(cp.gap <= bound / (cp.iter as f64).sqrt());
    }
    assert!(run.checkpoints.last().unwrap().gap <= first / 10.0);
}

#[test]
fn memory_does_not_grow_without_iterates() {
    let game = kuhn2();
    let run = run_dynamics(&game, &RunConfig::new(50)).unwrap();
    assert!(run.iterates.is_none());
    assert_eq!(run.accumulator.iterations(), 50);
}

fn random_profiles(game: &Game, rounds: usize, seed: u64) -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..rounds)
        .map(|_| {
            game.treeplexes()
                .iter()
                .map(|t| random_strategy(t, Scope::Full, &mut rng))
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accumulated_gap_equals_brute_force(seed in any::<u64>(), rounds in 1usize..6) {
        let game = fixtures::example_game();
        let profiles = random_profiles(&game, rounds, seed);
        let mut acc = GapAccumulator::new(&game);
        for p in &profiles {
            acc.record(p, &all_gradients(&game, p).unwrap()).unwrap();
        }
        let gap = efcce_gap(&acc).unwrap().overall;
        let brute = brute_force_gap(&game, &profiles, DEFAULT_VERTEX_CAP).unwrap();
        prop_assert!((gap - brute).abs() <= 1e-9);
    }

    #[test]
    fn repeating_a_profile_leaves_the_gap_unchanged(seed in any::<u64>(), reps in 1usize..20) {
        let game = kuhn2();
        let p = random_profiles(&game, 1, seed).remove(0);
        let grads = all_gradients(&game, &p).unwrap();
        let mut once = GapAccumulator::new(&game);
        once.record(&p, &grads).unwrap();
        let mut many = GapAccumulator::new(&game);
        for _ in 0..reps {
            many.record(&p, &grads).unwrap();
        }
        let a = efcce_gap(&once).unwrap().overall;
        let b = efcce_gap(&many).unwrap().overall;
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
    }

    #[test]
    fn csv_round_trips(rows in proptest::collection::vec((any::<f64>(), any::<u32>(), proptest::collection::vec(any::<f64>(), 3)), 0..20)) {
        let cps: Vec<log::Checkpoint> = rows
            .into_iter()
            .enumerate()
            .filter(|(_, (g, _, pp))| g.is_finite() && pp.iter().all(|x| x.is_finite()))
            .map(|(i, (gap, ms, per_player))| log::Checkpoint { iter: i + 1, elapsed_ms: ms as u64, gap, per_player })
            .collect();
        let text = log::to_csv(3, &cps);
        let (n, back) = log::parse_csv(&text).unwrap();
        prop_assert_eq!(n, 3);
        prop_assert_eq!(back, cps);
    }

    #[test]
    fn csv_parser_never_panics(text in "\\PC*") {
        let _ = log::parse_csv(&text);
    }
}
