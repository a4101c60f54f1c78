//! Self-checks that can run from a release binary: fixed-point residual
//! sweeps, regret bounds against adversarial utilities, the gap identity on
//! small games, and the golden game-size table.
//!
//! Every failure message carries the seed and sample index needed to
//! reproduce it.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{brute_force_gap, efcce_gap, run_dynamics, RunConfig, Schedule};
use crate::error::Result;
use crate::game::Game;
use crate::games::{generate, GameSpec};
use crate::regret::{dot, Cfr, RegretMatching, RegretMinimizer};
use crate::sampling::{enumerate_vertices, random_mixed_deviation, random_strategy, random_utility};
use crate::strategy::{best_response_value, validate_values, Scope};
use crate::treeplex::Treeplex;
use crate::trigger::{fixed_point_impl, psi_minimizer, DeviationUtility, MixedDeviation, TriggerDeviation};

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    FixedPoint,
    Regret,
    Gap,
    Sizes,
}

impl Suite {
    /// Suites run when none is named.
    pub const DEFAULT: [Suite; 3] = [Suite::FixedPoint, Suite::Regret, Suite::Gap];

    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "fixed-point" => Some(Suite::FixedPoint),
            "regret" => Some(Suite::Regret),
            "gap" => Some(Suite::Gap),
            "sizes" => Some(Suite::Sizes),
            _ => None,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::FixedPoint => "fixed-point",
            Suite::Regret => "regret",
            Suite::Gap => "gap",
            Suite::Sizes => "sizes",
        })
    }
}

/// Deliberate bugs, to check that the suites catch them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// The fixed point leaves subtrees with zero cumulative weight empty
    /// instead of uniform.
    SkipUniformBranch,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random mixed deviations per game in the fixed-point suite.
    pub deviations: usize,
    /// Adversarial rounds in the regret suite.
    pub rounds: usize,
    pub vertex_cap: u128,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            deviations: 1000,
            rounds: 500,
            vertex_cap: crate::dynamics::DEFAULT_VERTEX_CAP,
            fault: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: usize,
    pub failed: usize,
    /// First failing check, with its inputs.
    pub counterexample: Option<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite,
            checks: 0,
            failed: 0,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    match suite {
        Suite::FixedPoint => fixed_point_suite(opts),
        Suite::Regret => regret_suite(opts),
        Suite::Gap => gap_suite(opts),
        Suite::Sizes => sizes_suite(),
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn kuhn2() -> Result<Game> {
    generate(&GameSpec::Kuhn2 { ranks: 3 })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Fixed points of random mixed deviations on Kuhn3 and Goofspiel3. A third
/// of the samples have many zero weights so the uniform branch is exercised.
fn fixed_point_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::FixedPoint);
    let games = [
        ("kuhn3 ranks 4", GameSpec::Kuhn3 { ranks: 4 }),
        ("goofspiel3 ranks 3", GameSpec::Goofspiel3 { ranks: 3 }),
    ];
    for (stream, (name, spec)) in games.iter().enumerate() {
        let game = generate(spec)?;
        for (player, t) in game.treeplexes().iter().enumerate() {
            let mut rng = rng_for(opts.seed, (stream * 16 + player) as u64);
            for k in 0..opts.deviations {
                let zero_prob = [0.0, 0.5, 0.95][k % 3];
                let phi = random_mixed_deviation(t, zero_prob, &mut rng);
                let q = fixed_point_impl(&phi, opts.fault == Some(Fault::SkipUniformBranch));
                let residual = max_abs_diff(&phi.apply(&q)?, &q);
                let member = validate_values(&q, Scope::Full, t)?;
                report.check(residual <= RESIDUAL_TOL && member, || {
                    format!(
                        "{name}, player {}, seed {}, sample {k}: residual {residual:e}, \
                         in polytope: {member}\n  weights {}\n  q* {}",
                        player + 1,
                        opts.seed,
                        fmt_vec(&phi.weights),
                        fmt_vec(&q)
                    )
                });
            }
        }
    }
    Ok(report)
}

/// Half the rounds are uniformly random, the other half push against the
/// current iterate: high utility where it puts little mass.
fn adversarial_utility(rng: &mut ChaCha8Rng, round: usize, current: &[f64], range: f64) -> Vec<f64> {
    if round.is_multiple_of(2) {
        random_utility(current.len(), range, rng)
    } else {
        current
            .iter()
            .map(|x| (range * (0.5 - x) + rng.gen_range(-0.01..0.01)).clamp(-range / 2.0, range / 2.0))
            .collect()
    }
}

fn rm_regret(m: usize, rounds: usize, range: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut rm = RegretMatching::new(m)?;
    let mut cum = vec![0.0; m];
    let mut got = 0.0;
    for r in 0..rounds {
        let x = rm.next_element()?;
        let u = adversarial_utility(rng, r, &x, range);
        got += dot(&u, &x);
        cum.iter_mut().zip(&u).for_each(|(c, v)| *c += v);
        rm.observe_utility(&u)?;
    }
    Ok(cum.iter().copied().fold(f64::NEG_INFINITY, f64::max) - got)
}

fn cfr_regret(t: &Arc<Treeplex>, scope: Scope, rounds: usize, range: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut cfr = Cfr::new(t.clone(), scope);
    let mut cum = vec![0.0; scope.len(t)];
    let mut got = 0.0;
    for r in 0..rounds {
        let x = cfr.next_element()?.values;
        let u = adversarial_utility(rng, r, &x, range);
        got += dot(&u, &x);
        cum.iter_mut().zip(&u).for_each(|(c, v)| *c += v);
        cfr.observe_utility(&u)?;
    }
    Ok(best_response_value(t, &cum, scope)?.0 - got)
}

/// Regret of the deviation minimizer against the best fixed coarse trigger
/// deviation, found by applying every `(trigger, deterministic continuation)`
/// pair to every recorded point.
fn psi_regret(t: &Arc<Treeplex>, rounds: usize, range: f64, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut psi = psi_minimizer(t.clone())?;
    let mut history: Vec<(Vec<f64>, Vec<f64>)> = Vec::with_capacity(rounds);
    let mut got = 0.0;
    for r in 0..rounds {
        let phi: MixedDeviation = psi.next_element()?;
        let x = random_strategy(t, Scope::Full, rng);
        let played = phi.apply(&x)?;
        let l = adversarial_utility(rng, r, &played, range);
        got += dot(&l, &played);
        psi.observe_utility(&DeviationUtility::new(l.clone(), x.clone())?)?;
        history.push((l, x));
    }
    let mut best = f64::NEG_INFINITY;
    for trig in 0..t.num_infosets() {
        for cont in enumerate_vertices(t, Scope::Rooted(trig)) {
            let dev = TriggerDeviation::new(t.clone(), trig, cont)?;
            let mut total = 0.0;
            for (l, x) in &history {
                total += dot(l, &dev.apply(x)?);
            }
            best = best.max(total);
        }
    }
    Ok(best - got)
}

/// Regret matching, CFR on every scope, and the deviation minimizer against
/// adversarial utilities with entries in an interval of width `U = 1`.
fn regret_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Regret);
    let range = 1.0;
    let rounds = opts.rounds;
    let sqrt_t = (rounds as f64).sqrt();
    let games = [("kuhn2", kuhn2()?), ("kuhn3 ranks 4", generate(&GameSpec::Kuhn3 { ranks: 4 })?)];
    for (stream, (name, game)) in games.iter().enumerate() {
        for (player, t) in game.treeplexes().iter().enumerate() {
            let ctx = |what: &str| format!("{name}, player {}, seed {}, {rounds} rounds, {what}", player + 1, opts.seed);
            let mut rng = rng_for(opts.seed, (stream * 16 + player) as u64);

            let mut arities: Vec<usize> = t.infosets().iter().map(|i| i.num_actions).collect();
            arities.push(t.num_infosets());
            arities.sort_unstable();
            arities.dedup();
            for m in arities {
                let r = rm_regret(m, rounds, range, &mut rng)?;
                let bound = range * m as f64 * sqrt_t;
                report.check(r <= bound, || format!("{}: regret {r} > bound {bound}", ctx(&format!("regret matching over {m} actions"))));
            }

            let scopes = std::iter::once(Scope::Full).chain((0..t.num_infosets()).map(Scope::Rooted));
            for scope in scopes {
                let r = cfr_regret(t, scope, rounds, range, &mut rng)?;
                let bound = range * scope.len(t) as f64 * sqrt_t;
                report.check(r <= bound, || format!("{}: regret {r} > bound {bound}", ctx(&format!("CFR on {scope:?}"))));
            }

            let r = psi_regret(t, rounds, range, &mut rng)?;
            let bound = 2.0 * range * t.num_sequences() as f64 * sqrt_t;
            report.check(r <= bound, || format!("{}: regret {r} > bound {bound}", ctx("trigger deviation minimizer")));
            report.notes.push(format!(
                "{name} player {}: deviation regret {r:.4} (bound {bound:.1})",
                player + 1
            ));
        }
    }
    Ok(report)
}

/// On Kuhn2, the accumulated gap must agree with brute-force enumeration and
/// with the minimizers' own regret, and respect the rate bound.
fn gap_suite(opts: &VerifyOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Gap);
    let game = kuhn2()?;
    for t in [1, 10, 100] {
        let mut cfg = RunConfig::new(t);
        cfg.schedule = Schedule::Dyadic;
        cfg.record_iterates = true;
        cfg.track_regret = true;
        cfg.seed = opts.seed;
        let log = run_dynamics(&game, &cfg)?;
        let gap = efcce_gap(&log.accumulator)?.overall;
        let brute = brute_force_gap(&game, log.iterates.as_deref().unwrap_or_default(), opts.vertex_cap)?;
        report.check((gap - brute).abs() <= IDENTITY_TOL, || {
            format!("kuhn2, T = {t}: accumulated gap {gap} vs brute force {brute}")
        });
        let regrets = log.regrets.unwrap_or_default();
        let from_regret = regrets.iter().copied().fold(f64::NEG_INFINITY, f64::max) / t as f64;
        report.check((gap - from_regret).abs() <= IDENTITY_TOL, || {
            format!("kuhn2, T = {t}: gap {gap} vs max regret / T {from_regret} (regrets {})", fmt_vec(&regrets))
        });
        let bound = rate_bound(&game);
        for cp in &log.checkpoints {
            let b = bound / (cp.iter as f64).sqrt();
            report.check(cp.gap <= b, || format!("kuhn2, iteration {}: gap {} above {b}", cp.iter, cp.gap));
        }
        report.notes.push(format!("kuhn2 T = {t}: gap {gap:e}, brute force {brute:e}"));
    }
    Ok(report)
}

/// `2 U max_i |Σ_i|`, where `U` is the largest payoff range; the gap after
/// `T` rounds is at most this over `√T`.
pub fn rate_bound(game: &Game) -> f64 {
    let u = game.payoff_range().iter().copied().fold(0.0, f64::max);
    let sigma = game.treeplexes().iter().map(|t| t.num_sequences()).max().unwrap_or(1);
    2.0 * u * sigma as f64
}

/// One row of the published size table.
#[derive(Debug, Clone)]
pub struct SizeRow {
    pub name: &'static str,
    pub spec: GameSpec,
    /// `(infosets, sequences)` per player.
    pub expected: Vec<(usize, usize)>,
}

pub fn size_table() -> Vec<SizeRow> {
    vec![
        SizeRow {
            name: "kuhn3 ranks 4",
            spec: GameSpec::Kuhn3 { ranks: 4 },
            expected: vec![(16, 33); 3],
        },
        SizeRow {
            name: "goofspiel3 ranks 3",
            spec: GameSpec::Goofspiel3 { ranks: 3 },
            expected: vec![(837, 934); 3],
        },
        SizeRow {
            name: "leduc3 ranks 3",
            spec: GameSpec::Leduc3 { ranks: 3 },
            expected: vec![(3294, 7687); 3],
        },
        SizeRow {
            name: "battleship 3x2 rounds 3",
            spec: GameSpec::battleship(3, 2, 3),
            expected: vec![(1413, 2965), (1873, 4101)],
        },
    ]
}

fn sizes_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new(Suite::Sizes);
    for row in size_table() {
        let got = generate(&row.spec)?.sizes();
        report.check(got == row.expected, || {
            format!("{}: sizes {:?}, expected {:?}", row.name, got, row.expected)
        });
        report.notes.push(format!("{}: {:?}", row.name, got));
    }
    // the published battleship counts are reproduced on a 2x2 board
    let small = generate(&GameSpec::battleship(2, 2, 3))?.sizes();
    report.notes.push(format!("battleship 2x2 rounds 3: {small:?}"));
    Ok(report)
}
