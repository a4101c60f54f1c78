//! Self-play of one coarse-trigger-regret minimizer per player, with the
//! EFCCE gap of the empirical frequency of play measured along the way.

mod gap;
pub mod log;

pub use gap::{brute_force_gap, efcce_gap, Gap, GapAccumulator, DEFAULT_VERTEX_CAP};
pub use log::Checkpoint;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{all_gradients, Game};
use crate::regret::RegretMinimizer;
use crate::trigger::CtrMinimizer;

/// When the gap is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// Every `k` iterations, and after the last one.
    Every(usize),
    /// At iterations 1, 2, 4, 8, ... and after the last one.
    Dyadic,
}

impl Schedule {
    pub fn is_checkpoint(self, iter: usize, total: usize) -> bool {
        iter == total
            || match self {
                Schedule::Every(k) => iter.is_multiple_of(k),
                Schedule::Dyadic => iter.is_power_of_two(),
            }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub iterations: usize,
    pub schedule: Schedule,
    /// Unused by the dynamics, which are deterministic; carried into logs.
    pub seed: u64,
    /// Keep every round's profile (needed by [`brute_force_gap`]).
    pub record_iterates: bool,
    /// Track each minimizer's regret against fixed coarse trigger deviations.
    pub track_regret: bool,
}

impl RunConfig {
    pub fn new(iterations: usize) -> Self {
        RunConfig {
            iterations,
            schedule: Schedule::Every(1),
            seed: 0,
            record_iterates: false,
            track_regret: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::ZeroIterations);
        }
        if self.schedule == Schedule::Every(0) {
            return Err(Error::InvalidSpec("gap cadence must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunLog {
    pub checkpoints: Vec<Checkpoint>,
    pub accumulator: GapAccumulator,
    /// `iterates[t][i]`: player `i`'s strategy in round `t + 1`, when recorded.
    pub iterates: Option<Vec<Vec<Vec<f64>>>>,
    /// Final regret of each player's minimizer against fixed coarse trigger
    /// deviations, when tracked.
    pub regrets: Option<Vec<f64>>,
}

pub fn run_dynamics(game: &Game, config: &RunConfig) -> Result<RunLog> {
    run_dynamics_with(game, config, |_| Ok(()))
}

/// Runs the dynamics, handing each checkpoint to `sink` as soon as it is
/// computed.
pub fn run_dynamics_with<F>(game: &Game, config: &RunConfig, mut sink: F) -> Result<RunLog>
where
    F: FnMut(&Checkpoint) -> Result<()>,
{
    config.validate()?;
    let start = Instant::now();
    let mut players = game
        .treeplexes()
        .iter()
        .map(|t| {
            let m = CtrMinimizer::new(t.clone())?;
            Ok(if config.track_regret { m.with_tracker() } else { m })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = GapAccumulator::new(game);
    let mut iterates = config.record_iterates.then(Vec::new);
    let mut checkpoints = Vec::new();

    for iter in 1..=config.iterations {
        let profile: Vec<Vec<f64>> = players
            .par_iter_mut()
            .map(|m| m.next_element().map(|x| x.values))
            .collect::<Result<_>>()?;
        let grads = all_gradients(game, &profile)?;
        players
            .par_iter_mut()
            .zip(grads.par_iter())
            .try_for_each(|(m, g)| m.observe_utility(g))?;
        acc.record(&profile, &grads)?;
        if let Some(it) = iterates.as_mut() {
            it.push(profile);
        }
        if config.schedule.is_checkpoint(iter, config.iterations) {
            let gap = acc.gap()?;
            let cp = Checkpoint {
                iter,
                elapsed_ms: start.elapsed().as_millis() as u64,
                gap: gap.overall,
                per_player: gap.per_player,
            };
            sink(&cp)?;
            checkpoints.push(cp);
        }
    }

    let regrets = config.track_regret.then(|| {
        players
            .iter()
            .map(|m| m.tracker().map_or(0.0, |t| t.regret()))
            .collect()
    });
    Ok(RunLog {
        checkpoints,
        accumulator: acc,
        iterates,
        regrets,
    })
}
