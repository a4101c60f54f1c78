use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{expected_utility, Game};
use crate::regret::dot;
use crate::sampling::{enumerate_vertices, vertex_count};
use crate::strategy::{best_response_value, Scope};
use crate::treeplex::Treeplex;
use crate::trigger::TriggerDeviation;

/// Default cap on the number of `(player, trigger, continuation)` triples
/// [`brute_force_gap`] will enumerate.
pub const DEFAULT_VERTEX_CAP: u128 = 1_000_000;

#[derive(Debug, Clone)]
struct PlayerSums {
    treeplex: Arc<Treeplex>,
    /// `Σ_t ⟨c^t, x^t⟩`, the expected utility actually obtained.
    baseline: f64,
    /// Per trigger: `Σ_t Σ_{σ ∈ Σ_Î} c^t[σ] x^t[σ]`.
    followed: Vec<f64>,
    /// Per trigger: `Σ_t x^t[σ(Î)] c^t[σ]` over `σ ∈ Σ_Î`.
    deviation: Vec<Vec<f64>>,
}

/// Running sums from which the EFCCE gap of the average of the product
/// distributions played so far can be read off at any time.
#[derive(Debug, Clone)]
pub struct GapAccumulator {
    players: Vec<PlayerSums>,
    iterations: usize,
    prefix: Vec<f64>,
}

/// Gap of the empirical distribution: the largest average gain any player
/// gets from any coarse trigger deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub overall: f64,
    pub per_player: Vec<f64>,
}

impl GapAccumulator {
    pub fn new(game: &Game) -> Self {
        let players = game
            .treeplexes()
            .iter()
            .map(|t| PlayerSums {
                treeplex: t.clone(),
                baseline: 0.0,
                followed: vec![0.0; t.num_infosets()],
                deviation: t
                    .infosets()
                    .iter()
                    .map(|i| vec![0.0; i.subtree_seqs().len()])
                    .collect(),
            })
            .collect();
        GapAccumulator {
            players,
            iterations: 0,
            prefix: Vec::new(),
        }
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Adds one round: every player's strategy and utility gradient.
    pub fn record<S: AsRef<[f64]>, G: AsRef<[f64]>>(&mut self, profile: &[S], gradients: &[G]) -> Result<()> {
        if profile.len() != self.players.len() || gradients.len() != self.players.len() {
            return Err(Error::DimensionMismatch {
                expected: self.players.len(),
                found: profile.len().min(gradients.len()),
            });
        }
        for (p, (x, c)) in self.players.iter_mut().zip(profile.iter().zip(gradients)) {
            let (x, c) = (x.as_ref(), c.as_ref());
            let n = p.treeplex.num_sequences();
            if x.len() != n || c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: x.len().min(c.len()),
                });
            }
            // prefix sums of c∘x give each contiguous subtree's sum
            self.prefix.clear();
            self.prefix.push(0.0);
            let mut run = 0.0;
            for (a, b) in c.iter().zip(x) {
                run += a * b;
                self.prefix.push(run);
            }
            p.baseline += dot(c, x);
            for (i, info) in p.treeplex.infosets().iter().enumerate() {
                let r = info.subtree_seqs();
                p.followed[i] += self.prefix[r.end] - self.prefix[r.start];
                let reach = x[info.parent];
                if reach != 0.0 {
                    for (d, g) in p.deviation[i].iter_mut().zip(&c[r]) {
                        *d += reach * g;
                    }
                }
            }
        }
        self.iterations += 1;
        Ok(())
    }

    /// Sum over rounds of each player's expected utility.
    pub fn baseline_sums(&self) -> Vec<f64> {
        self.players.iter().map(|p| p.baseline).collect()
    }

    /// Total (not averaged) gain of the best continuation for each trigger
    /// of `player`.
    pub fn trigger_benefits(&self, player: usize) -> Vec<f64> {
        let p = &self.players[player];
        (0..p.treeplex.num_infosets())
            .into_par_iter()
            .map(|i| {
                let (br, _) = best_response_value(&p.treeplex, &p.deviation[i], Scope::Rooted(i))
                    .expect("accumulator sized to the subtree");
                br - p.followed[i]
            })
            .collect()
    }

    pub fn gap(&self) -> Result<Gap> {
        efcce_gap(self)
    }
}

/// Per-player and overall gap after the recorded rounds. Players without
/// infosets have no deviations and report 0.
pub fn efcce_gap(acc: &GapAccumulator) -> Result<Gap> {
    if acc.iterations == 0 {
        return Err(Error::ZeroIterations);
    }
    let t = acc.iterations as f64;
    let per_player: Vec<f64> = (0..acc.players.len())
        .map(|i| {
            acc.trigger_benefits(i)
                .into_iter()
                .reduce(f64::max)
                .map_or(0.0, |b| b / t)
        })
        .collect();
    let overall = per_player.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Gap {
        overall,
        per_player,
    })
}

/// The gap computed by enumeration: for every player, trigger, and
/// deterministic continuation, apply the deviation's explicit matrix to each
/// recorded strategy and re-evaluate expected utilities. `iterates[t][i]` is
/// player `i`'s strategy in round `t`.
pub fn brute_force_gap(game: &Game, iterates: &[Vec<Vec<f64>>], cap: u128) -> Result<f64> {
    if iterates.is_empty() {
        return Err(Error::ZeroIterations);
    }
    let mut count = 0u128;
    for t in game.treeplexes() {
        for i in 0..t.num_infosets() {
            count = count.saturating_add(vertex_count(t, Scope::Rooted(i)));
        }
    }
    if count > cap {
        return Err(Error::VertexCap { count, cap });
    }
    let base: Vec<Vec<f64>> = iterates
        .iter()
        .map(|profile| expected_utility(game, profile))
        .collect::<Result<_>>()?;
    let mut best = f64::NEG_INFINITY;
    for (player, t) in game.treeplexes().iter().enumerate() {
        for trig in 0..t.num_infosets() {
            for cont in enumerate_vertices(t, Scope::Rooted(trig)) {
                let m = TriggerDeviation::new(t.clone(), trig, cont)?.matrix();
                let mut total = 0.0;
                for (profile, u) in iterates.iter().zip(&base) {
                    let mut deviated = profile.clone();
                    deviated[player] = m.iter().map(|row| dot(row, &profile[player])).collect();
                    total += expected_utility(game, &deviated)?[player] - u[player];
                }
                best = best.max(total / iterates.len() as f64);
            }
        }
    }
    Ok(best)
}
