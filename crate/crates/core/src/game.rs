//! Games in sequence form: one treeplex per player plus sparse terminal payoffs.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::treeplex::{Treeplex, TreeplexBuilder};

/// One terminal node as seen by the payoff computations.
#[derive(Debug, Clone, Copy)]
pub struct TerminalEntry<'a> {
    /// Product of chance probabilities on the path.
    pub chance_prob: f64,
    /// Last sequence of each player on the path (0 if the player never acts).
    pub last_seq: &'a [u32],
    pub payoffs: &'a [f64],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    treeplexes: Vec<Arc<Treeplex>>,
    chance: Vec<f64>,
    seqs: Vec<u32>,
    payoffs: Vec<f64>,
    payoff_range: Vec<f64>,
}

impl Game {
    /// Assembles a game, checking index bounds and chance probabilities.
    pub fn new(
        treeplexes: Vec<Treeplex>,
        chance: Vec<f64>,
        seqs: Vec<u32>,
        payoffs: Vec<f64>,
    ) -> Result<Game> {
        let n = treeplexes.len();
        if n == 0 {
            return Err(Error::InvalidSpec("a game needs at least one player".into()));
        }
        let z = chance.len();
        if seqs.len() != z * n || payoffs.len() != z * n {
            return Err(Error::DimensionMismatch {
                expected: z * n,
                found: seqs.len().min(payoffs.len()),
            });
        }
        for (t, &p) in chance.iter().enumerate() {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidSpec(format!(
                    "terminal {t} has chance probability {p} outside (0, 1]"
                )));
            }
            for i in 0..n {
                let s = seqs[t * n + i] as usize;
                if s >= treeplexes[i].num_sequences() {
                    return Err(Error::InvalidSpec(format!(
                        "terminal {t}: sequence {s} out of range for player {i}"
                    )));
                }
                if !payoffs[t * n + i].is_finite() {
                    return Err(Error::InvalidSpec(format!("terminal {t}: non-finite payoff")));
                }
            }
        }
        let payoff_range = (0..n)
            .map(|i| {
                let (lo, hi) = (0..z).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| {
                    let u = payoffs[t * n + i];
                    (lo.min(u), hi.max(u))
                });
                if z == 0 {
                    0.0
                } else {
                    hi - lo
                }
            })
            .collect();
        Ok(Game {
            treeplexes: treeplexes.into_iter().map(Arc::new).collect(),
            chance,
            seqs,
            payoffs,
            payoff_range,
        })
    }

    pub fn num_players(&self) -> usize {
        self.treeplexes.len()
    }

    pub fn treeplex(&self, player: usize) -> &Arc<Treeplex> {
        &self.treeplexes[player]
    }

    pub fn treeplexes(&self) -> &[Arc<Treeplex>] {
        &self.treeplexes
    }

    pub fn num_terminals(&self) -> usize {
        self.chance.len()
    }

    pub fn terminal(&self, t: usize) -> TerminalEntry<'_> {
        let n = self.num_players();
        TerminalEntry {
            chance_prob: self.chance[t],
            last_seq: &self.seqs[t * n..(t + 1) * n],
            payoffs: &self.payoffs[t * n..(t + 1) * n],
        }
    }

    pub fn terminals(&self) -> impl Iterator<Item = TerminalEntry<'_>> + '_ {
        (0..self.num_terminals()).map(move |t| self.terminal(t))
    }

    /// `max_z u_i(z) - min_z u_i(z)` for each player.
    pub fn payoff_range(&self) -> &[f64] {
        &self.payoff_range
    }

    /// `(infosets, sequences)` for each player.
    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.treeplexes
            .iter()
            .map(|t| (t.num_infosets(), t.num_sequences()))
            .collect()
    }

    fn check_profile<S: AsRef<[f64]>>(&self, profile: &[S], skip: Option<usize>) -> Result<()> {
        if profile.len() != self.num_players() {
            return Err(Error::DimensionMismatch {
                expected: self.num_players(),
                found: profile.len(),
            });
        }
        for (i, q) in profile.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let want = self.treeplexes[i].num_sequences();
            if q.as_ref().len() != want {
                return Err(Error::DimensionMismatch {
                    expected: want,
                    found: q.as_ref().len(),
                });
            }
        }
        Ok(())
    }
}

/// Expected utility of every player under a profile of full-scope
/// sequence-form strategies.
pub fn expected_utility<S: AsRef<[f64]>>(game: &Game, profile: &[S]) -> Result<Vec<f64>> {
    game.check_profile(profile, None)?;
    let n = game.num_players();
    let mut out = vec![0.0; n];
    for term in game.terminals() {
        let mut reach = term.chance_prob;
        for (j, q) in profile.iter().enumerate() {
            reach *= q.as_ref()[term.last_seq[j] as usize];
        }
        if reach == 0.0 {
            continue;
        }
        for i in 0..n {
            out[i] += reach * term.payoffs[i];
        }
    }
    Ok(out)
}

/// Gradient of player `player`'s expected utility with respect to its own
/// sequence-form strategy. `profile[player]` is ignored (any slice, even
/// empty, may be passed there).
pub fn utility_gradient<S: AsRef<[f64]>>(game: &Game, player: usize, profile: &[S]) -> Result<Vec<f64>> {
    game.check_profile(profile, Some(player))?;
    let mut g = vec![0.0; game.treeplex(player).num_sequences()];
    for term in game.terminals() {
        let mut w = term.chance_prob * term.payoffs[player];
        for (j, q) in profile.iter().enumerate() {
            if j != player {
                w *= q.as_ref()[term.last_seq[j] as usize];
            }
        }
        g[term.last_seq[player] as usize] += w;
    }
    Ok(g)
}

/// All players' gradients in a single pass over the terminals.
pub fn all_gradients<S: AsRef<[f64]>>(game: &Game, profile: &[S]) -> Result<Vec<Vec<f64>>> {
    game.check_profile(profile, None)?;
    let n = game.num_players();
    let mut grads: Vec<Vec<f64>> = game
        .treeplexes()
        .iter()
        .map(|t| vec![0.0; t.num_sequences()])
        .collect();
    let mut reach = vec![0.0; n];
    let mut suffix = vec![0.0; n + 1];
    for term in game.terminals() {
        for j in 0..n {
            reach[j] = profile[j].as_ref()[term.last_seq[j] as usize];
        }
        suffix[n] = 1.0;
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1] * reach[j];
        }
        let mut prefix = term.chance_prob;
        for i in 0..n {
            let others = prefix * suffix[i + 1];
            grads[i][term.last_seq[i] as usize] += others * term.payoffs[i];
            prefix *= reach[i];
        }
    }
    Ok(grads)
}

/// Collects terminals against builder-local sequence indices, then lays every
/// treeplex out canonically and remaps the terminals.
#[derive(Debug)]
pub struct GameBuilder {
    players: Vec<TreeplexBuilder>,
    chance: Vec<f64>,
    seqs: Vec<u32>,
    payoffs: Vec<f64>,
}

impl GameBuilder {
    pub fn new(num_players: usize) -> Self {
        GameBuilder {
            players: (0..num_players).map(TreeplexBuilder::new).collect(),
            chance: Vec::new(),
            seqs: Vec::new(),
            payoffs: Vec::new(),
        }
    }

    pub fn player(&mut self, i: usize) -> &mut TreeplexBuilder {
        &mut self.players[i]
    }

    /// Returns the first sequence of player `i`'s infoset `id`, creating it if needed.
    pub fn infoset(&mut self, i: usize, id: &str, parent: usize, num_actions: usize) -> usize {
        self.players[i]
            .infoset(id, parent, num_actions)
            .unwrap_or_else(|e| panic!("generator produced an inconsistent treeplex: {e}"))
    }

    pub fn terminal(&mut self, chance_prob: f64, last_seq: &[usize], payoffs: &[f64]) {
        debug_assert_eq!(last_seq.len(), self.players.len());
        debug_assert_eq!(payoffs.len(), self.players.len());
        self.chance.push(chance_prob);
        self.seqs.extend(last_seq.iter().map(|&s| s as u32));
        self.payoffs.extend_from_slice(payoffs);
    }

    pub fn build(self) -> Result<Game> {
        let n = self.players.len();
        let mut maps = Vec::with_capacity(n);
        let mut treeplexes = Vec::with_capacity(n);
        for b in self.players {
            let (t, map) = b.build();
            treeplexes.push(t);
            maps.push(map);
        }
        let seqs = self
            .seqs
            .iter()
            .enumerate()
            .map(|(k, &s)| maps[k % n][s as usize] as u32)
            .collect();
        Game::new(treeplexes, self.chance, seqs, self.payoffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::strategy::uniform_strategy;

    #[test]
    fn one_terminal_game() {
        let g = fixtures::one_terminal(3.0, -3.0);
        let prof: Vec<Vec<f64>> = g
            .treeplexes()
            .iter()
            .map(|t| uniform_strategy(t).values)
            .collect();
        assert_eq!(expected_utility(&g, &prof).unwrap(), vec![3.0, -3.0]);
        let grad = utility_gradient(&g, 0, &prof).unwrap();
        assert_eq!(grad[0], 3.0);
        assert!(grad[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn gradients_agree_with_single_player_route() {
        let g = fixtures::example_game();
        let prof: Vec<Vec<f64>> = g
            .treeplexes()
            .iter()
            .map(|t| uniform_strategy(t).values)
            .collect();
        let all = all_gradients(&g, &prof).unwrap();
        for i in 0..2 {
            let one = utility_gradient(&g, i, &prof).unwrap();
            for (a, b) in all[i].iter().zip(&one) {
                assert!((a - b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn bad_terminal_rejected() {
        let t = fixtures::single_infoset(2);
        assert!(Game::new(vec![t.clone()], vec![0.0], vec![1], vec![1.0]).is_err());
        assert!(Game::new(vec![t.clone()], vec![1.0], vec![9], vec![1.0]).is_err());
        assert!(Game::new(vec![t], vec![1.0], vec![1], vec![1.0]).is_ok());
    }
}
