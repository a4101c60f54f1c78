//! Benchmark game generators and the `efg-seq` text format.

mod battleship;
pub mod format;
mod goofspiel;
mod kuhn;
mod leduc;

use std::fmt;

use crate::error::{Error, Result};
use crate::game::Game;

pub use format::{load, save};

/// Parameters of one benchmark instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GameSpec {
    /// Two-player Kuhn poker; small enough for brute-force oracles.
    Kuhn2 { ranks: usize },
    Kuhn3 { ranks: usize },
    Goofspiel3 { ranks: usize },
    Leduc3 { ranks: usize },
    Battleship {
        width: usize,
        height: usize,
        rounds: usize,
        ship_length: usize,
        ship_value: f64,
        loss_multiplier: f64,
    },
}

impl GameSpec {
    /// The battleship configuration with one ship of length 2 and value 1
    /// and loss multiplier 2.
    pub fn battleship(width: usize, height: usize, rounds: usize) -> GameSpec {
        GameSpec::Battleship {
            width,
            height,
            rounds,
            ship_length: 2,
            ship_value: 1.0,
            loss_multiplier: 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            GameSpec::Kuhn2 { ranks } if ranks < 2 => bad(format!("kuhn2 needs ranks >= 2, got {ranks}")),
            GameSpec::Kuhn3 { ranks } if ranks < 3 => bad(format!("kuhn3 needs ranks >= 3, got {ranks}")),
            GameSpec::Goofspiel3 { ranks } if ranks < 2 => {
                bad(format!("goofspiel3 needs ranks >= 2, got {ranks}"))
            }
            GameSpec::Leduc3 { ranks } if ranks < 2 => bad(format!("leduc3 needs ranks >= 2, got {ranks}")),
            GameSpec::Battleship {
                width,
                height,
                rounds,
                ship_length,
                ship_value,
                loss_multiplier,
            } => {
                if rounds < 1 {
                    return bad("battleship needs at least one round".into());
                }
                if ship_length < 1 || (ship_length > width && ship_length > height) {
                    return bad(format!(
                        "a ship of length {ship_length} does not fit a {width}x{height} grid"
                    ));
                }
                if !ship_value.is_finite() || !loss_multiplier.is_finite() {
                    return bad("ship value and loss multiplier must be finite".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GameSpec::Kuhn2 { .. } => "kuhn2",
            GameSpec::Kuhn3 { .. } => "kuhn3",
            GameSpec::Goofspiel3 { .. } => "goofspiel3",
            GameSpec::Leduc3 { .. } => "leduc3",
            GameSpec::Battleship { .. } => "battleship",
        }
    }
}

impl fmt::Display for GameSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GameSpec::Kuhn2 { ranks }
            | GameSpec::Kuhn3 { ranks }
            | GameSpec::Goofspiel3 { ranks }
            | GameSpec::Leduc3 { ranks } => write!(f, "{}(ranks={ranks})", self.kind()),
            GameSpec::Battleship {
                width,
                height,
                rounds,
                ship_length,
                ship_value,
                loss_multiplier,
            } => write!(
                f,
                "battleship(grid={width}x{height}, rounds={rounds}, ship={ship_length}/{ship_value}, loss={loss_multiplier})"
            ),
        }
    }
}

/// Builds the game described by `spec`.
pub fn generate(spec: &GameSpec) -> Result<Game> {
    spec.validate()?;
    match *spec {
        GameSpec::Kuhn2 { ranks } => kuhn::generate(2, ranks),
        GameSpec::Kuhn3 { ranks } => kuhn::generate(3, ranks),
        GameSpec::Goofspiel3 { ranks } => goofspiel::generate(3, ranks),
        GameSpec::Leduc3 { ranks } => leduc::generate(3, ranks),
        GameSpec::Battleship {
            width,
            height,
            rounds,
            ship_length,
            ship_value,
            loss_multiplier,
        } => battleship::generate(&battleship::Params {
            width,
            height,
            rounds,
            ship_length,
            ship_value,
            loss_multiplier,
        }),
    }
}

/// Panics unless the outcome probabilities of one chance node sum to one.
pub(crate) fn check_chance_node(probs: impl IntoIterator<Item = f64>) {
    let total: f64 = probs.into_iter().sum();
    assert!(
        (total - 1.0).abs() < 1e-12,
        "chance outcomes sum to {total}, not 1"
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_specs() {
        assert!(generate(&GameSpec::Kuhn3 { ranks: 2 }).is_err());
        assert!(generate(&GameSpec::Goofspiel3 { ranks: 1 }).is_err());
        assert!(generate(&GameSpec::Leduc3 { ranks: 0 }).is_err());
        assert!(generate(&GameSpec::battleship(3, 2, 0)).is_err());
        let too_long = GameSpec::Battleship {
            width: 2,
            height: 2,
            rounds: 1,
            ship_length: 3,
            ship_value: 1.0,
            loss_multiplier: 2.0,
        };
        assert!(generate(&too_long).is_err());
    }
}
