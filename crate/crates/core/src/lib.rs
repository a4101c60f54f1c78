//! Uncoupled no-regret dynamics for extensive-form coarse correlated
//! equilibria.
//!
//! Every player runs a minimizer of coarse trigger regret over its
//! sequence-form strategy polytope. The empirical frequency of play of the
//! resulting dynamics converges to the set of extensive-form coarse
//! correlated equilibria (EFCCE).

pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod games;
pub mod strategy;
pub mod regret;
pub mod sampling;
pub mod treeplex;
pub mod trigger;
pub mod verify;

pub use error::{Error, Result};
pub use game::{all_gradients, expected_utility, utility_gradient, Game, GameBuilder};
pub use dynamics::{run_dynamics, Gap, GapAccumulator, RunConfig, RunLog, Schedule};
pub use games::{generate, GameSpec};
pub use strategy::{Scope, SequenceFormStrategy};
pub use treeplex::{Treeplex, TreeplexBuilder, EMPTY_SEQ};
pub use trigger::{fixed_point, CtrMinimizer, MixedDeviation, TriggerDeviation};
