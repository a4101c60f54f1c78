//! Small hand-built games used by tests, examples, and the verification suites.

use crate::game::{Game, GameBuilder};
use crate::treeplex::{Treeplex, TreeplexBuilder, EMPTY_SEQ};

/// Player 1's treeplex of the two-player example game: root infoset `A`
/// (sequences 1, 2) and infosets `B` (3, 4) and `C` (5, 6), both reached
/// after sequence 1.
pub fn example_treeplex() -> Treeplex {
    example_game().treeplex(0).as_ref().clone()
}

/// The two-player example game. Player 1 picks 1 or 2 at `A`; 2 ends the
/// game. After 1, player 2 picks `x` (leading to `B`) or `y` (leading to `C`),
/// and player 1 then picks 3/4 at `B` or 5/6 at `C`.
///
/// Payoffs `(u1, u2)`: 2 → (1, 0); 3 → (0, 2); 4 → (3, 0); 5 → (2, 1); 6 → (0, 0).
pub fn example_game() -> Game {
    let mut b = GameBuilder::new(2);
    let a = b.infoset(0, "A", EMPTY_SEQ, 2);
    let x = b.infoset(1, "X", EMPTY_SEQ, 2);
    let bb = b.infoset(0, "B", a, 2);
    let c = b.infoset(0, "C", a, 2);
    b.terminal(1.0, &[a + 1, EMPTY_SEQ], &[1.0, 0.0]);
    b.terminal(1.0, &[bb, x], &[0.0, 2.0]);
    b.terminal(1.0, &[bb + 1, x], &[3.0, 0.0]);
    b.terminal(1.0, &[c, x + 1], &[2.0, 1.0]);
    b.terminal(1.0, &[c + 1, x + 1], &[0.0, 0.0]);
    b.build().expect("example game is well formed")
}

/// A treeplex with a single infoset of `k` actions.
pub fn single_infoset(k: usize) -> Treeplex {
    let mut b = TreeplexBuilder::new(0);
    b.add_infoset("I", EMPTY_SEQ, k).expect("k > 0");
    b.build().0
}

/// Depth-2 chain: root `R` with actions 1, 2; infoset `S` (3, 4) after 1.
pub fn chain_treeplex() -> Treeplex {
    let mut b = TreeplexBuilder::new(0);
    let r = b.add_infoset("R", EMPTY_SEQ, 2).expect("valid");
    b.add_infoset("S", r, 2).expect("valid");
    b.build().0
}

/// Two players, each with one unused two-action infoset, and a single
/// terminal reached with both players at the empty sequence.
pub fn one_terminal(u1: f64, u2: f64) -> Game {
    let mut b = GameBuilder::new(2);
    b.infoset(0, "P", EMPTY_SEQ, 2);
    b.infoset(1, "Q", EMPTY_SEQ, 2);
    b.terminal(1.0, &[EMPTY_SEQ, EMPTY_SEQ], &[u1, u2]);
    b.build().expect("well formed")
}

/// The example game's tree with player 1's payoff fixed at `c` everywhere.
pub fn constant_for_player_one(c: f64) -> Game {
    let mut b = GameBuilder::new(2);
    let a = b.infoset(0, "A", EMPTY_SEQ, 2);
    let x = b.infoset(1, "X", EMPTY_SEQ, 2);
    let bb = b.infoset(0, "B", a, 2);
    let cc = b.infoset(0, "C", a, 2);
    b.terminal(1.0, &[a + 1, EMPTY_SEQ], &[c, 0.0]);
    b.terminal(1.0, &[bb, x], &[c, 2.0]);
    b.terminal(1.0, &[bb + 1, x], &[c, -1.0]);
    b.terminal(1.0, &[cc, x + 1], &[c, 1.0]);
    b.terminal(1.0, &[cc + 1, x + 1], &[c, 3.0]);
    b.build().expect("well formed")
}
