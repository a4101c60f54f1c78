//! Leduc hold'em with `n` players and a deck of three suits of `r` ranks.
//!
//! Each player antes one chip and gets a private card. A betting round
//! follows, then a public board card and a second betting round. In each
//! round a player may fold (only when facing a bet), check/call, or raise,
//! and raises at most once per round. Raises are 2 chips in the first round
//! and 4 in the second. At showdown a pair with the board beats any high
//! card; ties split the pot.

use crate::error::Result;
use crate::game::{Game, GameBuilder};
use crate::treeplex::EMPTY_SEQ;

const SUITS: usize = 3;
const RAISE: [f64; 2] = [2.0, 4.0];

struct State {
    n: usize,
    ranks: usize,
    cards: Vec<usize>,
    board: Option<usize>,
    active: Vec<bool>,
    contrib: Vec<f64>,
    raised: Vec<bool>,
    hist: [String; 2],
    seqs: Vec<usize>,
    prob: f64,
}

impl State {
    /// Copies of `rank` still in the deck.
    fn remaining(&self, rank: usize) -> usize {
        let used = self.cards.iter().filter(|&&c| c == rank).count()
            + usize::from(self.board == Some(rank));
        SUITS - used
    }

    fn deck_size(&self) -> usize {
        SUITS * self.ranks - self.cards.len() - usize::from(self.board.is_some())
    }
}

pub(crate) fn generate(n: usize, ranks: usize) -> Result<Game> {
    let mut b = GameBuilder::new(n);
    let mut st = State {
        n,
        ranks,
        cards: Vec::with_capacity(n),
        board: None,
        active: vec![true; n],
        contrib: vec![1.0; n],
        raised: vec![false; n],
        hist: [String::new(), String::new()],
        seqs: vec![EMPTY_SEQ; n],
        prob: 1.0,
    };
    deal(&mut b, &mut st);
    b.build()
}

/// Deals private cards, then starts the first round.
fn deal(b: &mut GameBuilder, st: &mut State) {
    if st.cards.len() == st.n {
        let pending = (0..st.n).collect();
        bet(b, st, 0, pending);
        return;
    }
    let deck = st.deck_size() as f64;
    super::check_chance_node((0..st.ranks).map(|r| st.remaining(r) as f64 / deck));
    for rank in 0..st.ranks {
        let left = st.remaining(rank);
        if left == 0 {
            continue;
        }
        let saved = st.prob;
        st.prob *= left as f64 / deck;
        st.cards.push(rank);
        deal(b, st);
        st.cards.pop();
        st.prob = saved;
    }
}

fn round(st: &State) -> usize {
    usize::from(st.board.is_some())
}

/// Betting: `pending` lists the active players who still have to act, in
/// turn order starting from the next one.
fn bet(b: &mut GameBuilder, st: &mut State, start: usize, pending: Vec<usize>) {
    if st.active.iter().filter(|&&a| a).count() == 1 {
        payout(b, st, &[]);
        return;
    }
    let r = round(st);
    let Some(p) = (0..st.n)
        .map(|k| (start + k) % st.n)
        .find(|q| pending.contains(q))
    else {
        if r == 0 {
            flop(b, st);
        } else {
            showdown(b, st);
        }
        return;
    };
    let top = st.contrib.iter().cloned().fold(0.0, f64::max);
    let owing = st.contrib[p] < top;
    let mut actions = Vec::with_capacity(3);
    if owing {
        actions.push('f');
    }
    actions.push('c');
    if !st.raised[p] {
        actions.push('r');
    }
    let id = match st.board {
        None => format!("{}|{}", st.cards[p], st.hist[0]),
        Some(board) => format!("{}|{}|{}|{}", st.cards[p], st.hist[0], board, st.hist[1]),
    };
    let first = b.infoset(p, &id, st.seqs[p], actions.len());
    let saved_seq = st.seqs[p];
    let rest: Vec<usize> = pending.iter().copied().filter(|&q| q != p).collect();
    let next = (p + 1) % st.n;
    for (k, &a) in actions.iter().enumerate() {
        st.seqs[p] = first + k;
        st.hist[r].push(a);
        let saved_contrib = st.contrib[p];
        match a {
            'f' => {
                st.active[p] = false;
                bet(b, st, next, rest.clone());
                st.active[p] = true;
            }
            'c' => {
                st.contrib[p] = top;
                bet(b, st, next, rest.clone());
            }
            _ => {
                st.contrib[p] = top + RAISE[r];
                st.raised[p] = true;
                let others = (0..st.n).filter(|&q| q != p && st.active[q]).collect();
                bet(b, st, next, others);
                st.raised[p] = false;
            }
        }
        st.contrib[p] = saved_contrib;
        st.hist[r].pop();
    }
    st.seqs[p] = saved_seq;
}

fn flop(b: &mut GameBuilder, st: &mut State) {
    let deck = st.deck_size() as f64;
    super::check_chance_node((0..st.ranks).map(|r| st.remaining(r) as f64 / deck));
    let raised = std::mem::replace(&mut st.raised, vec![false; st.n]);
    for rank in 0..st.ranks {
        let left = st.remaining(rank);
        if left == 0 {
            continue;
        }
        let saved = st.prob;
        st.prob *= left as f64 / deck;
        st.board = Some(rank);
        let pending = (0..st.n).filter(|&q| st.active[q]).collect();
        bet(b, st, 0, pending);
        st.board = None;
        st.prob = saved;
    }
    st.raised = raised;
}

/// Hand strength: pairs above every high card.
fn strength(card: usize, board: usize, ranks: usize) -> usize {
    if card == board {
        ranks + card
    } else {
        card
    }
}

fn showdown(b: &mut GameBuilder, st: &mut State) {
    let board = st.board.expect("showdown happens after the flop");
    let best = (0..st.n)
        .filter(|&i| st.active[i])
        .map(|i| strength(st.cards[i], board, st.ranks))
        .max()
        .expect("someone is active");
    let winners: Vec<usize> = (0..st.n)
        .filter(|&i| st.active[i] && strength(st.cards[i], board, st.ranks) == best)
        .collect();
    payout(b, st, &winners);
}

/// Splits the pot among `winners`, or gives it to the last active player
/// when `winners` is empty.
fn payout(b: &mut GameBuilder, st: &State, winners: &[usize]) {
    let winners: Vec<usize> = if winners.is_empty() {
        (0..st.n).filter(|&i| st.active[i]).collect()
    } else {
        winners.to_vec()
    };
    let pot: f64 = st.contrib.iter().sum();
    let share = pot / winners.len() as f64;
    let payoffs: Vec<f64> = (0..st.n)
        .map(|i| {
            let won = if winners.contains(&i) { share } else { 0.0 };
            won - st.contrib[i]
        })
        .collect();
    b.terminal(st.prob, &st.seqs, &payoffs);
}
