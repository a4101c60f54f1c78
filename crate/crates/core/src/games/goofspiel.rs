//! Goofspiel with `n` players and cards `1..=r`.
//!
//! The prize deck is shuffled and one prize is revealed per turn. Each player
//! holds cards `1..=r` and bids one per turn without seeing the others' bids.
//! After the bids, the set of players tied for the highest bid is announced;
//! a sole highest bidder takes the prize, otherwise the prize is discarded.
//! A player's payoff is the total value of the prizes it won.

use crate::error::Result;
use crate::game::{Game, GameBuilder};
use crate::treeplex::EMPTY_SEQ;

struct State {
    n: usize,
    ranks: usize,
    prizes: Vec<usize>,
    // per player: remaining hand (sorted) and the history of own bids and announcements
    hands: Vec<Vec<usize>>,
    views: Vec<String>,
    seqs: Vec<usize>,
    bids: Vec<usize>,
    won: Vec<f64>,
    prob: f64,
}

pub(crate) fn generate(n: usize, ranks: usize) -> Result<Game> {
    let mut b = GameBuilder::new(n);
    let mut st = State {
        n,
        ranks,
        prizes: Vec::with_capacity(ranks),
        hands: vec![(1..=ranks).collect(); n],
        views: vec![String::new(); n],
        seqs: vec![EMPTY_SEQ; n],
        bids: vec![0; n],
        won: vec![0.0; n],
        prob: 1.0,
    };
    reveal(&mut b, &mut st);
    b.build()
}

/// Chance reveals the next prize.
fn reveal(b: &mut GameBuilder, st: &mut State) {
    if st.prizes.len() == st.ranks {
        b.terminal(st.prob, &st.seqs, &st.won);
        return;
    }
    let left: Vec<usize> = (1..=st.ranks).filter(|c| !st.prizes.contains(c)).collect();
    let p = 1.0 / left.len() as f64;
    super::check_chance_node(left.iter().map(|_| p));
    let saved = st.prob;
    st.prob *= p;
    for prize in left {
        st.prizes.push(prize);
        bid(b, st, 0);
        st.prizes.pop();
    }
    st.prob = saved;
}

fn bid(b: &mut GameBuilder, st: &mut State, p: usize) {
    if p == st.n {
        resolve(b, st);
        return;
    }
    let prizes: Vec<String> = st.prizes.iter().map(usize::to_string).collect();
    let id = format!("{}|{}", prizes.join(","), st.views[p]);
    let hand = st.hands[p].clone();
    let first = b.infoset(p, &id, st.seqs[p], hand.len());
    let saved = (st.seqs[p], st.bids[p]);
    for (k, &card) in hand.iter().enumerate() {
        st.seqs[p] = first + k;
        st.bids[p] = card;
        st.hands[p].remove(k);
        bid(b, st, p + 1);
        st.hands[p].insert(k, card);
    }
    (st.seqs[p], st.bids[p]) = saved;
}

fn resolve(b: &mut GameBuilder, st: &mut State) {
    let top = *st.bids.iter().max().expect("at least one player");
    let tied: Vec<usize> = (0..st.n).filter(|&i| st.bids[i] == top).collect();
    let announce: String = tied.iter().map(usize::to_string).collect();
    let prize = *st.prizes.last().expect("a prize is on the table") as f64;
    let lens: Vec<usize> = st.views.iter().map(String::len).collect();
    for i in 0..st.n {
        let v = &mut st.views[i];
        v.push_str(&format!("{}:{};", st.bids[i], announce));
    }
    if tied.len() == 1 {
        st.won[tied[0]] += prize;
    }
    reveal(b, st);
    if tied.len() == 1 {
        st.won[tied[0]] -= prize;
    }
    for (v, len) in st.views.iter_mut().zip(lens) {
        v.truncate(len);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_player_sizes() {
        let g = generate(3, 3).unwrap();
        assert_eq!(g.sizes(), vec![(837, 934); 3]);
    }

    #[test]
    fn chance_mass_and_payoff_total() {
        let r = 3;
        let g = generate(3, r).unwrap();
        // every prize order is equally likely and each order has (r!)^3 bid paths
        let total: f64 = g.terminals().map(|t| t.chance_prob).sum();
        assert!((total - 216.0).abs() < 1e-9);
        let deck: f64 = (1..=r).sum::<usize>() as f64;
        for t in g.terminals() {
            let s: f64 = t.payoffs.iter().sum();
            assert!(s <= deck && s >= 0.0);
        }
    }

    #[test]
    fn two_ranks() {
        let g = generate(2, 2).unwrap();
        assert_eq!(g.num_players(), 2);
        assert_eq!(g.num_terminals(), 2 * 4);
    }
}
