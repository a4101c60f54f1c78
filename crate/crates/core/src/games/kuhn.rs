//! Kuhn poker with `n` players and `r` ranks.
//!
//! Every player antes one chip and receives a private card. Until somebody
//! bets, players in turn may check or bet one chip; if all check, the hands
//! are compared. After a bet, each other player in turn order (starting
//! after the bettor) folds or calls one chip. The highest card still in wins
//! the pot.

use crate::error::Result;
use crate::game::{Game, GameBuilder};
use crate::treeplex::EMPTY_SEQ;

struct Ctx<'a> {
    b: &'a mut GameBuilder,
    n: usize,
    cards: Vec<usize>,
    prob: f64,
}

pub(crate) fn generate(n: usize, ranks: usize) -> Result<Game> {
    let mut b = GameBuilder::new(n);
    let deals = deals(n, ranks);
    let prob = 1.0 / deals.len() as f64;
    super::check_chance_node(deals.iter().map(|_| prob));
    for cards in deals {
        let mut ctx = Ctx {
            b: &mut b,
            n,
            cards,
            prob,
        };
        let mut seqs = vec![EMPTY_SEQ; n];
        open_round(&mut ctx, 0, &mut String::new(), &mut seqs);
    }
    b.build()
}

/// Ordered deals of distinct cards, one per player.
fn deals(n: usize, ranks: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, ranks: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..ranks {
            if !cur.contains(&c) {
                cur.push(c);
                rec(n, ranks, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, ranks, &mut cur, &mut out);
    out
}

fn infoset(ctx: &mut Ctx<'_>, p: usize, hist: &str, parent: usize) -> usize {
    let id = format!("{}:{}", ctx.cards[p], if hist.is_empty() { "-" } else { hist });
    ctx.b.infoset(p, &id, parent, 2)
}

/// No bet yet; player `p` checks (`c`) or bets (`b`).
fn open_round(ctx: &mut Ctx<'_>, p: usize, hist: &mut String, seqs: &mut [usize]) {
    if p == ctx.n {
        let folded = vec![false; ctx.n];
        let contrib = vec![1.0; ctx.n];
        showdown(ctx, &folded, &contrib, seqs);
        return;
    }
    let first = infoset(ctx, p, hist, seqs[p]);
    let saved = seqs[p];

    seqs[p] = first;
    hist.push('c');
    open_round(ctx, p + 1, hist, seqs);
    hist.pop();

    seqs[p] = first + 1;
    hist.push('b');
    let mut contrib = vec![1.0; ctx.n];
    contrib[p] += 1.0;
    let mut folded = vec![false; ctx.n];
    respond(ctx, p, 1, hist, seqs, &mut folded, &mut contrib);
    hist.pop();

    seqs[p] = saved;
}

/// After a bet by `bettor`, the `k`-th player after it folds (`f`) or calls (`c`).
fn respond(
    ctx: &mut Ctx<'_>,
    bettor: usize,
    k: usize,
    hist: &mut String,
    seqs: &mut [usize],
    folded: &mut Vec<bool>,
    contrib: &mut Vec<f64>,
) {
    if k == ctx.n {
        showdown(ctx, folded, contrib, seqs);
        return;
    }
    let p = (bettor + k) % ctx.n;
    let first = infoset(ctx, p, hist, seqs[p]);
    let saved = seqs[p];

    seqs[p] = first;
    hist.push('f');
    folded[p] = true;
    respond(ctx, bettor, k + 1, hist, seqs, folded, contrib);
    folded[p] = false;
    hist.pop();

    seqs[p] = first + 1;
    hist.push('c');
    contrib[p] += 1.0;
    respond(ctx, bettor, k + 1, hist, seqs, folded, contrib);
    contrib[p] -= 1.0;
    hist.pop();

    seqs[p] = saved;
}

fn showdown(ctx: &mut Ctx<'_>, folded: &[bool], contrib: &[f64], seqs: &[usize]) {
    let winner = (0..ctx.n)
        .filter(|&i| !folded[i])
        .max_by_key(|&i| ctx.cards[i])
        .expect("someone is still in");
    let pot: f64 = contrib.iter().sum();
    let payoffs: Vec<f64> = (0..ctx.n)
        .map(|i| if i == winner { pot - contrib[i] } else { -contrib[i] })
        .collect();
    ctx.b.terminal(ctx.prob, seqs, &payoffs);
}
