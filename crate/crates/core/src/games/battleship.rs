//! Two-player Battleship.
//!
//! Each player secretly places one ship on its own `width x height` grid.
//! The players then take turns (player 1 first) firing at cells of the
//! opponent's grid, never the same cell twice; the cell and whether it was a
//! hit are public. The game ends when a ship has been hit in every cell or
//! both players have fired `rounds` shots. Sinking the opponent's ship is
//! worth `ship_value`; losing one's own costs `loss_multiplier * ship_value`.

use crate::error::Result;
use crate::game::{Game, GameBuilder};
use crate::treeplex::EMPTY_SEQ;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Params {
    pub width: usize,
    pub height: usize,
    pub rounds: usize,
    pub ship_length: usize,
    pub ship_value: f64,
    pub loss_multiplier: f64,
}

/// Cells covered by each legal placement: horizontal ones first, row by row,
/// then vertical ones column by column.
fn placements(p: &Params) -> Vec<Vec<usize>> {
    let (w, h, len) = (p.width, p.height, p.ship_length);
    let mut out = Vec::new();
    if len <= w {
        for y in 0..h {
            for x in 0..=w - len {
                out.push((0..len).map(|i| y * w + x + i).collect());
            }
        }
    }
    if len > 1 && len <= h {
        for x in 0..w {
            for y in 0..=h - len {
                out.push((0..len).map(|i| (y + i) * w + x).collect());
            }
        }
    }
    out
}

struct State<'a> {
    params: &'a Params,
    ships: [&'a [usize]; 2],
    ship_ids: [usize; 2],
    shot: [Vec<bool>; 2],
    shots: [usize; 2],
    hits: [usize; 2],
    history: String,
    seqs: [usize; 2],
}

pub(crate) fn generate(params: &Params) -> Result<Game> {
    let ships = placements(params);
    let cells = params.width * params.height;
    let mut b = GameBuilder::new(2);
    let place = [
        b.infoset(0, "place", EMPTY_SEQ, ships.len()),
        b.infoset(1, "place", EMPTY_SEQ, ships.len()),
    ];
    for (i, a) in ships.iter().enumerate() {
        for (j, c) in ships.iter().enumerate() {
            let mut st = State {
                params,
                ships: [a, c],
                ship_ids: [i, j],
                shot: [vec![false; cells], vec![false; cells]],
                shots: [0, 0],
                hits: [0, 0],
                history: String::new(),
                seqs: [place[0] + i, place[1] + j],
            };
            fire(&mut b, &mut st);
        }
    }
    b.build()
}

fn fire(b: &mut GameBuilder, st: &mut State<'_>) {
    let p = st.params;
    // hits[j] counts hits on player j's ship
    let sunk = [st.hits[0] >= p.ship_length, st.hits[1] >= p.ship_length];
    if sunk[0] || sunk[1] || (st.shots[0] == p.rounds && st.shots[1] == p.rounds) {
        let u = |me: usize| {
            let mut v = 0.0;
            if sunk[1 - me] {
                v += p.ship_value;
            }
            if sunk[me] {
                v -= p.loss_multiplier * p.ship_value;
            }
            v
        };
        b.terminal(1.0, &st.seqs, &[u(0), u(1)]);
        return;
    }
    let me = if st.shots[0] <= st.shots[1] { 0 } else { 1 };
    let targets: Vec<usize> = (0..st.shot[me].len()).filter(|&c| !st.shot[me][c]).collect();
    let id = format!("{}|{}", st.ship_ids[me], st.history);
    let first = b.infoset(me, &id, st.seqs[me], targets.len());
    let saved_seq = st.seqs[me];
    let len = st.history.len();
    for (k, &cell) in targets.iter().enumerate() {
        let hit = st.ships[1 - me].contains(&cell);
        st.seqs[me] = first + k;
        st.shot[me][cell] = true;
        st.shots[me] += 1;
        st.hits[1 - me] += usize::from(hit);
        st.history
            .push_str(&format!("{me}{cell}{};", if hit { 'h' } else { 'm' }));
        fire(b, st);
        st.history.truncate(len);
        st.hits[1 - me] -= usize::from(hit);
        st.shots[me] -= 1;
        st.shot[me][cell] = false;
    }
    st.seqs[me] = saved_seq;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(width: usize, height: usize, rounds: usize) -> Params {
        Params {
            width,
            height,
            rounds,
            ship_length: 2,
            ship_value: 1.0,
            loss_multiplier: 2.0,
        }
    }

    #[test]
    fn placements_on_small_grids() {
        assert_eq!(placements(&params(3, 2, 1)).len(), 7);
        assert_eq!(placements(&params(2, 2, 1)).len(), 4);
        let mut one = params(2, 2, 1);
        one.ship_length = 1;
        assert_eq!(placements(&one).len(), 4);
    }

    #[test]
    fn two_by_two_sizes() {
        let g = generate(&params(2, 2, 3)).unwrap();
        assert_eq!(g.sizes(), vec![(1413, 2965), (1873, 4101)]);
    }

    #[test]
    fn three_by_two_sizes() {
        let g = generate(&params(3, 2, 3)).unwrap();
        assert_eq!(g.sizes(), vec![(18152, 73130), (62875, 253940)]);
    }

    #[test]
    fn payoffs_are_general_sum() {
        let g = generate(&params(2, 2, 2)).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for t in g.terminals() {
            seen.insert((t.payoffs[0] as i64, t.payoffs[1] as i64));
        }
        // someone sinks a ship, or neither does
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![(-2, 1), (0, 0), (1, -2)]);
    }
}
