//! The `efg-seq` text format.
//!
//! ```text
//! efg-seq 1 <players>
//! treeplex 0
//! infoset <id> parent=<seq> actions=<k>
//! ...
//! treeplex 1
//! ...
//! terminals <count>
//! t <chance prob> <last seq of each player> <payoff of each player>
//! ```
//!
//! Sequences of a treeplex are numbered 1, 2, ... in the order infosets are
//! listed (0 is the empty sequence). Any order in which every parent
//! sequence is listed before the infosets below it is accepted; loading
//! renumbers to the canonical depth-first layout. Blank lines and lines
//! starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{Game, GameBuilder};

pub const VERSION: u32 = 1;

/// Upper bound on the sequences of one treeplex accepted by [`load`].
pub const MAX_SEQUENCES: usize = 1 << 26;

/// Serializes `game`. Floats are written in shortest round-trip form, so
/// `load(&save(g)?)` reproduces `g` exactly.
pub fn save(game: &Game) -> Result<String> {
    let n = game.num_players();
    let mut out = String::new();
    writeln!(out, "efg-seq {VERSION} {n}").unwrap();
    for (i, t) in game.treeplexes().iter().enumerate() {
        writeln!(out, "treeplex {i}").unwrap();
        for info in t.infosets() {
            if info.id.is_empty() || info.id.contains(char::is_whitespace) {
                return Err(Error::InvalidSpec(format!(
                    "infoset id {:?} cannot be written: ids must be non-empty and whitespace-free",
                    info.id
                )));
            }
            writeln!(
                out,
                "infoset {} parent={} actions={}",
                info.id, info.parent, info.num_actions
            )
            .unwrap();
        }
    }
    writeln!(out, "terminals {}", game.num_terminals()).unwrap();
    for term in game.terminals() {
        write!(out, "t {}", term.chance_prob).unwrap();
        for s in term.last_seq {
            write!(out, " {s}").unwrap();
        }
        for u in term.payoffs {
            write!(out, " {u}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    peeked: Option<(usize, Vec<&'a str>)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            peeked: None,
        }
    }

    /// Next non-blank, non-comment line as `(1-based line number, tokens)`.
    fn peek(&mut self) -> Option<&(usize, Vec<&'a str>)> {
        if self.peeked.is_none() {
            for (i, line) in self.inner.by_ref() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                self.peeked = Some((i + 1, line.split_whitespace().collect()));
                break;
            }
        }
        self.peeked.as_ref()
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        self.peek();
        self.peeked.take()
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| syntax(line, format!("expected {what}, found `{tok}`")))
}

fn keyed<'t>(line: usize, tok: &'t str, key: &str) -> Result<&'t str> {
    tok.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| syntax(line, format!("expected `{key}=<value>`, found `{tok}`")))
}

/// Parses an `efg-seq` document.
pub fn load(text: &str) -> Result<Game> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.next().ok_or_else(|| syntax(1, "empty input"))?;
    if head.len() != 3 || head[0] != "efg-seq" {
        return Err(syntax(line, "expected `efg-seq <version> <players>`"));
    }
    let version: u32 = number(line, head[1], "a version number")?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let n: usize = number(line, head[2], "a player count")?;
    if n == 0 {
        return Err(syntax(line, "a game needs at least one player"));
    }

    let mut players = Vec::new();
    for i in 0..n {
        let (line, toks) = lines
            .next()
            .ok_or_else(|| syntax(line, format!("missing `treeplex {i}`")))?;
        if toks.len() != 2 || toks[0] != "treeplex" || toks[1] != i.to_string() {
            return Err(syntax(line, format!("expected `treeplex {i}`")));
        }
        players.push(read_treeplex(&mut lines, i)?);
    }
    let mut builder = GameBuilder::new(n);
    for (i, infos) in players.iter().enumerate() {
        check_order(infos)?;
        for (line, id, parent, k) in infos {
            builder
                .player(i)
                .add_infoset(id, *parent, *k)
                .map_err(|e| syntax(*line, e.to_string()))?;
        }
    }
    let num_seqs: Vec<usize> = (0..n).map(|i| builder.player(i).num_sequences()).collect();

    let (line, toks) = lines
        .next()
        .ok_or_else(|| syntax(line, "missing `terminals <count>`"))?;
    if toks.len() != 2 || toks[0] != "terminals" {
        return Err(syntax(line, "expected `terminals <count>`"));
    }
    let count: usize = number(line, toks[1], "a terminal count")?;
    let mut seqs = Vec::new();
    let mut payoffs = Vec::new();
    let mut last_line = line;
    for k in 0..count {
        let (line, toks) = lines
            .next()
            .ok_or_else(|| syntax(last_line, format!("expected {count} terminals, found {k}")))?;
        last_line = line;
        if toks.len() != 2 + 2 * n || toks[0] != "t" {
            return Err(syntax(
                line,
                format!("expected `t` followed by {} numbers", 1 + 2 * n),
            ));
        }
        let prob: f64 = number(line, toks[1], "a probability")?;
        if !(prob > 0.0 && prob <= 1.0) {
            return Err(syntax(line, format!("chance probability {prob} is outside (0, 1]")));
        }
        seqs.clear();
        for (i, tok) in toks[2..2 + n].iter().enumerate() {
            let s: usize = number(line, tok, "a sequence index")?;
            if s >= num_seqs[i] {
                return Err(Error::IndexOutOfRange {
                    line,
                    message: format!("player {i} has {} sequences, got {s}", num_seqs[i]),
                });
            }
            seqs.push(s);
        }
        payoffs.clear();
        for tok in &toks[2 + n..] {
            let u: f64 = number(line, tok, "a payoff")?;
            if !u.is_finite() {
                return Err(syntax(line, "payoffs must be finite"));
            }
            payoffs.push(u);
        }
        builder.terminal(prob, &seqs, &payoffs);
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, "unexpected content after the last terminal"));
    }
    builder.build()
}

type RawInfoset<'a> = (usize, &'a str, usize, usize);

fn read_treeplex<'a>(lines: &mut Lines<'a>, player: usize) -> Result<Vec<RawInfoset<'a>>> {
    let mut out = Vec::new();
    let mut total = 1usize;
    while let Some((_, toks)) = lines.peek() {
        if toks[0] != "infoset" {
            break;
        }
        let (line, toks) = lines.next().expect("peeked");
        if toks.len() != 4 {
            return Err(syntax(line, "expected `infoset <id> parent=<seq> actions=<k>`"));
        }
        let parent: usize = number(line, keyed(line, toks[2], "parent")?, "a sequence index")?;
        let k: usize = number(line, keyed(line, toks[3], "actions")?, "an action count")?;
        if k == 0 {
            return Err(syntax(line, format!("infoset `{}` has no actions", toks[1])));
        }
        total = total.saturating_add(k);
        if total > MAX_SEQUENCES {
            return Err(syntax(
                line,
                format!("player {player} exceeds {MAX_SEQUENCES} sequences"),
            ));
        }
        out.push((line, toks[1], parent, k));
    }
    for &(line, _, parent, _) in &out {
        if parent >= total {
            return Err(Error::IndexOutOfRange {
                line,
                message: format!("player {player} has {total} sequences, parent is {parent}"),
            });
        }
    }
    Ok(out)
}

/// Every parent must be a sequence of an infoset listed earlier.
fn check_order(infos: &[RawInfoset<'_>]) -> Result<()> {
    let mut seen = 1;
    for &(line, id, parent, k) in infos {
        if parent >= seen {
            return Err(Error::NonTopologicalOrder {
                line,
                infoset: id.to_string(),
            });
        }
        seen += k;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn round_trip_example() {
        let g = fixtures::example_game();
        let text = save(&g).unwrap();
        assert_eq!(load(&text).unwrap(), g);
    }

    #[test]
    fn example_text() {
        let text = save(&fixtures::example_game()).unwrap();
        let expected = "efg-seq 1 2\n\
                        treeplex 0\n\
                        infoset A parent=0 actions=2\n\
                        infoset B parent=1 actions=2\n\
                        infoset C parent=1 actions=2\n\
                        treeplex 1\n\
                        infoset X parent=0 actions=2\n\
                        terminals 5\n\
                        t 1 2 0 1 0\n\
                        t 1 3 1 0 2\n\
                        t 1 4 1 3 0\n\
                        t 1 5 2 2 1\n\
                        t 1 6 2 0 0\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn version_two_is_rejected() {
        assert_eq!(
            load("efg-seq 2 3\n"),
            Err(Error::UnsupportedVersion(2))
        );
    }

    #[test]
    fn parent_listed_later_is_non_topological() {
        let text = "efg-seq 1 1\ntreeplex 0\ninfoset B parent=3 actions=2\ninfoset A parent=0 actions=2\nterminals 0\n";
        assert_eq!(
            load(text),
            Err(Error::NonTopologicalOrder {
                line: 3,
                infoset: "B".into()
            })
        );
    }

    #[test]
    fn out_of_range_indices() {
        let text = "efg-seq 1 1\ntreeplex 0\ninfoset A parent=7 actions=2\nterminals 0\n";
        assert!(matches!(load(text), Err(Error::IndexOutOfRange { line: 3, .. })));
        let text = "efg-seq 1 1\ntreeplex 0\ninfoset A parent=0 actions=2\nterminals 1\nt 1 3 0\n";
        assert!(matches!(load(text), Err(Error::IndexOutOfRange { line: 5, .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = "efg-seq 1 1\n# comment\n\ntreeplex 0\ninfoset A parent=0 acts=2\n";
        assert!(matches!(load(text), Err(Error::Syntax { line: 5, .. })));
        assert!(matches!(load(""), Err(Error::Syntax { line: 1, .. })));
        let text = "efg-seq 1 1\ntreeplex 0\nterminals 2\nt 1 0 1\n";
        assert!(matches!(load(text), Err(Error::Syntax { line: 4, .. })));
    }

    #[test]
    fn any_topological_order_is_canonicalized() {
        // C (child of A's first action) listed after the second root R
        let text = "efg-seq 1 1\n\
                    treeplex 0\n\
                    infoset A parent=0 actions=2\n\
                    infoset R parent=0 actions=2\n\
                    infoset C parent=1 actions=2\n\
                    terminals 2\n\
                    t 0.5 5 1\n\
                    t 0.5 4 -1\n";
        let g = load(text).unwrap();
        let ids: Vec<_> = g.treeplex(0).infosets().iter().map(|i| i.id.clone()).collect();
        assert_eq!(ids, ["A", "C", "R"]);
        // old 5 (C's first action) is now 3; old 4 (R's second) is now 6
        assert_eq!(g.terminal(0).last_seq, &[3]);
        assert_eq!(g.terminal(1).last_seq, &[6]);
        let again = load(&save(&g).unwrap()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn ids_with_spaces_cannot_be_saved() {
        let mut b = GameBuilder::new(1);
        b.infoset(0, "a b", 0, 1);
        b.terminal(1.0, &[1], &[0.0]);
        assert!(save(&b.build().unwrap()).is_err());
    }
}
