//! CSV convergence logs: `iter,elapsed_ms,gap,gap_p1,...,gap_pn`, one row
//! per checkpoint. Floats use the shortest representation that parses back
//! to the same value.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub iter: usize,
    pub elapsed_ms: u64,
    /// Largest per-player gap.
    pub gap: f64,
    pub per_player: Vec<f64>,
}

pub fn header(num_players: usize) -> String {
    let mut h = String::from("iter,elapsed_ms,gap");
    for i in 1..=num_players {
        write!(h, ",gap_p{i}").unwrap();
    }
    h
}

pub fn row(cp: &Checkpoint) -> String {
    let mut r = format!("{},{},{}", cp.iter, cp.elapsed_ms, cp.gap);
    for g in &cp.per_player {
        write!(r, ",{g}").unwrap();
    }
    r
}

/// Whole log, header included, newline-terminated.
pub fn to_csv(num_players: usize, checkpoints: &[Checkpoint]) -> String {
    let mut out = header(num_players);
    out.push('\n');
    for cp in checkpoints {
        out.push_str(&row(cp));
        out.push('\n');
    }
    out
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses a log written by [`to_csv`]. Returns the number of players and the rows.
pub fn parse_csv(text: &str) -> Result<(usize, Vec<Checkpoint>)> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines.next().ok_or_else(|| syntax(1, "empty log"))?;
    let cols: Vec<&str> = head.split(',').collect();
    if cols.len() < 3 || cols[..3] != ["iter", "elapsed_ms", "gap"] {
        return Err(syntax(1, "header must start with `iter,elapsed_ms,gap`"));
    }
    let n = cols.len() - 3;
    for (i, c) in cols[3..].iter().enumerate() {
        if *c != format!("gap_p{}", i + 1) {
            return Err(syntax(1, format!("expected column `gap_p{}`, found `{c}`", i + 1)));
        }
    }
    let mut rows = Vec::new();
    for (k, line) in lines {
        let lineno = k + 1;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != n + 3 {
            return Err(syntax(lineno, format!("expected {} fields, found {}", n + 3, f.len())));
        }
        let float = |s: &str| -> Result<f64> {
            s.parse()
                .map_err(|_| syntax(lineno, format!("expected a number, found `{s}`")))
        };
        let iter: usize = f[0]
            .parse()
            .map_err(|_| syntax(lineno, format!("expected an iteration count, found `{}`", f[0])))?;
        if let Some(prev) = rows.last().map(|r: &Checkpoint| r.iter) {
            if iter <= prev {
                return Err(syntax(lineno, "iterations must increase"));
            }
        }
        let elapsed_ms: u64 = f[1]
            .parse()
            .map_err(|_| syntax(lineno, format!("expected milliseconds, found `{}`", f[1])))?;
        rows.push(Checkpoint {
            iter,
            elapsed_ms,
            gap: float(f[2])?,
            per_player: f[3..].iter().map(|s| float(s)).collect::<Result<_>>()?,
        });
    }
    Ok((n, rows))
}
