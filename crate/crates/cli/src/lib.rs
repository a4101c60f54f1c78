//! Command-line front end: generate or load a game, run the dynamics and
//! log the gap as CSV, print game sizes, and run the verification suites.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use efcce::dynamics::{brute_force_gap, log, run_dynamics_with, DEFAULT_VERTEX_CAP};
use efcce::games::{self, GameSpec};
use efcce::verify::{self, Fault, Suite, VerifyOptions};
use efcce::{Game, RunConfig, Schedule};

#[derive(Debug, Parser)]
#[command(name = "efcce", version, about = "No-coarse-trigger-regret dynamics for EFCCE")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run self-play and log the EFCCE gap as CSV.
    Run(RunArgs),
    /// Print infoset and sequence counts per player.
    Gensize(GameArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Write a game in efg-seq format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameKind {
    Kuhn2,
    Kuhn3,
    Goofspiel3,
    Leduc3,
    Battleship,
}

#[derive(Debug, Clone, Args)]
pub struct GameArgs {
    #[arg(long, value_enum, required_unless_present = "game_file", conflicts_with = "game_file")]
    pub game: Option<GameKind>,
    /// Card ranks [default: 3 for kuhn2, 4 for kuhn3, 3 otherwise]
    #[arg(long)]
    pub ranks: Option<usize>,
    /// Battleship grid as WIDTHxHEIGHT.
    #[arg(long, default_value = "3x2", value_parser = parse_grid)]
    pub grid: (usize, usize),
    /// Battleship shots per player.
    #[arg(long, default_value_t = 3)]
    pub rounds: usize,
    #[arg(long, default_value_t = 2)]
    pub ship_length: usize,
    #[arg(long, default_value_t = 1.0)]
    pub ship_value: f64,
    #[arg(long, default_value_t = 2.0)]
    pub loss_multiplier: f64,
    /// Load an efg-seq file instead of generating a game.
    #[arg(long)]
    pub game_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub iters: u64,
    /// Evaluate the gap every this many iterations.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..), conflicts_with = "dyadic")]
    pub gap_every: u64,
    /// Evaluate the gap at powers of two instead.
    #[arg(long)]
    pub dyadic: bool,
    /// CSV destination; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also compute the gap by brute-force enumeration and compare.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: u128,
    /// One worker thread, and `elapsed_ms` written as 0, so that logs are
    /// byte-for-byte reproducible.
    #[arg(long)]
    pub single_threaded: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    FixedPoint,
    Regret,
    Gap,
    Sizes,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::FixedPoint => Suite::FixedPoint,
            SuiteArg::Regret => Suite::Regret,
            SuiteArg::Gap => Suite::Gap,
            SuiteArg::Sizes => Suite::Sizes,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    SkipUniform,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Suites to run [default: fixed-point, regret, gap]
    #[arg(long, value_enum)]
    pub suite: Vec<SuiteArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random mixed deviations per game in the fixed-point suite.
    #[arg(long, default_value_t = 1000)]
    pub deviations: usize,
    /// Adversarial rounds in the regret suite.
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub rounds: u64,
    #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
    pub vertex_cap: u128,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<FaultArg>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// Destination; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `WIDTHxHEIGHT`, each between 1 and 64.
pub fn parse_grid(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    let dim = |d: &str| -> std::result::Result<usize, String> {
        match d.parse::<usize>() {
            Ok(n) if (1..=64).contains(&n) => Ok(n),
            _ => Err(format!("grid dimension `{d}` is not an integer in 1..=64")),
        }
    };
    Ok((dim(w)?, dim(h)?))
}

impl GameArgs {
    pub fn spec(&self) -> Option<GameSpec> {
        let kind = self.game?;
        let ranks = self.ranks.unwrap_or(match kind {
            GameKind::Kuhn3 => 4,
            _ => 3,
        });
        Some(match kind {
            GameKind::Kuhn2 => GameSpec::Kuhn2 { ranks },
            GameKind::Kuhn3 => GameSpec::Kuhn3 { ranks },
            GameKind::Goofspiel3 => GameSpec::Goofspiel3 { ranks },
            GameKind::Leduc3 => GameSpec::Leduc3 { ranks },
            GameKind::Battleship => GameSpec::Battleship {
                width: self.grid.0,
                height: self.grid.1,
                rounds: self.rounds,
                ship_length: self.ship_length,
                ship_value: self.ship_value,
                loss_multiplier: self.loss_multiplier,
            },
        })
    }

    pub fn describe(&self) -> String {
        match (&self.game_file, self.spec()) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(spec)) => spec.to_string(),
            (None, None) => "?".into(),
        }
    }

    pub fn load(&self) -> Result<Game> {
        if let Some(path) = &self.game_file {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return games::load(&text).with_context(|| format!("parsing {}", path.display()));
        }
        let spec = self.spec().context("no game given")?;
        Ok(games::generate(&spec)?)
    }
}

/// Sizes the global thread pool from `EFCCE_THREADS`, or to one thread when
/// `single` is set.
pub fn configure_threads(single: bool) -> Result<()> {
    let threads = match std::env::var("EFCCE_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .with_context(|| format!("EFCCE_THREADS must be a positive integer, got `{v}`"))?;
            Some(n)
        }
        Err(_) => None,
    };
    let threads = if single { Some(1) } else { threads };
    if let Some(n) = threads {
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    configure_threads(args.single_threaded)?;
    let game = args.game.load()?;
    let config = RunConfig {
        iterations: args.iters as usize,
        schedule: if args.dyadic {
            Schedule::Dyadic
        } else {
            Schedule::Every(args.gap_every as usize)
        },
        seed: args.seed,
        record_iterates: args.oracle,
        track_regret: false,
    };
    let started = Instant::now();
    let mut out = open_out(args.out.as_deref())?;
    writeln!(out, "{}", log::header(game.num_players()))?;
    let mut io_err = None;
    let run = run_dynamics_with(&game, &config, |cp| {
        let mut cp = cp.clone();
        if args.single_threaded {
            cp.elapsed_ms = 0;
        }
        let res = writeln!(out, "{}", log::row(&cp)).and_then(|_| out.flush());
        res.map_err(|e| {
            io_err = Some(e.to_string());
            efcce::Error::Io("writing log".into())
        })
    });
    let log = match run {
        Err(_) if io_err.is_some() => bail!("writing the log: {}", io_err.unwrap()),
        r => r?,
    };
    out.flush()?;
    drop(out);

    let last = log.checkpoints.last().expect("the final iteration is a checkpoint");
    let mut summary: Box<dyn Write> = if args.out.is_some() {
        Box::new(io::stdout())
    } else {
        Box::new(io::stderr())
    };
    writeln!(summary, "game: {}", args.game.describe())?;
    writeln!(
        summary,
        "iterations: {}, checkpoints: {}, time: {:.2}s",
        last.iter,
        log.checkpoints.len(),
        started.elapsed().as_secs_f64()
    )?;
    writeln!(summary, "gap: {}", last.gap)?;
    for (i, g) in last.per_player.iter().enumerate() {
        writeln!(summary, "gap player {}: {g}", i + 1)?;
    }
    if args.oracle {
        let iterates = log.iterates.as_deref().unwrap_or_default();
        let brute = brute_force_gap(&game, iterates, args.vertex_cap)?;
        writeln!(summary, "brute-force gap: {brute}")?;
        writeln!(summary, "difference: {:e}", (brute - last.gap).abs())?;
    }
    Ok(())
}

pub fn cmd_gensize(args: &GameArgs) -> Result<()> {
    let game = args.load()?;
    let mut out = io::stdout().lock();
    writeln!(out, "player,infosets,sequences")?;
    for (i, (infosets, seqs)) in game.sizes().into_iter().enumerate() {
        writeln!(out, "{},{infosets},{seqs}", i + 1)?;
    }
    Ok(())
}

/// Returns whether every suite passed.
pub fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let suites: Vec<Suite> = if args.suite.is_empty() {
        Suite::DEFAULT.to_vec()
    } else {
        args.suite.iter().map(|&s| s.into()).collect()
    };
    let opts = VerifyOptions {
        seed: args.seed,
        deviations: args.deviations,
        rounds: args.rounds as usize,
        vertex_cap: args.vertex_cap,
        fault: args.inject_fault.map(|FaultArg::SkipUniform| Fault::SkipUniformBranch),
    };
    let mut all_ok = true;
    let mut out = io::stdout().lock();
    for suite in suites {
        let started = Instant::now();
        let report = verify::run_suite(suite, &opts)?;
        let secs = started.elapsed().as_secs_f64();
        if report.passed() {
            writeln!(out, "PASS {suite}: {} checks ({secs:.1}s)", report.checks)?;
        } else {
            all_ok = false;
            writeln!(
                out,
                "FAIL {suite}: {} of {} checks failed ({secs:.1}s)",
                report.failed, report.checks
            )?;
            if let Some(c) = &report.counterexample {
                writeln!(out, "  first counterexample: {c}")?;
            }
        }
        for note in &report.notes {
            writeln!(out, "  {note}")?;
        }
    }
    Ok(all_ok)
}

pub fn cmd_export(args: &ExportArgs) -> Result<()> {
    let game = args.game.load()?;
    let text = games::save(&game)?;
    let mut out = open_out(args.out.as_deref())?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

impl Cli {
    /// Checks the game parameters, which clap cannot express; failures are
    /// usage errors.
    pub fn validate(&self) -> std::result::Result<(), clap::Error> {
        let game = match &self.command {
            Command::Run(a) => &a.game,
            Command::Gensize(a) => a,
            Command::Export(a) => &a.game,
            Command::Verify(_) => return Ok(()),
        };
        match game.spec().map(|s| s.validate()) {
            Some(Err(e)) => Err(Cli::command().error(ErrorKind::ValueValidation, e)),
            _ => Ok(()),
        }
    }
}

/// Runs a parsed command line; the result is the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let res = match &cli.command {
        Command::Run(a) => cmd_run(a).map(|_| true),
        Command::Gensize(a) => cmd_gensize(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
        Command::Export(a) => cmd_export(a).map(|_| true),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}
