//! `spherecover`: generate instances, certify covers, print uncovered
//! points and solve for common points. Every run prints one canonical JSON
//! report per line on stdout.
//!
//! Exit codes: 0 positive, 1 refuted, 2 input error, 3 resource limit.

mod canonical;
mod commands;
mod error;
mod family;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use spherecover::solver::{DEFAULT_DEPTH_LIMIT, DEFAULT_FACE_PROBES};

use commands::{CheckOptions, Kind, Mode, Outcome};
use error::{CliError, Exit};

#[derive(Parser)]
#[command(name = "spherecover", version, about = "Covers of S^n by caps and short closed sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded instance as JSON
    Generate {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Shatter depth for shattered-cover and lemma1
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; the instance goes to stdout when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether each family file covers the sphere
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Certificate)]
        mode: Mode,
        /// Lattice depth of the sampling oracle (n >= 2)
        #[arg(long, default_value_t = 4)]
        mesh_depth: u32,
        /// Rational arithmetic in the circle oracle (n = 1 only)
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Seeded random samples added to the lattice
        #[arg(long, default_value_t = 0)]
        extra_samples: usize,
    },
    /// Print a point missed by a family of at most n + 1 caps
    Witness { file: PathBuf },
    /// Find a common point of a closed cover of a spherical simplex
    SolveLemma1 {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = DEFAULT_DEPTH_LIMIT)]
        depth_limit: u32,
        /// Seeded probes per face for the face-condition check
        #[arg(long, default_value_t = DEFAULT_FACE_PROBES)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn report(command: &str, mode: &str, seed: Option<u64>, started: Instant, outcome: &Outcome) -> String {
    canonical::to_string(&json!({
        "command": command,
        "digest": outcome.digest,
        "mode": mode,
        "result": outcome.result,
        "seed": seed,
        "timings_ms": {"total": started.elapsed().as_secs_f64() * 1e3},
        "version": env!("CARGO_PKG_VERSION"),
    }))
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SPHERECOVER_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::input(format!("SPHERECOVER_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::input(e.to_string()))
}

fn run(cli: Cli) -> Result<Exit, CliError> {
    configure_threads()?;
    let started = Instant::now();
    match cli.command {
        Command::Generate { dim, kind, depth, seed, output } => {
            let (doc, notes) = commands::generate(dim, kind, depth, seed)?;
            let text = canonical::to_string(&doc);
            match output {
                None => println!("{text}"),
                Some(path) => {
                    std::fs::write(&path, format!("{text}\n"))
                        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
                    let outcome = Outcome { exit: Exit::Positive, digest: canonical::digest(&doc), result: notes };
                    println!("{}", report("generate", kind_name(kind), Some(seed), started, &outcome));
                }
            }
            Ok(Exit::Positive)
        }
        Command::Check { files, mode, mesh_depth, exact, seed, extra_samples } => {
            let opts = CheckOptions { mode, mesh_depth, exact, seed, extra_samples };
            let mut worst = Exit::Positive;
            for outcome in commands::check_all(&files, opts) {
                match outcome {
                    Ok(o) => {
                        println!("{}", report("check", mode.name(), Some(seed), started, &o));
                        worst = worst.max(o.exit);
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        worst = worst.max(e.exit);
                    }
                }
            }
            Ok(worst)
        }
        Command::Witness { file } => {
            let o = commands::witness(&commands::read_json(&file)?)?;
            println!("{}", report("witness", "caps", None, started, &o));
            Ok(o.exit)
        }
        Command::SolveLemma1 { file, eps, depth_limit, probes, seed } => {
            let o = commands::solve_lemma1(&commands::read_json(&file)?, eps, depth_limit, probes, seed)?;
            println!("{}", report("solve-lemma1", "branch_and_bound", Some(seed), started, &o));
            Ok(o.exit)
        }
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::SimplexCover => "simplex-cover",
        Kind::ShatteredCover => "shattered-cover",
        Kind::Arcs => "arcs",
        Kind::Lemma1 => "lemma1",
        Kind::HemisphereSectors => "hemisphere-sectors",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit as u8)
        }
    }
}
