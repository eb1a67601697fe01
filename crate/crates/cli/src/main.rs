//! `cartier`: command-line front end for test ideals, thresholds and
//! constancy regions over prime fields.

mod args;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cartier_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                cartier_core::Error::Verification(_) | cartier_core::Error::Internal(_),
            ) => 2,
            _ => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "cartier",
    version,
    about = "Test ideals, F-thresholds and constancy regions over F_p"
)]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write a run manifest to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Record wall-clock time in the manifest (makes it run dependent).
    #[arg(long, global = true)]
    wall_clock: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mixed test ideal of a list of EXPR:NUM/DEN pairs.
    Tau {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: String,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        /// `full` or generators `e:EXPR,...`.
        #[arg(long, default_value = "full")]
        alg: String,
        #[arg(long, default_value_t = 2)]
        conf: u32,
        #[arg(long, default_value_t = 1)]
        start: u32,
        #[arg(long, default_value_t = 36)]
        max_level: u32,
    },
    /// F-pure threshold in the exponent of `--free`, other exponents fixed.
    Fpt {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: String,
        #[arg(long)]
        fixed: Vec<String>,
        #[arg(long)]
        free: String,
        #[arg(long)]
        depth: u32,
        #[arg(long, default_value_t = 6)]
        confirm: u32,
        #[arg(long, default_value_t = 2)]
        conf: u32,
    },
    /// Constancy intervals of τ(f^t) on [0, T] as CSV.
    Jumps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long)]
        free: String,
        #[arg(long = "T")]
        bound: String,
        #[arg(long)]
        depth: u32,
    },
    /// Class of τ at every grid point of [0, T]^n.
    Raster {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: Option<String>,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[arg(long = "T")]
        bound: String,
        #[arg(long)]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Overlay the staircase of the cusp example on the SVG.
        #[arg(long)]
        staircase: bool,
    },
    /// Frobenius decomposition, one `(i,...): poly` line per component.
    Decompose {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Bracket root I^[1/p^e].
    BracketRoot {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Stable image of a Cartier algebra.
    Sigma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        vars: String,
        #[arg(long)]
        alg: String,
        #[arg(long)]
        start: Option<String>,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Compares τ on a base with τ of the pulled-back data on a chart.
    PullbackCheck {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        base: String,
        #[arg(long)]
        fiber: String,
        #[arg(long = "pair", required = true)]
        pairs: Vec<String>,
        #[arg(long, default_value = "full")]
        alg: String,
    },
    /// ξ_{p-1} = det^{p-1} over GL_n(F_p).
    Xi {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long)]
        random: Option<usize>,
    },
    /// The multinomial identity behind ξ_{p-1} = det^{p-1}.
    XiComb {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        /// Row-major entries; all admissible matrices when omitted.
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Jacobian, Frobenius jacobian and ξ for a change of p-basis.
    BasisChange {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        laurent: bool,
        #[arg(long)]
        old: String,
        #[arg(long)]
        new: String,
    },
    /// Staircase of the cusp example with its lengths.
    Staircase {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        depth: u32,
        /// Terms of the series; defaults to the depth.
        #[arg(long)]
        terms: Option<u32>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Tau { .. } => "tau",
            Command::Fpt { .. } => "fpt",
            Command::Jumps { .. } => "jumps",
            Command::Raster { .. } => "raster",
            Command::Decompose { .. } => "decompose",
            Command::BracketRoot { .. } => "bracket-root",
            Command::Sigma { .. } => "sigma",
            Command::PullbackCheck { .. } => "pullback-check",
            Command::Xi { .. } => "xi",
            Command::XiComb { .. } => "xi-comb",
            Command::BasisChange { .. } => "basis-change",
            Command::Staircase { .. } => "staircase",
        }
    }
}

#[derive(Serialize)]
struct ArtifactEntry {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command_line: Vec<String>,
    command: String,
    p: u64,
    ring: String,
    seed: u64,
    budgets: serde_json::Value,
    stdout_sha256: String,
    artifacts: Vec<ArtifactEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_ms: Option<u128>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn execute(cli: &Cli, argv: &[String]) -> Result<bool, CliError> {
    let started = Instant::now();
    let outcome = commands::run(&cli.command, cli.seed)?;
    let stdout = if cli.json {
        let doc = serde_json::json!({
            "p": outcome.p,
            "vars": outcome.vars,
            "command": cli.command.name(),
            "result": outcome.result,
            "hash": format!("{:016x}", cartier_core::ideal::hash_text(&outcome.text)),
        });
        serde_json::to_string_pretty(&doc)? + "\n"
    } else {
        outcome.text.clone()
    };
    let mut entries = Vec::new();
    for a in &outcome.artifacts {
        std::fs::write(&a.path, &a.bytes)?;
        entries.push(ArtifactEntry {
            path: a.path.display().to_string(),
            sha256: sha256_hex(&a.bytes),
        });
    }
    print!("{stdout}");
    if let Some(path) = &cli.manifest {
        let m = RunManifest {
            command_line: argv.to_vec(),
            command: cli.command.name().to_string(),
            p: outcome.p,
            ring: outcome.ring.clone(),
            seed: cli.seed,
            budgets: outcome.budgets.clone(),
            stdout_sha256: sha256_hex(stdout.as_bytes()),
            artifacts: entries,
            wall_clock_ms: cli.wall_clock.then(|| started.elapsed().as_millis()),
        };
        std::fs::write(path, serde_json::to_string_pretty(&m)? + "\n")?;
    }
    Ok(outcome.verified)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match execute(&cli, &argv) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
