use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use parth::driver::{check_matrix, generate_to_dir, run_manifest, Baseline, RunOptions};
use parth::engine::{MaxLevel, ParthConfig};
use parth::hgd::{DEFAULT_MIN_SPLIT, DEFAULT_TARGET_LEAF};
use parth::ordering::OrderingKind;
use parth::separator::SeparatorKind;
use parth::synthetic::{SequenceKind, SequenceSpec};

#[derive(Parser)]
#[command(name = "parth", version, about = "Incremental fill-reducing orderings for changing sparsity patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a manifest and write per-step metrics as CSV.
    Run {
        manifest: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Full recompute each step for fill comparison.
        #[arg(long, default_value = "full")]
        baseline: Baseline,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic sequence (matrices, maps, manifest) to a directory.
    Gen {
        #[arg(long, default_value = "contacts")]
        kind: SequenceKind,
        #[arg(long, default_value_t = 64)]
        nx: usize,
        #[arg(long, default_value_t = 64)]
        ny: usize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Hop radius of each changed region.
        #[arg(long, default_value_t = 5)]
        radius: usize,
        /// Contact edges added per step.
        #[arg(long, default_value_t = 20)]
        contacts: usize,
        /// New-to-removed node ratio for remeshing.
        #[arg(long, default_value_t = 1.0)]
        densify: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Audit the decomposition of one matrix.
    Check {
        matrix: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
    },
}

#[derive(Args)]
struct EngineArgs {
    /// Matrix rows per graph node.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value = "auto")]
    max_level: MaxLevel,
    #[arg(long, default_value_t = DEFAULT_TARGET_LEAF)]
    target_leaf: usize,
    #[arg(long, default_value_t = DEFAULT_MIN_SPLIT)]
    min_split: usize,
    #[arg(long, default_value = "level_set")]
    separator: SeparatorKind,
    #[arg(long, default_value = "mindeg")]
    local_ordering: OrderingKind,
    /// Enable aggressive reuse, optionally with a threshold in (0, 1].
    #[arg(long, num_args = 0..=1, require_equals = true, default_missing_value = "0.5")]
    aggressive_reuse: Option<f64>,
    /// Overridden by the PARTH_SEED environment variable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

impl EngineArgs {
    fn config(&self) -> Result<ParthConfig, String> {
        let seed = match std::env::var("PARTH_SEED") {
            Ok(s) => s.trim().parse().map_err(|_| format!("PARTH_SEED='{s}' is not an integer"))?,
            Err(_) => self.seed,
        };
        if let Some(t) = self.aggressive_reuse {
            if !(t > 0.0 && t <= 1.0) {
                return Err(format!("aggressive reuse threshold {t} outside (0, 1]"));
            }
        }
        Ok(ParthConfig {
            dim: self.dim,
            max_level: self.max_level,
            target_leaf: self.target_leaf.max(1),
            min_split: self.min_split,
            separator: self.separator,
            ordering: self.local_ordering,
            aggressive: self.aggressive_reuse,
            seed,
            threads: self.threads.max(1),
        })
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<bool, String> {
    match command {
        Command::Run {
            manifest,
            engine,
            baseline,
            out,
        } => {
            let opts = RunOptions {
                config: engine.config()?,
                baseline,
                ..Default::default()
            };
            let sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(BufWriter::new(
                    File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
                )),
                None => Box::new(io::stdout().lock()),
            };
            run_manifest(&manifest, &opts, sink).map_err(|e| e.to_string())?;
            Ok(true)
        }
        Command::Gen {
            kind,
            nx,
            ny,
            steps,
            radius,
            contacts,
            densify,
            seed,
            out,
        } => {
            let spec = SequenceSpec {
                kind,
                nx,
                ny,
                steps,
                radius,
                contacts,
                densify,
                seed,
            };
            let manifest = generate_to_dir(&spec, &out).map_err(|e| e.to_string())?;
            println!("{}", manifest.display());
            Ok(true)
        }
        Command::Check { matrix, engine } => {
            let report = check_matrix(&matrix, &engine.config()?).map_err(|e| e.to_string())?;
            println!("{report}");
            let passed = report.passed();
            println!("{}", if passed { "PASS" } else { "FAIL" });
            Ok(passed)
        }
    }
}
