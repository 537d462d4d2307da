//! Command-line front end.
//!
//! ```text
//! coherence-roof [global flags] <measure|decide|roof|figure1|sample> ...
//! ```
//!
//! Exit codes: 0 on success (and for an EQUAL verdict), 2 for parse and
//! validation errors, 3 for STRICT, 4 for BOUNDARY, 1 for I/O failures.

pub mod commands;
pub mod config;
pub mod matrix_file;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use commands::{figure1_row, figure1_rows, CliError, Figure1Row, SampleResult, SampleRow};
pub use config::{OutputFormat, RunConfig};
pub use matrix_file::MatrixFile;

use crate::measures::FunctionalKind;

#[derive(Debug, Parser)]
#[command(name = "coherence-roof", version, about = "Coherence measures, convex roofs and exact l1 roof decisions")]
pub struct Cli {
    /// Base RNG seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Random restarts for the roof optimizer.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Pure states per decomposition (default d²).
    #[arg(long = "ensemble-size", global = true)]
    pub ensemble_size: Option<usize>,
    /// Iteration cap per restart.
    #[arg(long = "max-iters", global = true)]
    pub max_iters: Option<usize>,
    /// Named threshold, also accepted as `--tol.NAME VALUE`.
    /// Names: zero, boundary, phase_align, roof.
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    pub tol: Vec<String>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON config file with defaults (also read from $COHERENCE_ROOF_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct InputArgs {
    /// JSON matrix file.
    pub file: PathBuf,
    /// Rescale the trace to one before validation.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionalArg {
    L1,
    RelEntropy,
}

impl From<FunctionalArg> for FunctionalKind {
    fn from(f: FunctionalArg) -> Self {
        match f {
            FunctionalArg::L1 => FunctionalKind::L1,
            FunctionalArg::RelEntropy => FunctionalKind::RelEntropy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleEnsemble {
    /// Hilbert-Schmidt: `G G† / tr`, `G` complex Gaussian.
    Hs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// l1 and relative entropy coherence, and the spectrum.
    Measure(InputArgs),
    /// Decide whether the l1 coherence equals its convex roof (d <= 3).
    Decide(InputArgs),
    /// Upper-bound a convex roof by optimizing over decompositions.
    Roof {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "l1")]
        functional: FunctionalArg,
    },
    /// Qubit relative entropy coherence and its roof over 0 <= z <= r <= 1.
    Figure1 {
        /// Grid points per axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Decide a batch of random states.
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, value_enum, default_value = "hs")]
        ensemble: SampleEnsemble,
    },
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn error(e: &CliError) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("{e}\n"),
            code: e.exit_code(),
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os(config::CONFIG_ENV).map(PathBuf::from));
    if let Some(path) = path {
        let file = RunConfig::load_file(&path).map_err(CliError::Parse)?;
        config.apply_file(file).map_err(CliError::Validation)?;
    }
    if let Some(v) = cli.seed {
        config.seed = v;
    }
    if let Some(v) = cli.restarts {
        config.restarts = v;
    }
    if cli.ensemble_size.is_some() {
        config.ensemble_size = cli.ensemble_size;
    }
    if let Some(v) = cli.max_iters {
        config.max_iters = v;
    }
    if cli.format.is_some() {
        config.output_format = cli.format;
    }
    for t in &cli.tol {
        config.set_tolerance_arg(t).map_err(CliError::Validation)?;
    }
    config.validate().map_err(CliError::Validation)?;
    Ok(config)
}

fn envelope<T: Serialize>(
    command: &'static str,
    input: Option<commands::InputEcho>,
    config: &RunConfig,
    options: serde_json::Value,
    result: T,
) -> String {
    let env = commands::Envelope {
        command,
        input,
        config,
        options,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("results serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let config = resolve_config(cli)?;
    let fmt = |default| config.output_format.unwrap_or(default);
    let mut out = Outcome::default();
    match &cli.command {
        Command::Measure(input) => {
            let (echo, rho) = commands::load_matrix(&input.file, input.normalize)?;
            let r = commands::measure(&rho);
            out.stdout = match fmt(OutputFormat::Text) {
                OutputFormat::Text => r.text(),
                OutputFormat::Csv => r.csv(),
                OutputFormat::Json => envelope(
                    "measure",
                    Some(echo),
                    &config,
                    serde_json::json!({ "normalize": input.normalize }),
                    &r,
                ),
            };
        }
        Command::Decide(input) => {
            let (echo, rho) = commands::load_matrix(&input.file, input.normalize)?;
            let r = commands::decide(&rho, &config)?;
            out.code = r.verdict.exit_code();
            out.stdout = match fmt(OutputFormat::Text) {
                OutputFormat::Text => commands::decide_text(&r),
                OutputFormat::Csv => commands::decide_csv(&r, &rho),
                OutputFormat::Json => envelope(
                    "decide",
                    Some(echo),
                    &config,
                    serde_json::json!({ "normalize": input.normalize }),
                    &r,
                ),
            };
        }
        Command::Roof { input, functional } => {
            let (echo, rho) = commands::load_matrix(&input.file, input.normalize)?;
            let kind = FunctionalKind::from(*functional);
            let r = commands::roof(&rho, kind, &config)?;
            out.stdout = match fmt(OutputFormat::Text) {
                OutputFormat::Text => r.text(),
                OutputFormat::Csv => r.csv(),
                OutputFormat::Json => envelope(
                    "roof",
                    Some(echo),
                    &config,
                    serde_json::json!({ "normalize": input.normalize, "functional": kind }),
                    &r,
                ),
            };
        }
        Command::Figure1 { grid } => {
            let rows = commands::figure1_rows(*grid);
            out.stdout = match fmt(OutputFormat::Csv) {
                OutputFormat::Text | OutputFormat::Csv => commands::figure1_csv(&rows),
                OutputFormat::Json => envelope(
                    "figure1",
                    None,
                    &config,
                    serde_json::json!({ "grid": grid }),
                    &rows,
                ),
            };
        }
        Command::Sample { count, dim, ensemble } => {
            let SampleEnsemble::Hs = ensemble;
            let r = commands::sample(*count, *dim, config.seed, &config)?;
            match fmt(OutputFormat::Csv) {
                OutputFormat::Csv => {
                    out.stdout = r.csv();
                    out.stderr = format!("{}\n", r.tally_line());
                }
                OutputFormat::Text => {
                    out.stdout = format!("{}{}\n", r.csv(), r.tally_line());
                }
                OutputFormat::Json => {
                    out.stdout = envelope(
                        "sample",
                        None,
                        &config,
                        serde_json::json!({ "count": count, "dim": dim, "ensemble": "hs" }),
                        &r,
                    );
                }
            }
        }
    }
    if let Some(path) = &cli.output {
        std::fs::write(path, &out.stdout)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        out.stdout.clear();
    }
    Ok(out)
}

/// Runs the CLI on `args` (including the program name) without touching the
/// process streams.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    let args = config::rewrite_tol_flags(args);
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code: 0,
                }
            };
        }
    };
    execute(&cli).unwrap_or_else(|e| Outcome::error(&e))
}

/// Runs on the process arguments, prints, and returns the exit code.
pub fn main_entry() -> i32 {
    use std::io::Write;
    let out = run(std::env::args_os());
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    out.code
}
