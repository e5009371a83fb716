//! Command-line front end for the bidirectional teleportation simulator.

pub mod circuit;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::{Axis, OutputFormat, ScenarioConfig};
use error::{CliError, CliResult};

/// Optional default directory for relative `--output` paths.
pub const OUTPUT_DIR_VAR: &str = "ABQT_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "abqt",
    version,
    about = "Bidirectional coherent-state teleportation simulator"
)]
pub struct Cli {
    /// JSON scenario file; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta1: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every detection outcome for one parameter set.
    Run {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Fidelity surfaces over (theta, phi) and curves over alpha.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        /// Surface amplitudes.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        /// Points per angle axis over [0, 2 pi].
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        curve_alphas: Option<Vec<f64>>,
    },
    /// The 64 case-table rows, generated from the engine.
    Tables {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Cross-check the engine against the photon-number oracle.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Parse and evaluate a circuit file.
    Circuit {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        /// Parse and pretty-print only.
        #[arg(long)]
        check: bool,
    },
}

/// Rendered output and the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

fn apply_params(cfg: &mut ScenarioConfig, p: &ParamArgs) {
    if let Some(v) = p.alpha {
        cfg.alpha = v;
    }
    if let Some(v) = p.theta {
        cfg.theta = v;
        cfg.alice = None;
    }
    if let Some(v) = p.phi {
        cfg.phi = v;
        cfg.alice = None;
    }
    if let Some(v) = p.theta1 {
        cfg.theta1 = v;
        cfg.bob = None;
    }
}

/// Defaults, then the config file, then flags.
pub fn resolve_config(cli: &Cli) -> CliResult<ScenarioConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.format = Some(f);
    }
    match &cli.command {
        Command::Run { params } | Command::Tables { params } => apply_params(&mut cfg, params),
        Command::Sweep {
            params,
            alphas,
            points,
            curve_alphas,
        } => {
            apply_params(&mut cfg, params);
            if let Some(a) = alphas {
                cfg.sweep.alphas = a.clone();
            }
            if let Some(n) = points {
                cfg.sweep.theta = Axis::full_turn(*n);
                cfg.sweep.phi = Axis::full_turn(*n);
            }
            if let Some(a) = curve_alphas {
                cfg.sweep.curve_alphas = a.clone();
            }
        }
        Command::Verify {
            params,
            cutoff,
            eps,
            tolerance,
        } => {
            apply_params(&mut cfg, params);
            if cutoff.is_some() {
                cfg.oracle.cutoff = *cutoff;
            }
            if let Some(e) = eps {
                cfg.oracle.eps = *e;
            }
            if let Some(t) = tolerance {
                cfg.oracle.tolerance = *t;
            }
        }
        Command::Circuit { alpha, .. } => {
            if let Some(a) = alpha {
                cfg.alpha = *a;
            }
        }
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    let cfg = resolve_config(cli)?;
    let ok = |text| Outcome { text, exit_code: 0 };
    match &cli.command {
        Command::Run { .. } => {
            let r = commands::cmd_run(&cfg)?;
            Ok(ok(commands::render_run(
                &r,
                cfg.format.unwrap_or(OutputFormat::Markdown),
            )))
        }
        Command::Sweep { .. } => {
            let rows = commands::cmd_sweep(&cfg)?;
            Ok(ok(commands::render_sweep(
                &rows,
                cfg.format.unwrap_or(OutputFormat::Csv),
            )))
        }
        Command::Tables { .. } => {
            let rows = commands::cmd_tables(&cfg)?;
            Ok(ok(commands::render_tables(
                &rows,
                cfg.format.unwrap_or(OutputFormat::Markdown),
            )))
        }
        Command::Verify { .. } => {
            let r = commands::cmd_verify(&cfg)?;
            Ok(Outcome {
                text: commands::render_verify(&r, cfg.format.unwrap_or(OutputFormat::Markdown)),
                exit_code: if r.passed { 0 } else { 2 },
            })
        }
        Command::Circuit { file, check, .. } => {
            let text = std::fs::read_to_string(file).map_err(|e| CliError::Io {
                path: file.display().to_string(),
                message: e.to_string(),
            })?;
            let program = circuit::parse_circuit(&text).map_err(CliError::Circuit)?;
            if *check {
                return Ok(ok(program.to_string()));
            }
            if !(cfg.alpha.is_finite() && cfg.alpha > 0.0) {
                return Err(CliError::config(
                    "alpha",
                    format!("must be positive, got {}", cfg.alpha),
                ));
            }
            let r = circuit::evaluate(&program, cfg.alpha)?;
            Ok(ok(commands::render_circuit(
                &r,
                cfg.format.unwrap_or(OutputFormat::Markdown),
            )))
        }
    }
}

/// Resolves `--output` against [`OUTPUT_DIR_VAR`] when it is relative.
pub fn output_path(cli: &Cli) -> Option<PathBuf> {
    let path = cli.output.clone()?;
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Some(PathBuf::from(dir).join(path)),
        _ => Some(path),
    }
}
