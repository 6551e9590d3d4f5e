mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Overrides, RunConfig};
use error::CliError;

/// Factorize almost-periodic symbols and apply Wiener-Hopf plus Hankel
/// operators.
#[derive(Debug, Parser)]
#[command(name = "whap", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML file with grid_t, grid_n, threshold, horizon, seed; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long = "grid-T", global = true)]
    grid_t: Option<f64>,
    #[arg(long = "grid-N", global = true)]
    grid_n: Option<usize>,
    /// Residual threshold for verify-op.
    #[arg(long, global = true)]
    threshold: Option<f64>,
    /// Mean-motion horizon.
    #[arg(long, global = true)]
    horizon: Option<f64>,
    /// Seed of the random part of the test battery.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SymbolArgs {
    #[arg(long, conflicts_with = "symbol_file", allow_hyphen_values = true)]
    symbol: Option<String>,
    #[arg(long)]
    symbol_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Index and invertibility class of WH_φ.
    Classify {
        #[command(flatten)]
        symbol: SymbolArgs,
        /// Use this factorization instead of computing one.
        #[arg(long)]
        factorization: Option<PathBuf>,
    },
    /// Asymmetric factorization φ = φ₋ e_λ φ_e as JSON.
    Factorize {
        #[command(flatten)]
        symbol: SymbolArgs,
    },
    /// Apply the reflexive generalized inverse to a signal.
    Invert {
        #[arg(long)]
        factorization: PathBuf,
        /// CSV with columns x,re,im on the configured grid.
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, value_enum, default_value_t = Ell::Zero)]
        ell: Ell,
        /// Needed only for antisymmetric factorizations.
        #[command(flatten)]
        symbol: SymbolArgs,
    },
    /// Sample a symbol on [from, to] as CSV x,re,im.
    Trace {
        #[command(flatten)]
        symbol: SymbolArgs,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long, default_value_t = 10_000)]
        points: usize,
    },
    /// Measure an operator identity over the test battery.
    VerifyOp {
        #[arg(long, value_enum)]
        check: Check,
        /// Symbols in the order the identity takes them.
        #[arg(long = "symbol", allow_hyphen_values = true)]
        symbols: Vec<String>,
        /// Factorization for the inverse checks.
        #[arg(long)]
        factorization: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ell {
    Zero,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Eqseg,
    Eq6,
    Prop31,
    Prop32,
    Thm52Right,
    Thm52Left,
    Thm52TwoSided,
    HankelVanishing,
    ExtensionIndependence,
}

impl SymbolArgs {
    fn text(&self) -> Result<Option<String>, CliError> {
        match (&self.symbol, &self.symbol_file) {
            (Some(s), _) => Ok(Some(s.clone())),
            (None, Some(path)) => std::fs::read_to_string(path)
                .map(|s| Some(s.trim().to_string()))
                .map_err(|e| CliError::io(path, e)),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<String, CliError> {
        self.text()?
            .ok_or_else(|| CliError::Usage("one of --symbol or --symbol-file is required".into()))
    }
}

/// `Ok(false)` when a residual check ran but failed.
fn run(cli: Cli) -> Result<bool, CliError> {
    let g = &cli.global;
    let overrides = Overrides {
        grid_t: g.grid_t,
        grid_n: g.grid_n,
        threshold: g.threshold,
        horizon: g.horizon,
        seed: g.seed,
    };
    let cfg = RunConfig::load(g.config.as_deref(), &overrides)?;
    let out = g.out.as_deref();
    match &cli.command {
        Command::Classify { symbol, factorization } => {
            commands::classify(&cfg, symbol.text()?.as_deref(), factorization.as_deref(), out)
        }
        Command::Factorize { symbol } => commands::factorize(&symbol.require()?, out),
        Command::Invert {
            factorization,
            signal,
            ell,
            symbol,
        } => commands::invert(&cfg, factorization, signal, *ell, symbol.text()?.as_deref(), out),
        Command::Trace {
            symbol,
            from,
            to,
            points,
        } => commands::trace(&symbol.require()?, *from, *to, *points, out),
        Command::VerifyOp {
            check,
            symbols,
            factorization,
        } => commands::verify_op(&cfg, *check, symbols, factorization.as_deref(), out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
