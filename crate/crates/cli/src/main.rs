//! `msk`: homology, obstruction, verification and prediction runs.

mod config;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use msk_core::lie::{DEFAULT_MAX_DIM, MAX_DIM_ENV};

use config::{Command, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgebraName {
    So,
    Su,
    G2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Numeric,
}

#[derive(Parser, Debug)]
#[command(name = "msk", version, about = "Homotopy comoment maps for actions on spheres")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Largest `dim Λ^k g` any exact elimination may touch.
    #[arg(long, global = true, env = MAX_DIM_ENV, default_value_t = DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Chevalley-Eilenberg homology dimensions.
    Homology {
        #[arg(long, value_enum)]
        algebra: AlgebraName,
        /// Matrix size for `so` and `su`.
        #[arg(long)]
        n: Option<usize>,
        /// Degree range `a..b` (inclusive); all degrees when omitted.
        #[arg(long)]
        degrees: Option<String>,
    },
    /// The pointwise obstruction class of a sphere action.
    Obstruction {
        #[arg(long)]
        case: String,
        #[arg(long, default_value_t = msk_core::comoment::DEFAULT_SEED)]
        seed: u64,
    },
    /// Construct a comoment and check its equations.
    Verify {
        #[arg(long)]
        case: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Decimal digits for numeric evaluation.
        #[arg(long, default_value_t = msk_core::algebra::DEFAULT_DIGITS)]
        precision: u32,
        #[arg(long, default_value = msk_core::comoment::DEFAULT_TOLERANCE)]
        tolerance: String,
        #[arg(long, default_value_t = msk_core::comoment::DEFAULT_SEED)]
        seed: u64,
        /// Defaults to exact except for cases with transcendental residuals.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Also check equivariance.
        #[arg(long)]
        equivariance: bool,
        /// Add `x^0 dx^1 ∧ ...` to the first value of f_1, to exercise the
        /// failure path.
        #[arg(long, hide = true)]
        perturb: bool,
    },
    /// Decide existence from transitivity and sphere parity.
    Predict {
        #[arg(long)]
        case: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        samples: usize,
        #[arg(long, default_value_t = msk_core::comoment::DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Homology { algebra, n, degrees } => Command::Homology { algebra, n, degrees },
        Cmd::Obstruction { case, seed } => Command::Obstruction { case, seed },
        Cmd::Verify {
            case,
            n,
            samples,
            precision,
            tolerance,
            seed,
            mode,
            equivariance,
            perturb,
        } => Command::Verify {
            case,
            n,
            samples,
            precision,
            tolerance,
            seed,
            mode,
            equivariance,
            perturb,
        },
        Cmd::Predict { case, n, samples, seed } => Command::Predict { case, n, samples, seed },
    };
    let config = RunConfig {
        command,
        format: cli.format,
        max_dim: cli.max_dim,
    };
    match report::run(&config) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("msk: {e}");
            ExitCode::from(2)
        }
    }
}
