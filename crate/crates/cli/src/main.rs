//! `pellcount`: command-line front end for the counting, bound, sum,
//! smooth-number and verification routines of `pellcount-core`.
//!
//! Exit codes: `0` success, `1` a verification or agreement failure,
//! `2` invalid input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "pellcount",
    version,
    about = "Pell-equation counts, exponential sums and their bounds"
)]
pub struct Cli {
    /// Worker threads for the data-parallel kernels.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count S(x, α) and S^f(x, α).
    Count(CountArgs),
    /// Fundamental solution of t² − D u² = 1.
    Solve {
        #[arg(long)]
        d: u64,
    },
    /// Lower-bound coefficients on a grid of α.
    Bounds(BoundsArgs),
    /// Complete exponential sums with their upper bounds.
    Sums {
        #[command(subcommand)]
        kind: SumKind,
    },
    /// Dickman ρ and smooth-number counts.
    Smooth {
        #[command(subcommand)]
        kind: SmoothKind,
    },
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    /// Comma-separated list of x values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub x: Vec<f64>,
    /// Comma-separated list of α values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alpha: Vec<f64>,
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    /// Fundamental-solution cache file, read before and written after the run.
    #[arg(long, env = "PELLCOUNT_CACHE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Loop over D and the powers of ε_D.
    Dloop,
    /// Loop over u and the roots Ω.
    Param,
    Both,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_step: f64,
    /// A number in (0, 1/2) or `auto`.
    #[arg(long, default_value = "auto")]
    pub theta: String,
    #[arg(long)]
    pub vartheta: Option<f64>,
    #[arg(long, default_value_t = 1e6)]
    pub x: f64,
    /// Also write a line chart of the coefficients to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum SumKind {
    /// T(h, q).
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
        #[arg(long)]
        q: u64,
    },
    /// K(m, n; q).
    Kloosterman {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        q: u64,
    },
    /// 𝔅(m, n, ℓ, u; q) and Σ(λ, q) for the matching rational function.
    B {
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long, allow_hyphen_values = true)]
        u: i64,
        #[arg(long)]
        q: u64,
    },
    /// Σ(R, u₁²; h) by the direct and the shifted route.
    Vdc {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        u1: u64,
        #[arg(long)]
        u0: u64,
        #[arg(long, allow_hyphen_values = true)]
        h: i64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SmoothKind {
    /// ρ(u) to 12 digits.
    Rho {
        #[arg(long)]
        u: f64,
    },
    /// Ψ(x, y) and x ρ(log x / log y).
    Psi {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    pub level: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only the named suites (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub suites: Vec<String>,
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
