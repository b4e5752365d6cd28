mod commands;
mod output;
mod search;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kakeya_core::interval::LogBase;

use crate::output::{Format, Refusal};

#[derive(Parser, Debug)]
#[command(name = "kakeya", version, about = "Exact checks of maximal Kakeya bounds over Z/NZ and F_q")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every random choice; falls back to KAKEYA_SEED.
    #[arg(long, global = true, env = "KAKEYA_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Base of unsubscripted logarithms in the constants.
    #[arg(long = "log-base", global = true, value_enum, default_value_t = LogBaseArg::Natural)]
    pub log_base: LogBaseArg,

    /// Refuse grids with more than this many points.
    #[arg(long = "max-grid", global = true, default_value_t = 1_000_000)]
    pub max_grid: u64,

    /// Refuse matrices with a side longer than this.
    #[arg(long = "max-dim", global = true, default_value_t = 4000)]
    pub max_dim: u64,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LogBaseArg {
    Natural,
    Two,
}

impl From<LogBaseArg> for LogBase {
    fn from(b: LogBaseArg) -> Self {
        match b {
            LogBaseArg::Natural => LogBase::Natural,
            LogBaseArg::Two => LogBase::Two,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    #[value(name = "1.2")]
    SetBound,
    #[value(name = "1.4")]
    MEps,
    #[value(name = "1.5")]
    Maximal,
    #[value(name = "1.8")]
    FiniteField,
    #[value(name = "1.9")]
    MaximalGeneral,
    #[value(name = "conj")]
    DualNorm,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Enumerate P(Z/NZ)^{n-1} and compare with the closed-form size.
    Projective {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long = "n")]
        n: usize,
    },
    /// Dump the maximal function f*(u) of a grid function.
    Maxfn {
        /// Grid function JSON ("-" for stdin).
        #[arg(long)]
        input: String,
    },
    /// Check one of the stated inequalities on an input.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Input JSON ("-" for stdin).
        #[arg(long)]
        input: String,
        /// Line richness m (for 1.4).
        #[arg(long)]
        m: Option<u64>,
        /// Direction fraction eps (for 1.4), e.g. 1/3 or 0.5.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Table of closed-form rank bound, diagonal count and actual rank of Coeff(M^l).
    RankExp {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: usize,
        #[arg(long = "n-vars")]
        n_vars: usize,
    },
    /// LDU factorization of the Vandermonde matrix (z^{ij}) over Z[z].
    Ldu {
        #[arg(long)]
        m: usize,
    },
    /// Decode f(z^{u'}) along every direction and verify the certificates.
    Decode {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long = "n-vars")]
        n_vars: usize,
        #[arg(long)]
        l: u64,
        /// Verify on all monomials with exponents below d.
        #[arg(long, default_value_t = 3)]
        d: u64,
        /// Include the full certificates in the JSON report.
        #[arg(long)]
        certificates: bool,
    },
    /// Schwartz-Zippel with multiplicities on random polynomials over F_q.
    SzTest {
        #[arg(long)]
        q: u64,
        #[arg(long = "n-vars")]
        n_vars: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "max-degree", default_value_t = 4)]
        max_degree: u64,
    },
    /// Search for a small (m, eps)-Kakeya set and compare its size with the lower bound.
    SearchKakeya {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long = "n")]
        n: usize,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        eps: String,
        /// Subsets the exhaustive phase may test before giving up.
        #[arg(long = "max-subsets", default_value_t = 200_000)]
        max_subsets: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => match output::emit(&cli, &report) {
            Ok(()) if report.holds => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            if let Some(r) = e.downcast_ref::<Refusal>() {
                eprintln!("refused: {r}");
                ExitCode::from(3)
            } else if let Some(kakeya_core::Error::Budget(msg)) = e.downcast_ref::<kakeya_core::Error>() {
                eprintln!("refused: {msg}");
                ExitCode::from(3)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        }
    }
}
