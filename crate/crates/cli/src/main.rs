mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Mod-p modular forms from the command line.
///
/// Exit status: 0 when a form was built or a check passed, 1 when a check
/// ran and failed (a witness is printed), 2 on usage or precondition errors.
#[derive(Parser, Debug)]
#[command(name = "kats", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Truncate inputs to, or build outputs with, precision `B` (a_0..a_B).
    #[arg(long, global = true)]
    pub prec: Option<u64>,
    /// Coefficient field `p` or `p^d`.
    #[arg(long, short = 'p', global = true, value_name = "p^d")]
    pub field: Option<String>,
    /// Input form file; repeat for commands taking two forms, `-` for stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Form files for forms, `key: value` lines for checks.
    Text,
    /// Sorted `key=value` lines.
    Report,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced Eisenstein series E_k^{chi1, chi2}.
    Eisenstein {
        #[arg(short = 'k')]
        k: u64,
        /// `triv` or `chi(N;g:v,...)`.
        #[arg(long, default_value = "triv")]
        chi1: String,
        #[arg(long, default_value = "triv")]
        chi2: String,
        #[arg(short = 't', default_value_t = 1)]
        t: u64,
    },
    /// Hecke operator T_n.
    Hecke {
        #[arg(short = 'n')]
        n: u64,
    },
    /// Theta operator q d/dq, applied `times` times.
    Theta {
        #[arg(long, default_value_t = 1)]
        times: u64,
    },
    /// f(q) -> f(q^p).
    Frobenius,
    /// f(q) -> f(q^d) at level M.
    Degeneracy {
        #[arg(short = 'd')]
        d: u64,
        #[arg(long)]
        level: u64,
    },
    /// Clear the coefficients at multiples of the given primes dividing N.
    Kill {
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Write a form in the theta kernel as A^r g(q^p).
    DecomposeTheta,
    /// Generators of the level and weight old space of a form.
    Oldspace {
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        weight: Option<u64>,
        /// Also write each generator to DIR/<label>.form.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
    /// Is the input in the old space of the newform?
    Member {
        #[arg(long, value_name = "FILE")]
        newform: PathBuf,
    },
    /// Two-stage recovery of the input from the newform.
    Decompose {
        #[arg(long, value_name = "FILE")]
        newform: PathBuf,
    },
    /// Prime-by-prime relations between a form and a newform of lower level.
    CheckCor37 {
        #[arg(long, value_name = "FILE")]
        newform: PathBuf,
    },
    /// Companion identity n^k b_n = n a_n and the relations to a newform.
    CheckCor47 {
        #[arg(long, value_name = "FILE")]
        companion: PathBuf,
        #[arg(long, value_name = "FILE")]
        newform: Option<PathBuf>,
    },
    /// Weight congruence and character equality of two forms.
    CheckProp24,
    /// Compare two eigensystems at primes up to a bound.
    Compare {
        #[arg(long, value_delimiter = ',')]
        bad: Vec<u64>,
        #[arg(long, default_value_t = 200)]
        bound: u64,
    },
    /// Eigenform realizing eps' chi^a + eps chi^b.
    Lemma45 {
        /// i, ii, iii or iv.
        #[arg(long)]
        case: String,
        #[arg(short = 'a')]
        a: u64,
        #[arg(short = 'b')]
        b: u64,
        #[arg(short = 'k')]
        k: u64,
        #[arg(long, default_value = "triv")]
        chi1: String,
        #[arg(long, default_value = "triv")]
        chi2: String,
    },
    /// Built-in integer forms reduced mod p.
    Corpus {
        /// delta, E4, E6, E8, E10 or E14.
        name: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = io::emit(&cli.global, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
