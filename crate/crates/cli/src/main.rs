mod commands;
mod converge;
mod inputs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polychain::torus::DEFAULT_PRIME;

#[derive(Parser, Debug)]
#[command(name = "polychain", version, about = "Polyhedral chains with prescribed Gaussian images, fillings and anisotropic energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Obj,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Obj => "obj",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Construction {
    Cycle,
    Fill,
    Multigraph,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Prime used to pick the generic offsets of the periodic families.
    #[arg(long = "offset-seed", default_value_t = DEFAULT_PRIME)]
    pub offset_seed: u64,
    /// Quadrature order for varifold pairings.
    #[arg(long = "quad-order", default_value_t = 3)]
    pub quad_order: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cycle on the unit cube whose Gaussian image approximates a zero-class measure.
    Cycle {
        #[arg(long)]
        measure: PathBuf,
        /// Grid size N.
        #[arg(long, default_value = "4")]
        sizes: String,
        #[command(flatten)]
        common: Common,
    },
    /// Filling of the unit cube boundary.
    Fill {
        #[arg(long)]
        measure: PathBuf,
        /// `N` or `NxM`; M defaults to max(2, ⌊√N⌋).
        #[arg(long, default_value = "9x3")]
        sizes: String,
        #[command(flatten)]
        common: Common,
    },
    /// Positively oriented filling of the unit segment boundary.
    Multigraph {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value = "9x3")]
        sizes: String,
        #[command(flatten)]
        common: Common,
    },
    /// Q-valued map of a positively oriented chain with boundary ∂[0,1].
    Extract {
        #[arg(long)]
        chain: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Anisotropic energy of a chain.
    Energy {
        #[arg(long)]
        chain: PathBuf,
        /// Integrand JSON; the area integrand when absent.
        #[arg(long)]
        psi: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Filling-energy linear program and strict-gap witness.
    Lp {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Exact rational approximation of a float measure.
    Approx {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Keep the support positively oriented with respect to the coordinate plane.
        #[arg(long)]
        positive: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Multigraph beating the flat map for an integrand with a polyconvexity gap.
    Counterexample {
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        /// Largest multigraph, in cells.
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// CSV convergence table over several grid sizes.
    Converge {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long, default_value = "4,8,16")]
        sizes: String,
        #[arg(long, value_enum, default_value_t = Construction::Cycle)]
        construction: Construction,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-emit a chain as JSON, SVG or OBJ.
    Export {
        #[arg(long)]
        chain: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2: nothing is written.
    Input { kind: String, message: String },
    /// Exit 3: the output is written, then the violated postcondition reported.
    Postcondition { kind: String, message: String, output: Option<String> },
}

impl Failure {
    pub fn input(kind: &str, message: impl Into<String>) -> Self {
        Failure::Input { kind: kind.to_string(), message: message.into() }
    }
}

fn emit(text: &str, common: &Common) -> Result<(), Failure> {
    match &common.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::input("IoError", format!("{}: {e}", p.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::input("IoError", e.to_string())),
            _ => Ok(()),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = commands::common_of(&cli.command).clone();
    match commands::run(&cli.command) {
        Ok(text) => match emit(&text, &common) {
            Ok(()) => ExitCode::SUCCESS,
            Err(Failure::Input { kind, message }) | Err(Failure::Postcondition { kind, message, .. }) => {
                eprintln!("{kind}: {message}");
                ExitCode::from(2)
            }
        },
        Err(Failure::Input { kind, message }) => {
            eprintln!("{kind}: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Postcondition { kind, message, output }) => {
            if let Some(text) = output {
                if let Err(Failure::Input { kind, message } | Failure::Postcondition { kind, message, .. }) = emit(&text, &common) {
                    eprintln!("{kind}: {message}");
                }
            }
            eprintln!("{kind}: {message}");
            ExitCode::from(3)
        }
    }
}
