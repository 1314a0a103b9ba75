//! `hellinger`: distances, geodesics, Fisher matrices and self-checks from
//! the command line.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or input error,
//! 3 domain error, 4 no convergence.

mod commands;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hellinger_core::verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "hellinger", version, about = "Hellinger and Fisher-Rao geometry of finite measures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two inputs, printed as JSON.
    Distance(DistanceArgs),
    /// Samples a geodesic between two inputs as CSV.
    Geodesic(GeodesicArgs),
    /// Closed-form and finite-difference Fisher matrices at a parameter.
    Fisher(FisherArgs),
    /// Runs a seeded verification suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Hellinger,
    Tv,
    Bhattacharyya,
    Cone,
    FrPoisson,
    FrExp,
    FrGauss,
    FrNumeric,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Trans,
    Poisson,
    Exp,
    Gauss,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Hellinger,
    Spherical,
    Cone,
    Gauss,
}

#[derive(Args, Debug)]
pub struct OptimizerArgs {
    /// Interior points of the discrete path.
    #[arg(long, default_value_t = 64)]
    pub path_points: usize,
    /// Relative energy decrease at which the optimizer stops.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iters: usize,
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// The two input files: measures, parameter arrays or Gaussian parameters.
    #[arg(long = "in", num_args = 2, value_names = ["A", "B"], required = true)]
    pub inputs: Vec<PathBuf>,
    /// Parametric family for `fr-numeric`.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Grid measure whose translates form the `trans` family.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[command(flatten)]
    pub optimizer: OptimizerArgs,
}

#[derive(Args, Debug)]
pub struct GeodesicArgs {
    #[arg(long, value_enum)]
    pub space: Space,
    /// Number of intervals; `N + 1` rows are written.
    #[arg(long, default_value_t = 10)]
    pub samples: usize,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long = "in", num_args = 2, value_names = ["A", "B"], required = true)]
    pub inputs: Vec<PathBuf>,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FisherArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Parameter file: an array for `poisson`/`exp`, Gaussian JSON for `gauss`.
    #[arg(long)]
    pub at: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Finite-difference step; `1e-4 (1 + |p|)` if absent.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(Suite), default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Distance(a) => commands::distance(&a),
        Command::Geodesic(a) => commands::geodesic(&a),
        Command::Fisher(a) => commands::fisher(&a),
        Command::Verify(a) => commands::verify(&a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
