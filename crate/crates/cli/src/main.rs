//! `potred` — solve LPs with inexact potential reduction, run seeded
//! parameter sweeps, and run the oracle-comparison property suites.
//!
//! Exit codes: 0 optimal (or validation passed), 1 a validation property
//! failed or output could not be written, 2 infeasibility certificate,
//! 3 iteration limit, 4 input or parameter error, 5 numerical failure.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY_FAILED: u8 = 1;
pub const EXIT_CERTIFICATE: u8 = 2;
pub const EXIT_ITERATION_LIMIT: u8 = 3;
pub const EXIT_INPUT: u8 = 4;
pub const EXIT_NUMERICAL: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "potred",
    version,
    about = "Inexact potential reduction interior point LP solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one LP from a file or a generator.
    Solve(SolveArgs),
    /// Run a seeded grid over kappa, acceptance condition and instance seed.
    Experiment(ExperimentArgs),
    /// Run the property suites against the exact-direction oracle.
    Validate(ValidateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ModeArg {
    Feasible,
    Infeasible,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum ConditionArg {
    /// Descent, relative-size and gap-control residual conditions.
    Standard,
    /// `‖ξ_B‖ ≤ (1−γ)σ/(4√n)·√(gap/n)`.
    Monteiro,
    /// `‖W_B ξ_B‖∞ ≤ η·gap/n`.
    Componentwise,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PrecondArg {
    Diagonal,
    Basis,
}

/// Solver parameters shared by `solve` and `experiment`.
#[derive(Args, Debug, Clone)]
struct SolverArgs {
    #[arg(long, value_enum, default_value = "feasible")]
    mode: ModeArg,
    /// Residual tolerance factor in [0, 1).
    #[arg(long, default_value_t = 0.5)]
    kappa: f64,
    /// Potential weight; defaults to sqrt(n).
    #[arg(long)]
    nu: Option<f64>,
    /// Stop once the duality gap xᵀz is at most this.
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    /// Cold-start scale and certificate bound; required in infeasible mode.
    #[arg(long)]
    rho: Option<f64>,
    /// Sigma of the monteiro condition; defaults to n/(n+nu).
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    #[arg(long)]
    max_outer: Option<usize>,
    /// Inner CG iterations before falling back to the exact direction;
    /// defaults to 10·m.
    #[arg(long)]
    cg_max: Option<usize>,
    #[arg(long, value_enum, default_value = "diagonal")]
    preconditioner: PrecondArg,
    /// Density of generated feasible instances.
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Write 0 for wall-clock times so outputs are reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Fault injection for tests: misplaces part of the residual.
    #[arg(long, hide = true)]
    break_lift: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// LP file: fixed-form MPS (.mps) or the triplet format.
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Generated instance "m,n,seed".
    #[arg(long)]
    generate: Option<String>,
    /// Strictly feasible start: three lines holding x, y and z.
    #[arg(long)]
    start: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "standard")]
    condition: ConditionArg,
    /// Also write diagnostics.csv comparing each direction to the exact one.
    #[arg(long)]
    diagnostics: bool,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[command(flatten)]
    solver: SolverArgs,
    /// Instance sizes "MxN", comma separated.
    #[arg(long, default_value = "10x30")]
    sizes: String,
    /// Seeds: a range "A..B" or a comma-separated list (may be empty).
    #[arg(long, default_value = "0..5")]
    seeds: String,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,0.6,0.9")]
    kappas: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "standard")]
    condition: Vec<ConditionArg>,
    /// Also write scaling.csv: median feasible iterations per size.
    #[arg(long)]
    scaling: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Suites to run (comma separated); all by default.
    #[arg(long, value_delimiter = ',')]
    suite: Vec<String>,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 100)]
    seeds: u64,
    /// Fault injection: the residual-support property must then fail.
    #[arg(long)]
    break_lift: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => commands::solve(&args),
        Command::Experiment(args) => commands::experiment(&args),
        Command::Validate(args) => commands::validate(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}
