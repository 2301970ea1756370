//! Command-line surface. Usage violations exit with code 2 (clap's
//! default), regime violations with 3, solver failures with 4.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use pepgrad_core::{SmoothProblemSpec, StepSchedule};

#[derive(Debug, Parser)]
#[command(
    name = "pepgrad",
    version,
    about = "Worst-case analysis of fixed-step gradient descent on smooth functions",
    long_about = "Computes, certifies, and empirically attains the exact worst-case rate of \
                  min-gradient-norm convergence for gradient descent with fixed step lengths \
                  on functions with Lipschitz gradients.\n\nExit codes: 0 success/verified, \
                  1 failed check, 2 usage, 3 step-length regime violation, 4 solver failure."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every applicable worst-case bound for one configuration
    Bound(BoundArgs),
    /// Solve the worst-case semidefinite program and compare to the closed form
    PepSolve(PepSolveArgs),
    /// Build and verify the dual certificate proving the main bound
    Certify(CertifyArgs),
    /// Construct the extremal instance attaining the bound; optionally simulate it
    Tight(TightArgs),
    /// Sweep one parameter over a grid and emit a CSV of all bounds and SDP values
    Sweep(SweepArgs),
    /// Check a triple-set JSON file against the smooth interpolation conditions
    CheckInterp(CheckInterpArgs),
}

/// The shared `L, delta, schedule` flags. `--steps` and `--t-const/--N` are
/// mutually exclusive ways to give the schedule.
#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Gradient Lipschitz constant L
    #[arg(long = "L", value_name = "L", allow_hyphen_values = false)]
    pub lipschitz: f64,

    /// Initial gap f(x1) - f_star
    #[arg(long)]
    pub delta: f64,

    /// Known lower bound f_star (affine offset only)
    #[arg(long, default_value_t = 0.0)]
    pub f_star: f64,

    /// Explicit step lengths, comma separated: "t1,t2,..."
    #[arg(
        long,
        value_delimiter = ',',
        conflicts_with_all = ["t_const", "n_steps"],
        required_unless_present = "t_const"
    )]
    pub steps: Option<Vec<f64>>,

    /// Constant step length (use together with --N)
    #[arg(long = "t-const", requires = "n_steps")]
    pub t_const: Option<f64>,

    /// Number of iterations for --t-const
    #[arg(long = "N", requires = "t_const")]
    pub n_steps: Option<usize>,
}

impl InstanceArgs {
    pub fn spec(&self) -> Result<SmoothProblemSpec, CliError> {
        SmoothProblemSpec::with_f_star(self.lipschitz, self.delta, self.f_star)
            .map_err(CliError::from)
    }

    pub fn schedule(&self) -> Result<StepSchedule, CliError> {
        if let Some(steps) = &self.steps {
            return StepSchedule::new(steps.clone()).map_err(CliError::from);
        }
        match (self.t_const, self.n_steps) {
            (Some(t), Some(n)) => StepSchedule::constant(t, n).map_err(CliError::from),
            _ => Err(CliError::Usage(
                "provide either --steps or both --t-const and --N".into(),
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Emit the report as JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct PepSolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Accepted primal-dual gap (env: PEPGRAD_GAP_TOL)
    #[arg(long, env = "PEPGRAD_GAP_TOL", default_value_t = 1e-7)]
    pub gap_tol: f64,
    /// Emit solution and comparison as JSON
    #[arg(long)]
    pub json: bool,
    /// Write the assembled program (constraint matrices and all) as JSON
    #[arg(long, value_name = "FILE")]
    pub dump_program: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Tolerance for the aggregated quadratic-form comparison
    #[arg(long, default_value_t = 1e-10)]
    pub q_tol: f64,
    /// Emit the report as JSON instead of a table
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct TightArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Write the piecewise-quadratic instance as JSON
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write the trajectory triples as a triple-set JSON (for check-interp)
    #[arg(long, value_name = "FILE")]
    pub triples_out: Option<PathBuf>,
    /// Run gradient descent on the instance and report bound vs attained
    #[arg(long)]
    pub simulate: bool,
    /// Write the simulated trajectory as CSV (columns k,x,f,g)
    #[arg(long, value_name = "FILE", requires = "simulate")]
    pub trajectory_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    /// Constant step length
    Step,
    /// Iteration count
    N,
    /// Initial gap
    Delta,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Which parameter the grid runs over
    #[arg(long, value_enum)]
    pub param: SweepParam,
    #[arg(long)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    #[arg(long)]
    pub points: usize,

    /// Gradient Lipschitz constant L
    #[arg(long = "L", value_name = "L")]
    pub lipschitz: f64,
    /// Initial gap (fixed; forbidden when sweeping delta)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Constant step length (fixed; forbidden when sweeping step)
    #[arg(long = "t-const")]
    pub t_const: Option<f64>,
    /// Iteration count (fixed)
    #[arg(long = "N")]
    pub n_steps: Option<usize>,
    /// Explicit fixed schedule (delta sweeps only)
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["t_const", "n_steps"])]
    pub steps: Option<Vec<f64>>,

    /// Skip the SDP solve columns
    #[arg(long)]
    pub no_sdp: bool,
    /// Accepted primal-dual gap for the SDP column (env: PEPGRAD_GAP_TOL)
    #[arg(long, env = "PEPGRAD_GAP_TOL", default_value_t = 1e-7)]
    pub gap_tol: f64,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckInterpArgs {
    /// Triple-set JSON file: {"L": .., "triples": [{"x": [..], "g": [..], "f": ..}, ..]}
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Additive residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}
