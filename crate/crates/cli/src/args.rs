use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "deltareg", version, about = "High-order regularization of singular sources and spectral convergence studies")]
pub struct Cli {
    /// Flat key=value file supplying defaults for the subcommand flags.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Print step and time diagnostics to standard error.
    #[arg(long, global = true)]
    pub progress: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a kernel and print its exact coefficients and condition residuals.
    #[command(args_override_self = true)]
    Kernel(KernelArgs),
    /// Regularize a particle field and evaluate it on a grid.
    #[command(args_override_self = true)]
    Regularize(RegularizeArgs),
    /// Solve one model problem at one resolution.
    #[command(args_override_self = true)]
    Solve(SolveArgs),
    /// Run a convergence study over several resolutions.
    #[command(args_override_self = true)]
    Converge(ConvergeArgs),
    /// Reproduce the advection table.
    #[command(args_override_self = true)]
    Table1(TableArgs),
    /// Reproduce the Burgers table.
    #[command(args_override_self = true)]
    Table2(TableArgs),
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Number of vanishing moments.
    #[arg(long)]
    pub m: usize,
    /// Smoothness order.
    #[arg(long)]
    pub k: usize,
    /// Write the coefficient CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub dump_coeffs: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Fixed scaling parameter.
    #[arg(long, conflicts_with = "auto_epsilon")]
    pub epsilon: Option<f64>,
    /// Use the optimal scaling for the particle spacing.
    #[arg(long)]
    pub auto_epsilon: bool,
    /// Proportionality constant of the optimal scaling.
    #[arg(long = "C", value_name = "C", default_value_t = deltareg::experiments::DEFAULT_EPSILON_CONSTANT)]
    pub c: f64,
}

#[derive(Debug, Args)]
pub struct RegularizeArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    /// Degree of the closed Newton-Cotes panel rule.
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[command(flatten)]
    pub scaling: ScalingArgs,
    /// CSV with columns position, value and optionally density.
    #[arg(long, value_name = "PATH")]
    pub particles: PathBuf,
    /// Known analytic source (advection or burgers); enables exact panel
    /// subdivision and the error column.
    #[arg(long)]
    pub source: Option<String>,
    /// Evaluation grid as LO:HI:COUNT.
    #[arg(long, value_name = "SPEC", allow_hyphen_values = true)]
    pub eval_grid: String,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Proceed even when q > min(m, k) - 1.
    #[arg(long)]
    pub allow_unsafe_q: bool,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// advection or burgers.
    #[arg(long)]
    pub problem: String,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[command(flatten)]
    pub scaling: ScalingArgs,
    /// Sample the singular source directly.
    #[arg(long)]
    pub no_regularization: bool,
    /// Exponential filter order (defaults to 12 for Burgers, off for advection).
    #[arg(long, conflicts_with = "no_filter")]
    pub filter_order: Option<u32>,
    /// Disable the exponential filter.
    #[arg(long)]
    pub no_filter: bool,
    /// Number of particles N_p (defaults to the problem's value).
    #[arg(long)]
    pub particles: Option<usize>,
    /// Resolution of the self-convergence reference for Burgers.
    #[arg(long, default_value_t = deltareg::experiments::BURGERS_REFERENCE_N)]
    pub reference_n: usize,
    #[arg(long)]
    pub allow_unsafe_q: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Polynomial degree N.
    #[arg(long = "N", value_name = "N")]
    pub n: usize,
    /// Write the nodes and differentiation matrix to this CSV.
    #[arg(long, value_name = "PATH")]
    pub dump_operator: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated resolutions.
    #[arg(long = "N-list", value_name = "LIST", value_delimiter = ',', conflicts_with = "full")]
    pub n_list: Option<Vec<usize>>,
    /// Use the published resolutions 100, 200, 300, 400.
    #[arg(long)]
    pub full: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Use the published resolutions 100, 200, 300, 400.
    #[arg(long)]
    pub full: bool,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}
