//! `parisian`: command-line front end for the constant estimators, the
//! asymptotic formulas, the ruin Monte Carlo and the acceptance suite.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Exit code for simulation and evaluation errors; flag errors exit with 2.
const EXIT_SIMULATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "parisian", version, about = "Parisian ruin constants, asymptotics and Monte Carlo")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Global {
    /// Worker threads for replications (results do not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print a single JSON object instead of the text summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Output file (CSV) or directory (`figures`, `validate`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Store simulated constants in the registry.
    #[arg(long, global = true)]
    pub save: bool,
    /// Registry file; defaults to $PARISIAN_REGISTRY.
    #[arg(long, global = true, env = "PARISIAN_REGISTRY")]
    pub registry: Option<PathBuf>,
    /// Give each point of a sweep its own seed instead of common random numbers.
    #[arg(long, global = true)]
    pub independent_seeds: bool,
    /// Run Monte Carlo even when the event looks too rare to observe.
    #[arg(long, global = true)]
    pub force: bool,
    /// Base seed (default 0; `validate` defaults to its own pinned seed).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl Global {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// An inclusive `lo:hi:step` grid.
#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct Sweep(pub Vec<f64>);

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    output::parse_range(s).map(Sweep)
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Estimate the Piterbarg-type constant with drift (a, b).
    Piterbarg(PiterbargArgs),
    /// Estimate the Parisian Pickands constant.
    Pickands(PickandsArgs),
    /// Evaluate the two-dimensional ruin asymptotics.
    Asymptotics(AsymptoticsArgs),
    /// Monte-Carlo ruin probability.
    McRuin(McRuinArgs),
    /// Run the acceptance suite and write a report.
    Validate(ValidateArgs),
    /// Inspect or fill the constant registry.
    Constants(ConstantsArgs),
    /// Write the figure data files into the `--out` directory.
    Figures(FiguresArgs),
    /// Sample fBm paths on a grid and write them as CSV.
    Paths(PathsArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SimArgs {
    /// Truncation half-width; defaults to the module rule for the largest L.
    #[arg(long = "M")]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 0.005)]
    pub tau: f64,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct PiterbargArgs {
    #[arg(long)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long = "L", default_value_t = 0.0, conflicts_with = "sweep_l")]
    pub l: f64,
    /// Sweep of L as `lo:hi:step`.
    #[arg(long = "sweep-L", value_parser = parse_sweep)]
    pub sweep_l: Option<Sweep>,
    #[command(flatten)]
    pub sim: SimArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct PickandsArgs {
    #[arg(long = "H")]
    pub h: f64,
    #[arg(long = "L", default_value_t = 0.0, conflicts_with = "sweep_l")]
    pub l: f64,
    #[arg(long = "sweep-L", value_parser = parse_sweep)]
    pub sweep_l: Option<Sweep>,
    #[arg(long = "M")]
    pub m: Option<f64>,
    /// Grid step; repeat together with `--bias-sweep`.
    #[arg(long, default_values_t = [0.005])]
    pub tau: Vec<f64>,
    /// Denominator step, a whole multiple of tau (default tau).
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    /// Estimate-minus-exact table over the given taus (H = 0.5 only).
    #[arg(long)]
    pub bias_sweep: bool,
    /// Also compute the analytic lower bound (costs two extra simulations).
    #[arg(long)]
    pub lower_bound: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ModelArgs {
    #[arg(long)]
    pub c1: f64,
    #[arg(long)]
    pub c2: f64,
    #[arg(long)]
    pub q1: f64,
    #[arg(long)]
    pub q2: f64,
    #[arg(long = "H")]
    pub h: f64,
    #[arg(long = "T", default_value_t = 0.0)]
    pub t: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct AsymptoticsArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Capital levels; repeat for several.
    #[arg(long, required = true)]
    pub u: Vec<f64>,
    /// Simulate constants missing from the registry.
    #[arg(long)]
    pub simulate_constants: bool,
    /// Replications for simulated constants (default 10^4).
    #[arg(long)]
    pub constant_n: Option<u64>,
    /// Grid step for simulated constants (default 0.005).
    #[arg(long)]
    pub constant_tau: Option<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// T_u = T·u^{2−1/H}.
    Scaled,
    /// T_u = T.
    Fixed,
}

#[derive(Args, Debug, Serialize)]
pub struct McRuinArgs {
    /// Two-company barriers; omit for the one-dimensional problem.
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    /// One-dimensional drift and capital multiplier.
    #[arg(long, conflicts_with_all = ["c1", "c2", "q1", "q2"], requires = "q")]
    pub c: Option<f64>,
    #[arg(long, requires = "c")]
    pub q: Option<f64>,
    #[arg(long = "H")]
    pub h: f64,
    #[arg(long = "T", default_value_t = 0.0)]
    pub t: f64,
    /// Capital levels; repeat for several.
    #[arg(long, required = true)]
    pub u: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long, value_enum, default_value_t = Schedule::Scaled)]
    pub schedule: Schedule,
}

#[derive(Args, Debug, Serialize)]
pub struct ValidateArgs {
    /// Criteria to run, e.g. `--only 1,3`; default all.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<u8>,
}

#[derive(Args, Debug, Serialize)]
pub struct ConstantsArgs {
    #[command(subcommand)]
    pub action: ConstantsAction,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum ConstantsAction {
    /// List the records in the registry.
    List,
    /// Look a constant up, simulating and storing it on a miss.
    Resolve(ResolveArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Pickands,
    Piterbarg,
}

#[derive(Args, Debug, Serialize)]
pub struct ResolveArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long = "H", default_value_t = 0.5)]
    pub h: f64,
    #[arg(long)]
    pub window: f64,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Fail instead of simulating on a miss.
    #[arg(long)]
    pub cache_only: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct FiguresArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct PathsArgs {
    #[arg(long = "H")]
    pub h: f64,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot start {t} threads: {e}");
            return ExitCode::from(EXIT_SIMULATION);
        }
    }
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
