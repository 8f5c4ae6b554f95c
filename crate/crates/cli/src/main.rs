//! `transversal`: generate, solve, classify and sweep digraph collections.
//!
//! Exit codes: 0 completed, 2 invalid input, 3 budget or timeout, 4 internal
//! invariant violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "transversal", version, about = "Transversal structures in digraph collections")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Time budget in seconds.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub time_budget: f64,
    /// Exact or sampled search where both exist.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Transversal Hamilton cycle.
    Thc,
    /// Transversal Hamilton path.
    Thp,
    /// Transversal perfect matching of a bipartite instance.
    Pm,
    /// Rainbow cycle cover.
    Cover,
    /// Maximum rainbow matching of a bipartite instance.
    Rm,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Run the exact solver.
    Solve { problem: Problem, instance: PathBuf },
    /// Run the brute-force oracle (n ≤ 9).
    Oracle { problem: Problem, instance: PathBuf },
    /// Classify the extremal structure of each color.
    Classify {
        instance: PathBuf,
        #[arg(long, default_value = "0.1")]
        eps: f64,
        /// 1-based color; all colors when omitted.
        #[arg(long)]
        color: Option<usize>,
    },
    /// Strong and weak stability of a collection.
    Stability {
        instance: PathBuf,
        #[arg(long, default_value = "0.5")]
        gamma: f64,
        #[arg(long, default_value = "0.05")]
        alpha: f64,
        #[arg(long, default_value = "0.1")]
        eps: f64,
        #[arg(long, default_value = "0.1")]
        delta: f64,
    },
    /// List absorbers of a cycle and optionally absorb.
    Absorb(AbsorbArgs),
    /// Check (ε, d)-regularity of a slice.
    Regcheck(RegArgs),
    /// Run a campaign.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    /// Number of colors (defaults to n).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value = "0.5")]
    pub p: f64,
    #[arg(long)]
    pub min_semidegree: Option<usize>,
    /// EC1, EC2 or EC3 for the extremal family.
    #[arg(long, default_value = "EC1")]
    pub kind: String,
    #[arg(long, default_value = "0.1")]
    pub eps: f64,
    #[arg(long)]
    pub zeta: Option<f64>,
    #[arg(long, default_value = "0.0")]
    pub defect: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Random,
    Extremal,
    Tight,
    Bradshaw,
}

#[derive(Args, Debug)]
pub struct AbsorbArgs {
    pub instance: PathBuf,
    /// Certificate JSON of the cycle.
    #[arg(long)]
    pub cycle: PathBuf,
    /// 1-based absorbing color.
    #[arg(long)]
    pub color: usize,
    #[arg(long)]
    pub v: usize,
    /// Defaults to v (single-vertex absorption).
    #[arg(long)]
    pub u: Option<usize>,
    #[arg(long, value_enum, default_value_t = KindArg::TypeI)]
    pub kind: KindArg,
    /// Absorb with the first witness; a path certificate supplies the payload when u ≠ v.
    #[arg(long)]
    pub apply: bool,
    #[arg(long)]
    pub payload: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    TypeI,
    TypeIi,
}

#[derive(Args, Debug)]
pub struct RegArgs {
    pub instance: PathBuf,
    /// Comma-separated vertices of V₁.
    #[arg(long, value_delimiter = ',')]
    pub v1: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub v2: Vec<usize>,
    /// Comma-separated 1-based colors; all when omitted.
    #[arg(long, value_delimiter = ',')]
    pub colors: Vec<usize>,
    #[arg(long, default_value = "0.25")]
    pub eps: f64,
    #[arg(long, default_value = "0.0")]
    pub d: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub campaign: Campaign,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Trials per n.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value = "0.3")]
    pub p: f64,
    /// Directory for counterexample artifacts.
    #[arg(long)]
    pub artifacts: Option<PathBuf>,
    /// Skip the sweep just below the threshold.
    #[arg(long)]
    pub no_companion: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Campaign {
    Threshold,
    Bradshaw,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = commands::init_threads(cli.common.threads) {
        eprintln!("error: {e}");
        return ExitCode::from(4);
    }
    let result = match cli.command {
        Command::Gen(a) => commands::gen(&cli.common, &a),
        Command::Solve { problem, instance } => commands::solve(&cli.common, problem, &instance),
        Command::Oracle { problem, instance } => commands::oracle(&cli.common, problem, &instance),
        Command::Classify { instance, eps, color } => commands::classify(&cli.common, &instance, eps, color),
        Command::Stability { instance, gamma, alpha, eps, delta } => {
            commands::stability(&cli.common, &instance, [gamma, alpha, eps, delta])
        }
        Command::Absorb(a) => commands::absorb(&cli.common, &a),
        Command::Regcheck(a) => commands::regcheck(&cli.common, &a),
        Command::Sweep(a) => commands::sweep(&cli.common, &a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
