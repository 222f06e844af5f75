//! Command-line front door: model ingestion, solver and experiment
//! invocation, reproducible structured output.
//!
//! Every command reads one model document (see `schema`), resolves its
//! flags, and emits a JSON envelope carrying the command name, a
//! timestamp, the resolved config, and the result. Exit codes: 0 on
//! success, 1 on usage or input errors, 2 on numerical failure.

mod output;
mod schema;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sturm_rand::{
    coupling_roots, full_problem, run_experiment, sample_omega, BoundaryAngle, BumpFunction,
    ComparisonSpec, ExperimentSettings, Interval, Potential, RegularProblem, Solver,
};

use output::{emit, now_unix, write_trial_csv, Envelope, STANDARD_EPS};

#[derive(Parser)]
#[command(
    name = "sturm-rand",
    version,
    about = "Spectra of random Sturm-Liouville operators: solve, sample, couple, experiment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues and eigenfunctions of one realization in a window.
    Solve(SolveArgs),
    /// Draw the random couplings for a seed.
    Sample(SampleArgs),
    /// Coupling constants that make an energy an eigenvalue.
    Coupling(CouplingArgs),
    /// Monte Carlo coincidence experiment over many realizations.
    Experiment(ExperimentArgs),
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"lo,hi\", got {s:?}"))?;
    let lo = lo.trim().parse::<f64>().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi = hi.trim().parse::<f64>().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    Ok((lo, hi))
}

#[derive(Args)]
struct SolveArgs {
    /// Model description file (JSON).
    #[arg(long, value_name = "path")]
    model: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "path")]
    out: Option<PathBuf>,
    /// Seed for the coupling draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Energy window "lo,hi".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,25")]
    window: (f64, f64),
    /// Eigenvalue bisection tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct SampleArgs {
    /// Model description file (JSON).
    #[arg(long, value_name = "path")]
    model: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "path")]
    out: Option<PathBuf>,
    /// Seed for the coupling draw.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CouplingArgs {
    /// Model description file (JSON).
    #[arg(long, value_name = "path")]
    model: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "path")]
    out: Option<PathBuf>,
    /// Energy whose coupling set to compute.
    #[arg(long, allow_hyphen_values = true)]
    energy: f64,
    /// Coupling window "lo,hi".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "-50,50")]
    window: (f64, f64),
    /// Index of the bump acting as the coupling profile.
    #[arg(long, allow_hyphen_values = true)]
    coord: i64,
    /// Seed for the remaining couplings; omitted means they are all zero.
    #[arg(long)]
    seed: Option<u64>,
    /// Left boundary angle in radians; defaults to the model's own.
    #[arg(long, allow_hyphen_values = true)]
    theta0: Option<f64>,
    /// Right boundary angle in radians; defaults to the model's own.
    #[arg(long, allow_hyphen_values = true)]
    gamma0: Option<f64>,
    /// Root bisection tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ComparisonKind {
    #[value(name = "self_control")]
    SelfControl,
    #[value(name = "fixed_energy")]
    FixedEnergy,
    #[value(name = "subinterval")]
    Subinterval,
    #[value(name = "h_of_coordinate")]
    HOfCoordinate,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Model description file (JSON).
    #[arg(long, value_name = "path")]
    model: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "path")]
    out: Option<PathBuf>,
    /// Master seed; per-trial seeds derive from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of Monte Carlo trials.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Energy window "lo,hi".
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,25")]
    window: (f64, f64),
    /// Eigenvalue bisection tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Comma separated epsilon grid for coincidence counting.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4,1e-5")]
    eps: Vec<f64>,
    /// What to compare the spectrum against.
    #[arg(long, value_enum, default_value = "self_control")]
    comparison: ComparisonKind,
    /// Fixed comparison energy (fixed_energy only).
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Subinterval "lo,hi" (subinterval only).
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    sub_window: Option<(f64, f64)>,
    /// Left boundary angle of the subinterval problem, radians.
    #[arg(long, default_value_t = 0.0)]
    sub_left_angle: f64,
    /// Right boundary angle of the subinterval problem, radians.
    #[arg(long, default_value_t = 0.0)]
    sub_right_angle: f64,
    /// Coordinate whose affine image is compared (h_of_coordinate only).
    #[arg(long, allow_hyphen_values = true)]
    coord: Option<i64>,
    /// Affine scale for h_of_coordinate.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    h_scale: f64,
    /// Affine offset for h_of_coordinate.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    h_offset: f64,
    /// Per-trial CSV stream path (standard epsilon grid only).
    #[arg(long, value_name = "path")]
    csv: Option<PathBuf>,
}

impl ExperimentArgs {
    fn comparison_spec(&self) -> Result<ComparisonSpec<f64>> {
        Ok(match self.comparison {
            ComparisonKind::SelfControl => ComparisonSpec::SelfControl,
            ComparisonKind::FixedEnergy => ComparisonSpec::FixedEnergy {
                energy: self
                    .energy
                    .context("--comparison fixed_energy needs --energy")?,
            },
            ComparisonKind::Subinterval => {
                let (lo, hi) = self
                    .sub_window
                    .context("--comparison subinterval needs --sub-window")?;
                ComparisonSpec::Subinterval {
                    interval: Interval::new(lo, hi).context("--sub-window")?,
                    left_angle: BoundaryAngle::new(self.sub_left_angle)
                        .context("--sub-left-angle")?,
                    right_angle: BoundaryAngle::new(self.sub_right_angle)
                        .context("--sub-right-angle")?,
                }
            }
            ComparisonKind::HOfCoordinate => ComparisonSpec::HOfCoordinate {
                coordinate: self
                    .coord
                    .context("--comparison h_of_coordinate needs --coord")?,
                scale: self.h_scale,
                offset: self.h_offset,
            },
        })
    }
}

/// STURM_RAND_THREADS caps the experiment worker count. Speed only; the
/// results are identical for every value.
fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var("STURM_RAND_THREADS") {
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("STURM_RAND_THREADS={v:?} is not a positive integer"))?;
            if n == 0 {
                bail!("STURM_RAND_THREADS must be at least 1");
            }
            Ok(Some(n))
        }
        Err(_) => Ok(None),
    }
}

#[derive(Serialize)]
struct SolveConfig {
    model: serde_json::Value,
    seed: u64,
    window: (f64, f64),
    tol: f64,
}

#[derive(Serialize)]
struct SampleConfig {
    model: serde_json::Value,
    seed: u64,
}

#[derive(Serialize)]
struct CouplingConfig {
    model: serde_json::Value,
    energy: f64,
    window: (f64, f64),
    coord: i64,
    seed: Option<u64>,
    theta0: f64,
    gamma0: f64,
    tol: f64,
}

#[derive(Serialize)]
struct ExperimentConfig {
    model: serde_json::Value,
    comparison: ComparisonSpec<f64>,
    trials: usize,
    master_seed: u64,
    window: (f64, f64),
    tol: f64,
    epsilon_grid: Vec<f64>,
}

fn run_solve(args: SolveArgs) -> Result<()> {
    let (raw, model) = schema::load_model(&args.model)?;
    let omega = sample_omega(&model, args.seed);
    let problem = full_problem(&model, &omega)?;
    let result = Solver::default().window(&problem, args.window, args.tol)?;
    emit(
        args.out.as_deref(),
        &Envelope {
            command: "solve",
            timestamp: now_unix(),
            config: SolveConfig {
                model: raw,
                seed: args.seed,
                window: args.window,
                tol: args.tol,
            },
            result,
        },
    )
}

fn run_sample(args: SampleArgs) -> Result<()> {
    let (raw, model) = schema::load_model(&args.model)?;
    let result = sample_omega(&model, args.seed);
    emit(
        args.out.as_deref(),
        &Envelope {
            command: "sample",
            timestamp: now_unix(),
            config: SampleConfig { model: raw, seed: args.seed },
            result,
        },
    )
}

fn run_coupling(args: CouplingArgs) -> Result<()> {
    let (raw, model) = schema::load_model(&args.model)?;
    let profile = model
        .bump(args.coord)
        .with_context(|| format!("model has no bump at index {}", args.coord))?
        .clone();
    let omega = args.seed.map(|s| sample_omega(&model, s));
    let realized: Vec<(f64, BumpFunction<f64>)> = model
        .index_range()
        .iter()
        .filter(|&n| n != args.coord)
        .map(|n| {
            let weight = omega.as_ref().map_or(0.0, |o| o.get(n).unwrap());
            (weight, model.bump(n).unwrap().clone())
        })
        .collect();
    let template = RegularProblem::new(
        *model.truncation(),
        Potential::new(model.base().clone(), realized, Some((0.0, profile)))?,
        model.left_bc(),
        model.right_bc(),
    );
    let theta0 = match args.theta0 {
        Some(a) => BoundaryAngle::new(a).context("--theta0")?,
        None => model.left_bc(),
    };
    let gamma0 = match args.gamma0 {
        Some(a) => BoundaryAngle::new(a).context("--gamma0")?,
        None => model.right_bc(),
    };
    let result = coupling_roots(
        &Solver::default(),
        &template,
        args.energy,
        args.window,
        theta0,
        gamma0,
        args.tol,
    )?;
    emit(
        args.out.as_deref(),
        &Envelope {
            command: "coupling",
            timestamp: now_unix(),
            config: CouplingConfig {
                model: raw,
                energy: args.energy,
                window: args.window,
                coord: args.coord,
                seed: args.seed,
                theta0: theta0.angle(),
                gamma0: gamma0.angle(),
                tol: args.tol,
            },
            result,
        },
    )
}

fn run_experiment_cmd(args: ExperimentArgs) -> Result<()> {
    let (raw, model) = schema::load_model(&args.model)?;
    let comparison = args.comparison_spec()?;
    if args.csv.is_some() && args.eps != STANDARD_EPS {
        bail!(
            "--csv requires the standard epsilon grid 1e-2,1e-3,1e-4,1e-5; \
             its column names are part of the format"
        );
    }
    let settings = ExperimentSettings {
        trials: args.trials,
        master_seed: args.seed,
        energy_window: args.window,
        tolerance: args.tol,
        epsilon_grid: args.eps.clone(),
        threads: threads_from_env()?,
    };
    let run = run_experiment(&Solver::default(), &model, &comparison, &settings)?;
    if let Some(path) = &args.csv {
        write_trial_csv(path, &run.records)?;
    }
    emit(
        args.out.as_deref(),
        &Envelope {
            command: "experiment",
            timestamp: now_unix(),
            config: ExperimentConfig {
                model: raw,
                comparison,
                trials: args.trials,
                master_seed: args.seed,
                window: args.window,
                tol: args.tol,
                epsilon_grid: args.eps,
            },
            result: run.report,
        },
    )
}

/// Input problems exit 1; anything the numerics reported exits 2.
fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<sturm_rand::Error>() {
            return match e {
                sturm_rand::Error::InvalidInput { .. } => 1,
                _ => 2,
            };
        }
    }
    1
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not failures.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Sample(a) => run_sample(a),
        Command::Coupling(a) => run_coupling(a),
        Command::Experiment(a) => run_experiment_cmd(a),
    };
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    }
}

fn main() {
    std::process::exit(real_main());
}
