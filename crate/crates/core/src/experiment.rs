//! Monte Carlo experiments: does a spectrum computed from one source of
//! randomness ever hit a comparison set computed from another?
//!
//! Each trial realizes the model from its own derived seed, solves for the
//! spectrum in an energy window, builds the comparison values, and records
//! the smallest gap between the two sets. Aggregation reports the fraction
//! of trials whose gap fell below each epsilon in a grid, plus gap
//! quantiles. Trials are independent and run in parallel; every per-trial
//! quantity is a pure function of (master_seed, trial index), so reports
//! are identical for any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    build_regular_problem, full_problem, BoundaryAngle, Interval, RandomPotentialModel,
};
use crate::prufer::Solver;
use crate::sampling::{sample_omega, trial_seed};
use crate::scalar::Scalar;

/// What the spectrum is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComparisonSpec<S> {
    /// The spectrum against itself; every gap is zero. Detector control.
    SelfControl,
    /// A single fixed energy.
    FixedEnergy { energy: S },
    /// Spectrum of the same realization truncated to a subinterval with its
    /// own boundary angles. Requires at least one continuous coordinate
    /// whose bump lies outside the subinterval.
    Subinterval {
        interval: Interval<S>,
        left_angle: BoundaryAngle<S>,
        right_angle: BoundaryAngle<S>,
    },
    /// An affine function of one random coordinate.
    HOfCoordinate { coordinate: i64, scale: S, offset: S },
}

impl<S: Scalar> ComparisonSpec<S> {
    pub fn validate(&self, model: &RandomPotentialModel<S>) -> Result<()> {
        match self {
            ComparisonSpec::SelfControl => Ok(()),
            ComparisonSpec::FixedEnergy { energy } => {
                if energy.is_finite() {
                    Ok(())
                } else {
                    Err(Error::invalid("comparison", "fixed energy must be finite"))
                }
            }
            ComparisonSpec::Subinterval { interval, .. } => {
                if !model.truncation().contains_interval(interval) {
                    return Err(Error::invalid(
                        "comparison",
                        "subinterval must lie inside the working interval",
                    ));
                }
                let excluded = model.index_range().iter().any(|n| {
                    model.distributions()[&n].is_continuous()
                        && model.bumps()[&n].support().disjoint_from(interval)
                });
                if !excluded {
                    return Err(Error::invalid(
                        "comparison",
                        "subinterval needs a continuous coordinate whose bump \
                         lies outside it",
                    ));
                }
                Ok(())
            }
            ComparisonSpec::HOfCoordinate { coordinate, scale, offset } => {
                if !model.index_range().contains(*coordinate) {
                    return Err(Error::invalid(
                        "comparison",
                        format!("coordinate {coordinate} is not in the model"),
                    ));
                }
                if !scale.is_finite() || !offset.is_finite() {
                    return Err(Error::invalid(
                        "comparison",
                        "affine coefficients must be finite",
                    ));
                }
                Ok(())
            }
        }
    }
}

/// One trial's outcome. `min_gap` is None when either side of the
/// comparison was empty in the window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord<S> {
    pub seed: u64,
    pub min_gap: Option<S>,
    pub coincidence: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub seed: u64,
    pub message: String,
}

/// Nearest-rank gap quantiles; None when the rank lands on an empty gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapQuantiles<S> {
    pub q01: Option<S>,
    pub q05: Option<S>,
    pub q50: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapStatistics<S> {
    pub coincidence_rate: Vec<f64>,
    pub quantiles: GapQuantiles<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport<S> {
    pub comparison: ComparisonSpec<S>,
    pub trials: usize,
    pub succeeded: usize,
    pub master_seed: u64,
    pub energy_window: (S, S),
    pub tolerance: S,
    pub epsilon_grid: Vec<S>,
    pub coincidence_rate: Vec<f64>,
    pub gap_quantiles: GapQuantiles<S>,
    pub failures: Vec<TrialFailure>,
}

/// Report plus the per-trial records, in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun<S> {
    pub report: ExperimentReport<S>,
    pub records: Vec<TrialRecord<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings<S> {
    pub trials: usize,
    pub master_seed: u64,
    pub energy_window: (S, S),
    pub tolerance: S,
    pub epsilon_grid: Vec<S>,
    /// Thread cap for the trial loop; None uses the global pool. Affects
    /// speed only, never results.
    pub threads: Option<usize>,
}

impl<S: Scalar> ExperimentSettings<S> {
    /// Window (0, 25), tolerance 1e-9, epsilon grid 1e-2 .. 1e-5.
    pub fn standard(trials: usize, master_seed: u64) -> Self {
        ExperimentSettings {
            trials,
            master_seed,
            energy_window: (S::zero(), S::of(25.0)),
            tolerance: S::of(1e-9),
            epsilon_grid: vec![S::of(1e-2), S::of(1e-3), S::of(1e-4), S::of(1e-5)],
            threads: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("experiment", "needs at least one trial"));
        }
        if self.epsilon_grid.is_empty()
            || self.epsilon_grid.iter().any(|e| !e.is_finite() || *e <= S::zero())
        {
            return Err(Error::invalid(
                "experiment",
                "epsilon grid must be nonempty and positive",
            ));
        }
        if !self.tolerance.is_finite() || self.tolerance <= S::zero() {
            return Err(Error::invalid("tolerance", "must be finite and positive"));
        }
        if !self.energy_window.0.is_finite()
            || !self.energy_window.1.is_finite()
            || self.energy_window.0 >= self.energy_window.1
        {
            return Err(Error::invalid("energy window", "need finite lo < hi"));
        }
        Ok(())
    }
}

/// Run one trial: realize, solve, compare. Only eigenvalues inside the
/// window enter the comparison on either side.
pub fn run_trial<S: Scalar>(
    solver: &Solver<S>,
    model: &RandomPotentialModel<S>,
    comparison: &ComparisonSpec<S>,
    seed: u64,
    settings: &ExperimentSettings<S>,
) -> Result<TrialRecord<S>> {
    let omega = sample_omega(model, seed);
    let problem = full_problem(model, &omega)?;
    let spectrum =
        solver.values_in_window(&problem, settings.energy_window, settings.tolerance)?;
    let others: Vec<S> = match comparison {
        ComparisonSpec::SelfControl => spectrum.clone(),
        ComparisonSpec::FixedEnergy { energy } => vec![*energy],
        ComparisonSpec::Subinterval { interval, left_angle, right_angle } => {
            let sub = build_regular_problem(
                model,
                &omega,
                *interval,
                *left_angle,
                *right_angle,
                None,
            )?;
            solver.values_in_window(&sub, settings.energy_window, settings.tolerance)?
        }
        ComparisonSpec::HOfCoordinate { coordinate, scale, offset } => {
            vec![*scale * omega.values[coordinate] + *offset]
        }
    };
    let mut min_gap: Option<S> = None;
    for &e in &spectrum {
        for &r in &others {
            let g = (e - r).abs();
            min_gap = Some(min_gap.map_or(g, |m| m.min(g)));
        }
    }
    let coincidence = settings
        .epsilon_grid
        .iter()
        .map(|&eps| min_gap.is_some_and(|g| g < eps))
        .collect();
    Ok(TrialRecord { seed, min_gap, coincidence })
}

/// Coincidence rates and gap quantiles over finished trials.
pub fn gap_statistics<S: Scalar>(
    records: &[TrialRecord<S>],
    epsilon_grid: &[S],
) -> Result<GapStatistics<S>> {
    if records.is_empty() {
        return Err(Error::EmptyExperiment);
    }
    let n = records.len();
    let coincidence_rate = epsilon_grid
        .iter()
        .map(|&eps| {
            let hits = records
                .iter()
                .filter(|r| r.min_gap.is_some_and(|g| g < eps))
                .count();
            hits as f64 / n as f64
        })
        .collect();
    // None sorts last: an absent gap is an infinite one.
    let mut gaps: Vec<Option<S>> = records.iter().map(|r| r.min_gap).collect();
    gaps.sort_by(|a, b| match (a, b) {
        (Some(x), Some(y)) => x.partial_cmp(y).unwrap(),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    });
    let rank = |q: f64| -> Option<S> {
        let idx = ((q * n as f64).ceil() as usize).max(1) - 1;
        gaps[idx.min(n - 1)]
    };
    Ok(GapStatistics {
        coincidence_rate,
        quantiles: GapQuantiles { q01: rank(0.01), q05: rank(0.05), q50: rank(0.50) },
    })
}

/// Run the full experiment. Per-trial failures are collected in the
/// report, not fatal; an experiment with zero successes errors.
pub fn run_experiment<S: Scalar>(
    solver: &Solver<S>,
    model: &RandomPotentialModel<S>,
    comparison: &ComparisonSpec<S>,
    settings: &ExperimentSettings<S>,
) -> Result<ExperimentRun<S>> {
    settings.validate()?;
    comparison.validate(model)?;
    let one = |i: usize| -> Result<TrialRecord<S>> {
        let seed = trial_seed(settings.master_seed, i);
        run_trial(solver, model, comparison, seed, settings).map_err(|e| Error::Trial {
            trial: i,
            seed,
            source: Box::new(e),
        })
    };
    let outcomes: Vec<Result<TrialRecord<S>>> = match settings.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::invalid("thread pool", e.to_string()))?
            .install(|| (0..settings.trials).into_par_iter().map(one).collect()),
        None => (0..settings.trials).into_par_iter().map(one).collect(),
    };
    let mut records = Vec::with_capacity(settings.trials);
    let mut failures = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => records.push(r),
            Err(Error::Trial { trial, seed, source }) => failures.push(TrialFailure {
                trial,
                seed,
                message: source.to_string(),
            }),
            Err(other) => failures.push(TrialFailure {
                trial: i,
                seed: trial_seed(settings.master_seed, i),
                message: other.to_string(),
            }),
        }
    }
    let stats = gap_statistics(&records, &settings.epsilon_grid)?;
    let report = ExperimentReport {
        comparison: comparison.clone(),
        trials: settings.trials,
        succeeded: records.len(),
        master_seed: settings.master_seed,
        energy_window: settings.energy_window,
        tolerance: settings.tolerance,
        epsilon_grid: settings.epsilon_grid.clone(),
        coincidence_rate: stats.coincidence_rate,
        gap_quantiles: stats.quantiles,
        failures,
    };
    Ok(ExperimentRun { report, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BasePotential;
    use crate::sampling::DistributionSpec;

    fn model() -> RandomPotentialModel<f64> {
        RandomPotentialModel::unit_bumps(
            Interval::new(-4.0, 4.0).unwrap(),
            BasePotential::Zero,
            -3,
            2,
            DistributionSpec::Uniform { lo: 0.0, hi: 1.0 },
            BoundaryAngle::dirichlet(),
            BoundaryAngle::dirichlet(),
        )
        .unwrap()
    }

    fn sub_comparison() -> ComparisonSpec<f64> {
        ComparisonSpec::Subinterval {
            interval: Interval::new(-1.0, 3.0).unwrap(),
            left_angle: BoundaryAngle::dirichlet(),
            right_angle: BoundaryAngle::dirichlet(),
        }
    }

    #[test]
    fn self_control_gap_is_zero() {
        let s = Solver::default();
        let settings = ExperimentSettings::standard(1, 0);
        let seed = trial_seed(0, 0);
        let r =
            run_trial(&s, &model(), &ComparisonSpec::SelfControl, seed, &settings).unwrap();
        assert_eq!(r.min_gap, Some(0.0));
        assert!(r.coincidence.iter().all(|&c| c));
    }

    #[test]
    fn subinterval_trial_produces_a_positive_gap() {
        let s = Solver::default();
        let settings = ExperimentSettings::standard(1, 0);
        let r = run_trial(&s, &model(), &sub_comparison(), trial_seed(0, 0), &settings)
            .unwrap();
        let g = r.min_gap.unwrap();
        assert!(g > 0.0, "distinct spectra should not coincide, gap {g}");
    }

    #[test]
    fn empty_window_gives_no_gap() {
        let s = Solver::default();
        // Potentials live in [0, 1]; window far below the spectrum.
        let mut settings = ExperimentSettings::standard(1, 0);
        settings.energy_window = (-10.0, -5.0);
        let r = run_trial(&s, &model(), &sub_comparison(), trial_seed(0, 0), &settings)
            .unwrap();
        assert_eq!(r.min_gap, None);
        assert!(r.coincidence.iter().all(|&c| !c));
    }

    #[test]
    fn comparison_validation_catches_bad_specs() {
        let m = model();
        // Subinterval covering every bump: nothing excluded.
        let bad = ComparisonSpec::Subinterval {
            interval: Interval::new(-3.5, 3.5).unwrap(),
            left_angle: BoundaryAngle::dirichlet(),
            right_angle: BoundaryAngle::dirichlet(),
        };
        assert!(bad.validate(&m).is_err());
        // Subinterval outside the truncation.
        let bad = ComparisonSpec::Subinterval {
            interval: Interval::new(-5.0, 0.0).unwrap(),
            left_angle: BoundaryAngle::dirichlet(),
            right_angle: BoundaryAngle::dirichlet(),
        };
        assert!(bad.validate(&m).is_err());
        assert!(ComparisonSpec::HOfCoordinate { coordinate: 9, scale: 1.0, offset: 0.0 }
            .validate(&m)
            .is_err());
        assert!(sub_comparison().validate(&m).is_ok());
    }

    #[test]
    fn gap_statistics_computes_rates_and_quantiles() {
        let records: Vec<TrialRecord<f64>> = [0.5e-3, 2e-3, 5e-2]
            .iter()
            .map(|&g| TrialRecord { seed: 0, min_gap: Some(g), coincidence: vec![] })
            .collect();
        let stats = gap_statistics(&records, &[1e-2, 1e-3]).unwrap();
        assert_eq!(stats.coincidence_rate, vec![2.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(stats.quantiles.q01, Some(0.5e-3));
        assert_eq!(stats.quantiles.q50, Some(2e-3));
    }

    #[test]
    fn gap_statistics_sorts_missing_gaps_last() {
        let records: Vec<TrialRecord<f64>> = vec![
            TrialRecord { seed: 0, min_gap: None, coincidence: vec![] },
            TrialRecord { seed: 1, min_gap: Some(1.0), coincidence: vec![] },
        ];
        let stats = gap_statistics(&records, &[1e-2]).unwrap();
        assert_eq!(stats.quantiles.q01, Some(1.0));
        assert_eq!(stats.quantiles.q50, Some(1.0));
        assert_eq!(stats.coincidence_rate, vec![0.0]);
    }

    #[test]
    fn gap_statistics_rejects_empty_input() {
        let records: Vec<TrialRecord<f64>> = vec![];
        assert!(matches!(
            gap_statistics(&records, &[1e-2]),
            Err(Error::EmptyExperiment)
        ));
    }

    #[test]
    fn rates_are_monotone_in_epsilon() {
        let s = Solver::default();
        let mut settings = ExperimentSettings::standard(40, 7);
        settings.epsilon_grid = vec![1e-1, 1e-2, 1e-3, 1e-4];
        let run = run_experiment(&s, &model(), &sub_comparison(), &settings).unwrap();
        let rates = &run.report.coincidence_rate;
        for w in rates.windows(2) {
            assert!(w[0] >= w[1], "rates must shrink with epsilon: {rates:?}");
        }
        assert_eq!(run.report.succeeded, 40);
        assert!(run.report.failures.is_empty());
    }

    #[test]
    fn experiment_is_reproducible_across_thread_counts() {
        let s = Solver::default();
        let mut a = ExperimentSettings::standard(24, 3);
        a.threads = Some(1);
        let mut b = a.clone();
        b.threads = Some(8);
        let ra = run_experiment(&s, &model(), &sub_comparison(), &a).unwrap();
        let rb = run_experiment(&s, &model(), &sub_comparison(), &b).unwrap();
        assert_eq!(ra.report, rb.report);
        assert_eq!(ra.records, rb.records);
    }

    #[test]
    fn trial_records_are_pure_functions_of_the_seed() {
        let s = Solver::default();
        let settings = ExperimentSettings::standard(6, 11);
        let run = run_experiment(&s, &model(), &sub_comparison(), &settings).unwrap();
        for (i, rec) in run.records.iter().enumerate() {
            let seed = trial_seed(11, i);
            assert_eq!(rec.seed, seed);
            let again =
                run_trial(&s, &model(), &sub_comparison(), seed, &settings).unwrap();
            assert_eq!(*rec, again);
        }
    }

    #[test]
    fn report_serde_round_trip() {
        let s = Solver::default();
        let settings = ExperimentSettings::standard(3, 5);
        let run = run_experiment(&s, &model(), &sub_comparison(), &settings).unwrap();
        let text = serde_json::to_string(&run.report).unwrap();
        let back: ExperimentReport<f64> = serde_json::from_str(&text).unwrap();
        assert_eq!(run.report, back);
    }
}
