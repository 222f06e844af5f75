//! A numerical laboratory for random Sturm-Liouville operators on an
//! interval.
//!
//! The operator family is H u = -u'' + (v + sum_n omega(n) f_n) u with a
//! deterministic background v, disjoint bump functions f_n, and random
//! coordinates omega(n) drawn independently per index. The crate provides
//!
//! - a shooting eigensolver in phase (angle/amplitude) coordinates:
//!   eigenvalue counting, k-th eigenvalues, windows of eigenpairs,
//!   boundary solutions ([`prufer`]);
//! - coupling-constant spectra: for fixed energy E, the discrete set of
//!   couplings lambda at which E is an eigenvalue of a bump-coupled
//!   problem, enumerated by branch-wise bisection ([`coupling`]);
//! - reproducible sampling of realizations from counter-based per-index
//!   substreams ([`sampling`]);
//! - Monte Carlo experiments measuring how often independently produced
//!   spectra and comparison sets come within epsilon of each other
//!   ([`experiment`]).
//!
//! Everything is generic over the floating-point scalar through
//! [`Scalar`]; the aliases below fix f64, the precision used in practice.
//!
//! ```
//! use sturm_rand::{
//!     BoundaryAngle, Interval, Potential, RegularProblem, Solver,
//! };
//!
//! // Dirichlet problem for -u'' on (0, pi): eigenvalues (k+1)^2.
//! let problem = RegularProblem::new(
//!     Interval::new(0.0_f64, std::f64::consts::PI).unwrap(),
//!     Potential::zero(),
//!     BoundaryAngle::dirichlet(),
//!     BoundaryAngle::dirichlet(),
//! );
//! let solver = Solver::default();
//! let e0 = solver.kth_value(&problem, 0, 1e-10).unwrap();
//! assert!((e0 - 1.0).abs() < 1e-8);
//! ```

pub mod coupling;
pub mod error;
pub mod experiment;
pub mod model;
pub mod ode;
pub mod prufer;
pub mod sampling;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use model::{
    build_regular_problem, eval_potential, full_problem, BasePotential, BoundaryAngle,
    BumpFunction, BumpShape, IndexRange, Interval, OmegaSample, Potential,
    RandomPotentialModel, RegularProblem,
};
pub use ode::OdeSettings;
pub use prufer::{wronskian, Eigenpair, PruferState, Solver, SpectrumWindow};
pub use sampling::{sample_omega, sample_one, trial_seed, DistributionSpec, SubStream};

pub use coupling::{
    coupling_mismatch, coupling_roots, extract_boundary_angles, verify_discreteness,
    CouplingSetResult, DiscretenessReport, Mismatch,
};
pub use experiment::{
    gap_statistics, run_experiment, run_trial, ComparisonSpec, ExperimentReport,
    ExperimentRun, ExperimentSettings, GapQuantiles, GapStatistics, TrialFailure,
    TrialRecord,
};

/// f64 instantiations, the precision used throughout the test suite.
pub type IntervalF64 = Interval<f64>;
pub type BoundaryAngleF64 = BoundaryAngle<f64>;
pub type BumpFunctionF64 = BumpFunction<f64>;
pub type BasePotentialF64 = BasePotential<f64>;
pub type RandomPotentialModelF64 = RandomPotentialModel<f64>;
pub type OmegaSampleF64 = OmegaSample<f64>;
pub type PotentialF64 = Potential<f64>;
pub type RegularProblemF64 = RegularProblem<f64>;
pub type DistributionSpecF64 = DistributionSpec<f64>;
pub type SolverF64 = Solver<f64>;
pub type PruferStateF64 = PruferState<f64>;
pub type EigenpairF64 = Eigenpair<f64>;
pub type SpectrumWindowF64 = SpectrumWindow<f64>;
pub type MismatchF64 = Mismatch<f64>;
pub type CouplingSetResultF64 = CouplingSetResult<f64>;
pub type DiscretenessReportF64 = DiscretenessReport<f64>;
pub type ComparisonSpecF64 = ComparisonSpec<f64>;
pub type ExperimentReportF64 = ExperimentReport<f64>;
pub type ExperimentSettingsF64 = ExperimentSettings<f64>;
pub type TrialRecordF64 = TrialRecord<f64>;
