//! Shared fixtures for the integration suites: an independent
//! finite-difference eigensolver oracle and a dense coupling-scan oracle.

#![allow(dead_code)]

pub mod oracle;

use sturm_rand::{
    BasePotential, BoundaryAngle, DistributionSpec, Interval, RandomPotentialModel,
};

/// The canonical random model used across the suites: unit indicator bumps
/// on (n, n+1) for n = -3..=2, uniform(0,1) coordinates, working interval
/// (-4, 4), Dirichlet ends.
pub fn anderson_model() -> RandomPotentialModel<f64> {
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
