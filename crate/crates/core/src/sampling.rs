//! Deterministic sampling of the random coordinates.
//!
//! Each coordinate n draws from its own counter-based substream keyed by
//! (seed, n), so realizations are reproducible regardless of evaluation
//! order or thread count, and resampling one coordinate leaves the others
//! untouched. Trial seeds for Monte Carlo runs come from the same
//! construction under a separate domain tag.
//!
//! Draws are generated at f64 precision from 53-bit words and converted to
//! the solver scalar, so f32 and f64 instantiations see the same stream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{OmegaSample, RandomPotentialModel};
use crate::scalar::Scalar;

/// splitmix64 increment.
const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
/// Domain tags keep coordinate streams and trial-seed streams apart.
const DOMAIN_OMEGA: u64 = 0x4F_4D_45_47_41;
const DOMAIN_TRIAL: u64 = 0x54_52_49_41_4C;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A splitmix64 stream: output i is a pure function of (key, i).
#[derive(Debug, Clone)]
pub struct SubStream {
    state: u64,
}

impl SubStream {
    fn keyed(seed: u64, domain: u64, index: i64) -> Self {
        let k = mix64(seed ^ mix64(domain));
        SubStream { state: mix64(k ^ index as u64) }
    }

    /// Substream for coordinate n under the given realization seed.
    pub fn for_coordinate(seed: u64, n: i64) -> Self {
        SubStream::keyed(seed, DOMAIN_OMEGA, n)
    }

    /// Substream that feeds trial `i` of a Monte Carlo run.
    pub fn for_trial(master_seed: u64, i: usize) -> Self {
        SubStream::keyed(master_seed, DOMAIN_TRIAL, i as i64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (f64::EPSILON / 2.0)
    }
}

/// Per-trial seed for Monte Carlo experiments.
pub fn trial_seed(master_seed: u64, trial: usize) -> u64 {
    SubStream::for_trial(master_seed, trial).next_u64()
}

/// Distribution of one random coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum DistributionSpec<S> {
    Uniform { lo: S, hi: S },
    Gaussian { mean: S, sd: S },
    /// The Cantor measure pushed onto [lo, hi]: 53 fair ternary digits,
    /// each 0 or 2. Mean (lo+hi)/2, variance (hi-lo)^2/8.
    Cantor { lo: S, hi: S },
    /// Finitely many atoms (value, probability), probabilities summing to 1.
    Atomic { points: Vec<(S, S)> },
}

impl<S: Scalar> DistributionSpec<S> {
    pub fn validate(&self) -> Result<()> {
        match self {
            DistributionSpec::Uniform { lo, hi } | DistributionSpec::Cantor { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                    return Err(Error::invalid("distribution", "need finite lo < hi"));
                }
            }
            DistributionSpec::Gaussian { mean, sd } => {
                if !mean.is_finite() || !sd.is_finite() || *sd <= S::zero() {
                    return Err(Error::invalid(
                        "distribution",
                        "need finite mean and positive sd",
                    ));
                }
            }
            DistributionSpec::Atomic { points } => {
                if points.is_empty() {
                    return Err(Error::invalid("distribution", "atomic needs points"));
                }
                let mut sum = S::zero();
                for (v, p) in points {
                    if !v.is_finite() || !p.is_finite() || *p <= S::zero() {
                        return Err(Error::invalid(
                            "distribution",
                            "atomic probabilities must be positive and finite",
                        ));
                    }
                    sum += *p;
                }
                if (sum - S::one()).abs() > S::of(1e-9) {
                    return Err(Error::invalid(
                        "distribution",
                        format!("atomic probabilities sum to {sum}, not 1"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Continuous laws never share exact values across draws; atoms do.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, DistributionSpec::Atomic { .. })
    }
}

/// One draw. Consumes one 53-bit word for uniform and Cantor, two for
/// Gaussian (Box-Muller), one for atomic (inverse CDF walk).
pub fn sample_one<S: Scalar>(spec: &DistributionSpec<S>, stream: &mut SubStream) -> S {
    match spec {
        DistributionSpec::Uniform { lo, hi } => {
            let u = S::of(stream.next_unit());
            *lo + (*hi - *lo) * u
        }
        DistributionSpec::Gaussian { mean, sd } => {
            let u1 = stream.next_unit();
            let u2 = stream.next_unit();
            // 1 - u1 lies in (0, 1], so the log is finite.
            let r = (-2.0 * (1.0 - u1).ln()).sqrt();
            let z = r * (2.0 * std::f64::consts::PI * u2).cos();
            *mean + *sd * S::of(z)
        }
        DistributionSpec::Cantor { lo, hi } => {
            let bits = stream.next_u64() >> 11;
            // Exact numerator of sum_j d_j 3^(-j), digits d_j in {0, 2},
            // most significant bit first; one rounding at the division.
            let mut num: u128 = 0;
            for j in 0..53 {
                let d = ((bits >> (52 - j)) & 1) as u128 * 2;
                num = num * 3 + d;
            }
            let unit = num as f64 / 3f64.powi(53);
            *lo + (*hi - *lo) * S::of(unit)
        }
        DistributionSpec::Atomic { points } => {
            let u = stream.next_unit();
            let mut cum = 0.0f64;
            for (v, p) in points {
                cum += p.as_f64();
                if u < cum {
                    return *v;
                }
            }
            points.last().unwrap().0
        }
    }
}

/// Realize every coordinate of the model from its (seed, n) substream.
pub fn sample_omega<S: Scalar>(
    model: &RandomPotentialModel<S>,
    seed: u64,
) -> OmegaSample<S> {
    let values = model
        .index_range()
        .iter()
        .map(|n| {
            let mut stream = SubStream::for_coordinate(seed, n);
            (n, sample_one(&model.distributions()[&n], &mut stream))
        })
        .collect();
    OmegaSample { seed, values }
}
