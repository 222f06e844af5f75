//! The JSON model document shared by every subcommand.
//!
//! ```json
//! {
//!   "interval": [null, null],
//!   "truncation": [-4.0, 4.0],
//!   "base_potential": {"kind": "zero"},
//!   "bumps": [
//!     {"n": -3, "support": [-3.0, -2.0], "shape": "indicator", "amplitude": 1.0}
//!   ],
//!   "distributions": [
//!     {"n": -3, "kind": "uniform", "params": {"lo": 0.0, "hi": 1.0}}
//!   ],
//!   "boundary": {"left_angle": 0.0, "right_angle": 0.0}
//! }
//! ```
//!
//! `interval` is the nominal domain of the operator and may be open-ended
//! (null); everything is solved on `truncation`, which must lie inside it.
//! Angles are radians. Bump and distribution lists are keyed by the same
//! consecutive integers `n`.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sturm_rand::{
    BasePotential, BoundaryAngle, BumpFunction, BumpShape, DistributionSpec, Interval,
    RandomPotentialModel,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default)]
    interval: Option<(Option<f64>, Option<f64>)>,
    truncation: (f64, f64),
    #[serde(default)]
    base_potential: Option<BasePotential<f64>>,
    bumps: Vec<BumpEntry>,
    distributions: Vec<DistributionEntry>,
    boundary: BoundaryEntry,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BumpEntry {
    n: i64,
    support: (f64, f64),
    shape: BumpShape,
    amplitude: f64,
}

// No deny_unknown_fields here: serde cannot combine it with flatten.
#[derive(Debug, Deserialize)]
struct DistributionEntry {
    n: i64,
    #[serde(flatten)]
    law: DistributionSpec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryEntry {
    left_angle: f64,
    right_angle: f64,
}

impl ModelDocument {
    pub fn into_model(self) -> Result<RandomPotentialModel<f64>> {
        let truncation = Interval::new(self.truncation.0, self.truncation.1)
            .context("field `truncation`")?;
        if let Some((lo, hi)) = self.interval {
            if let Some(lo) = lo {
                if !lo.is_finite() || lo > truncation.lo() {
                    bail!("field `interval`: truncation must lie inside the interval");
                }
            }
            if let Some(hi) = hi {
                if !hi.is_finite() || hi < truncation.hi() {
                    bail!("field `interval`: truncation must lie inside the interval");
                }
            }
        }

        let mut laws: std::collections::BTreeMap<i64, DistributionSpec<f64>> =
            std::collections::BTreeMap::new();
        for entry in self.distributions {
            if laws.insert(entry.n, entry.law).is_some() {
                bail!("field `distributions`: duplicate index {}", entry.n);
            }
        }
        let mut entries = Vec::with_capacity(self.bumps.len());
        for bump in self.bumps {
            let support = Interval::new(bump.support.0, bump.support.1)
                .with_context(|| format!("field `bumps`: support of index {}", bump.n))?;
            let f = BumpFunction::new(support, bump.shape, bump.amplitude)
                .with_context(|| format!("field `bumps`: index {}", bump.n))?;
            let law = laws.remove(&bump.n).with_context(|| {
                format!("field `distributions`: no law for bump index {}", bump.n)
            })?;
            entries.push((bump.n, f, law));
        }
        if let Some((n, _)) = laws.into_iter().next() {
            bail!("field `bumps`: no bump for distribution index {n}");
        }

        let left = BoundaryAngle::new(self.boundary.left_angle)
            .context("field `boundary.left_angle`")?;
        let right = BoundaryAngle::new(self.boundary.right_angle)
            .context("field `boundary.right_angle`")?;
        RandomPotentialModel::new(
            truncation,
            self.base_potential.unwrap_or(BasePotential::Zero),
            entries,
            left,
            right,
        )
        .context("model document")
    }
}

/// Parse a model file. Returns the raw document (embedded verbatim in
/// output envelopes) alongside the validated model.
pub fn load_model(path: &Path) -> Result<(serde_json::Value, RandomPotentialModel<f64>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading model file {}", path.display()))?;
    let doc: ModelDocument = serde_json::from_str(&text)
        .with_context(|| format!("model schema in {}", path.display()))?;
    let raw: serde_json::Value = serde_json::from_str(&text).expect("parsed once already");
    Ok((raw, doc.into_model()?))
}
