//! Structured output: JSON envelopes and the per-trial CSV stream.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sturm_rand::TrialRecord;

/// Every command emits one of these: the result plus everything needed to
/// reproduce it. `timestamp` (unix seconds) is excluded from
/// reproducibility comparisons.
#[derive(Serialize)]
pub struct Envelope<C: Serialize, R: Serialize> {
    pub command: &'static str,
    pub timestamp: u64,
    pub config: C,
    pub result: R,
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Pretty JSON to the path, or stdout when none is given.
pub fn emit(out: Option<&Path>, envelope: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(envelope).context("serializing output")?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("writing output file {}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .context("writing to stdout"),
    }
}

/// The trial stream is defined for the standard epsilon grid only; the
/// column names are part of the format.
pub const CSV_HEADER: &str = "trial,seed,min_gap,coinc_1e-2,coinc_1e-3,coinc_1e-4,coinc_1e-5";
pub const STANDARD_EPS: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];

pub fn write_trial_csv(path: &Path, records: &[TrialRecord<f64>]) -> Result<()> {
    let mut text = String::with_capacity(64 * (records.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for (trial, record) in records.iter().enumerate() {
        let gap = match record.min_gap {
            Some(g) => format!("{g}"),
            None => "inf".to_string(),
        };
        text.push_str(&format!("{trial},{},{gap}", record.seed));
        for &hit in &record.coincidence {
            text.push_str(if hit { ",1" } else { ",0" });
        }
        text.push('\n');
    }
    fs::write(path, text).with_context(|| format!("writing CSV file {}", path.display()))
}
