use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::actions::{Family, Provenance, SpaceKind};
use crate::desymmetrize::Sector;
use crate::error::{Error, Result};
use crate::experiments::config::Measurement;
use crate::metrics::Girth;
use crate::spectra::EigenRequest;

/// Bumped whenever a field changes meaning.
pub const RECORD_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsTriple {
    pub goe: f64,
    pub gse: f64,
    pub poisson: f64,
    pub spacings: usize,
    pub sector: Sector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalResult {
    pub alpha: f64,
    pub count: usize,
    pub threshold: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusResult {
    pub vertex: u64,
    pub radius: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssentialResult {
    pub q: f64,
    pub h: u32,
    pub exact: bool,
}

/// Results of one unit; fields not requested (or not computable) are null.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MeasurementResults {
    pub lambda2: Option<f64>,
    pub lambda_min: Option<f64>,
    /// `λ₂ − 2√(k−1)`.
    pub lambda2_minus_bound: Option<f64>,
    pub bipartite: Option<bool>,
    pub spectrum: Option<Vec<f64>>,
    pub discrepancy: Option<f64>,
    pub spacings_ks: Option<KsTriple>,
    pub exceptional: Vec<ExceptionalResult>,
    pub diameter: Option<u32>,
    pub radius: Vec<RadiusResult>,
    pub essential_diameter: Vec<EssentialResult>,
    pub girth: Option<Girth>,
    /// Seconds per measurement name.
    pub runtimes: BTreeMap<String, f64>,
}

/// One `(p, seed)` unit of a sweep. Carries everything needed to rerun it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema: u32,
    pub config_digest: String,
    pub family: Family,
    pub space: SpaceKind,
    pub p: u64,
    pub prime_index: u64,
    pub seed: u64,
    pub d: usize,
    pub degree: usize,
    pub vertices: u64,
    pub provenance: Option<Provenance>,
    pub measurements: Vec<Measurement>,
    pub eigen: EigenRequest,
    pub connected: Option<bool>,
    pub results: MeasurementResults,
    pub errors: Vec<String>,
    pub software_version: String,
    pub wall_time_s: f64,
}

impl ExperimentRecord {
    pub fn key(&self) -> (String, u64, u64) {
        (self.config_digest.clone(), self.p, self.seed)
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// Parses a JSONL stream; blank lines are skipped and a truncated final
/// line (an interrupted write) is ignored.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<ExperimentRecord>> {
    let lines: Vec<String> = r.lines().collect::<std::io::Result<_>>()?;
    let last = lines.iter().rposition(|l| !l.trim().is_empty());
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(rec) => out.push(rec),
            Err(_) if Some(i) == last => break,
            Err(e) => return Err(Error::Format(format!("line {}: {e}", i + 1))),
        }
    }
    Ok(out)
}
