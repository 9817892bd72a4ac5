use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::record::ExperimentRecord;
use crate::stats::Histogram;

/// Scalar extracted from each record for [`summarize`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummaryField {
    /// `λ₂ − 2√(k−1)`; positive values are Ramanujan violations.
    TopEig,
    Discrepancy,
    Diameter,
    Radius,
    EssentialDiameter,
    Exceptional,
    Girth,
}

impl FromStr for SummaryField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown measurement '{s}'")))
    }
}

impl SummaryField {
    fn extract(self, r: &ExperimentRecord) -> Option<f64> {
        let res = &r.results;
        match self {
            SummaryField::TopEig => res.lambda2_minus_bound,
            SummaryField::Discrepancy => res.discrepancy,
            SummaryField::Diameter => res.diameter.map(f64::from),
            SummaryField::Radius => res.radius.first().map(|x| x.radius as f64),
            SummaryField::EssentialDiameter => res.essential_diameter.first().map(|x| x.h as f64),
            SummaryField::Exceptional => res.exceptional.first().map(|x| x.count as f64),
            SummaryField::Girth => res.girth.and_then(|g| g.relator_length).map(f64::from),
        }
    }

    fn is_integral(self) -> bool {
        !matches!(self, SummaryField::TopEig | SummaryField::Discrepancy)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub field: SummaryField,
    pub count: usize,
    /// Records without a value for the field (disconnected or failed).
    pub missing: usize,
    pub mean: f64,
    /// Population variance (divides by `count`).
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub bin_edges: Vec<f64>,
    pub bin_counts: Vec<usize>,
    /// Occurrences per value, for integer-valued fields.
    pub value_counts: Option<BTreeMap<i64, usize>>,
    /// Records with `λ₂ > 2√(k−1)`; top-eigenvalue field only.
    pub ramanujan_violations: Option<usize>,
}

/// Mean and population variance.
pub fn summarize_values(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    Ok((mean, var))
}

/// Summary of one field over records from a single family, space and
/// degree. Integer fields get one histogram bin per value; real fields
/// `bins` equal bins over `[min, max]`.
pub fn summarize(
    records: &[ExperimentRecord],
    field: SummaryField,
    bins: usize,
) -> Result<Summary> {
    let first = records.first().ok_or(Error::EmptyInput)?;
    if let Some(r) = records
        .iter()
        .find(|r| (r.family, r.space, r.degree) != (first.family, first.space, first.degree))
    {
        return Err(Error::Config(format!(
            "records mix {:?}/{:?}/k={} with {:?}/{:?}/k={}",
            first.family, first.space, first.degree, r.family, r.space, r.degree
        )));
    }
    let values: Vec<f64> = records.iter().filter_map(|r| field.extract(r)).collect();
    let (mean, variance) = summarize_values(&values)?;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (hist, value_counts) = if field.is_integral() {
        let mut vc = BTreeMap::new();
        for v in &values {
            *vc.entry(v.round() as i64).or_insert(0) += 1;
        }
        let nb = (max - min).round() as usize + 1;
        (Histogram::new(&values, min - 0.5, max + 0.5, nb)?, Some(vc))
    } else {
        let (lo, hi) = if max > min {
            (min, max)
        } else {
            (min - 0.5, min + 0.5)
        };
        (Histogram::new(&values, lo, hi, bins.max(1))?, None)
    };
    let ramanujan_violations =
        (field == SummaryField::TopEig).then(|| values.iter().filter(|&&v| v > 0.0).count());
    Ok(Summary {
        field,
        count: values.len(),
        missing: records.len() - values.len(),
        mean,
        variance,
        min,
        max,
        bin_edges: hist.edges,
        bin_counts: hist.counts,
        value_counts,
        ramanujan_violations,
    })
}

impl Summary {
    /// Most frequent value of an integer field (smallest on ties).
    pub fn mode(&self) -> Option<i64> {
        let vc = self.value_counts.as_ref()?;
        let best = vc.values().copied().max()?;
        vc.iter().find(|(_, &c)| c == best).map(|(&v, _)| v)
    }
}
