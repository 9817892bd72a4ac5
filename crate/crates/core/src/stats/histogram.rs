//! Fixed-width histograms with a reference density, written as CSV.

use std::io::Write;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// `bins` equal bins on `[lo, hi]`; values outside are ignored, `hi`
    /// falls in the last bin.
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::OutOfRange(format!(
                "bad histogram range [{lo}, {hi}] with {bins} bins"
            )));
        }
        let w = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|i| lo + w * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            if v < lo || v > hi || v.is_nan() {
                continue;
            }
            let i = (((v - lo) / w) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Ok(Histogram { edges, counts })
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// CSV with columns `bin_left,bin_right,count,model_density`; the model
    /// is evaluated at bin centres.
    pub fn write_csv<W: Write, F: Fn(f64) -> f64>(&self, mut w: W, model: F) -> Result<()> {
        writeln!(w, "bin_left,bin_right,count,model_density")?;
        for (i, c) in self.counts.iter().enumerate() {
            let (a, b) = (self.edges[i], self.edges[i + 1]);
            writeln!(w, "{a},{b},{c},{}", model((a + b) / 2.0))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_and_csv() {
        let h = Histogram::new(&[0.0, 0.1, 0.5, 0.99, 1.0, 1.5, -0.1], 0.0, 1.0, 2).unwrap();
        assert_eq!(h.counts, vec![2, 3]);
        let mut out = Vec::new();
        h.write_csv(&mut out, |_| 1.0).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "bin_left,bin_right,count,model_density\n0,0.5,2,1\n0.5,1,3,1\n"
        );
        assert!(Histogram::new(&[], 1.0, 1.0, 3).is_err());
    }
}
