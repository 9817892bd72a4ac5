use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::actions::{Family, SpaceKind};
use crate::error::{Error, Result};
use crate::modp::Prime;
use crate::primes::{nth_range, prime_pi, primes_up_to};
use crate::spectra::EigenRequest;

/// Which primes a sweep visits.
///
/// In JSON either a plain list `[5, 7, 13]`, `{"nth_range": [500, 600]}`
/// (1-based prime indices, left endpoint included, right excluded) or
/// `{"range": {"lo": 3000, "hi": 4000, "count": 10}}` (the first `count`
/// primes in `[lo, hi]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimeSpec {
    List(Vec<u64>),
    Grid(PrimeGrid),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PrimeGrid {
    NthRange([u64; 2]),
    Range {
        lo: u64,
        hi: u64,
        #[serde(default)]
        count: Option<usize>,
    },
}

impl PrimeSpec {
    /// `(1-based prime index, p)` pairs in sweep order.
    pub fn resolve(&self) -> Result<Vec<(u64, u64)>> {
        match self {
            PrimeSpec::List(v) => {
                let mut out = Vec::with_capacity(v.len());
                for &p in v {
                    Prime::new(p).map_err(|e| Error::Config(e.to_string()))?;
                    out.push((prime_pi(p), p));
                }
                Ok(out)
            }
            PrimeSpec::Grid(PrimeGrid::NthRange([from, to])) => {
                if *from < 2 || to < from {
                    return Err(Error::Config(format!(
                        "nth_range [{from}, {to}) must satisfy 2 <= from <= to"
                    )));
                }
                Ok(nth_range(*from, *to))
            }
            PrimeSpec::Grid(PrimeGrid::Range { lo, hi, count }) => {
                if hi < lo {
                    return Err(Error::Config(format!("empty prime range [{lo}, {hi}]")));
                }
                let all = primes_up_to(*hi);
                let first = all.partition_point(|&q| q < (*lo).max(3));
                let take = count.unwrap_or(usize::MAX);
                Ok(all[first..]
                    .iter()
                    .enumerate()
                    .take(take)
                    .map(|(i, &q)| ((first + i + 1) as u64, q))
                    .collect())
            }
        }
    }
}

/// One quantity computed per unit. In JSON, unit variants are strings
/// (`"top_eig"`) and parameterized ones objects (`{"exceptional": {"alpha":
/// 1.05}}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Measurement {
    TopEig,
    Spectrum,
    Discrepancy,
    Spacings,
    Exceptional { alpha: f64 },
    Diameter,
    RadiusAt { vertex: u64 },
    EssentialDiameter { q: f64 },
    Girth,
}

impl Measurement {
    pub fn is_spectral(self) -> bool {
        matches!(
            self,
            Measurement::TopEig
                | Measurement::Spectrum
                | Measurement::Discrepancy
                | Measurement::Spacings
                | Measurement::Exceptional { .. }
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Measurement::TopEig => "top_eig",
            Measurement::Spectrum => "spectrum",
            Measurement::Discrepancy => "discrepancy",
            Measurement::Spacings => "spacings",
            Measurement::Exceptional { .. } => "exceptional",
            Measurement::Diameter => "diameter",
            Measurement::RadiusAt { .. } => "radius_at",
            Measurement::EssentialDiameter { .. } => "essential_diameter",
            Measurement::Girth => "girth",
        }
    }
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_pairs() -> usize {
    2
}

fn default_sample_sources() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    pub space: SpaceKind,
    pub primes: PrimeSpec,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Random families draw `d` elements plus inverses (degree `2d`).
    #[serde(default = "default_pairs")]
    pub d: usize,
    pub measurements: Vec<Measurement>,
    #[serde(default)]
    pub eigen: EigenRequest,
    /// BFS sources for the sampled essential diameter on large graphs.
    #[serde(default = "default_sample_sources")]
    pub sample_sources: usize,
    pub output: PathBuf,
    #[serde(default)]
    pub figure_csv: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.measurements.is_empty() {
            return bad("measurement set is empty".into());
        }
        if self.seeds.is_empty() {
            return bad("seed list is empty".into());
        }
        if self.family == Family::Custom {
            return bad("family must be fixed, lps or random".into());
        }
        if self.space == SpaceKind::Perm && self.family != Family::Random {
            return bad("the permutation space needs the random family".into());
        }
        if self.family == Family::Random && self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.family == Family::Lps && self.space != SpaceKind::Projective {
            return bad("LPS generators are symmetric only on the projective line".into());
        }
        for m in &self.measurements {
            match *m {
                Measurement::Exceptional { alpha } if !(alpha > 1.0) => {
                    return bad(format!("alpha must exceed 1, got {alpha}"))
                }
                Measurement::EssentialDiameter { q } if !(q > 0.0 && q < 1.0) => {
                    return bad(format!("q must lie in (0, 1), got {q}"))
                }
                Measurement::Girth if self.space == SpaceKind::Perm => {
                    return bad("girth needs matrix generators".into())
                }
                _ => {}
            }
        }
        self.eigen
            .validate()
            .map_err(|e| Error::Config(e.to_string()))?;
        let primes = self.primes.resolve()?;
        if primes.is_empty() {
            return bad("prime grid is empty".into());
        }
        if self.family == Family::Lps {
            if let Some((_, p)) = primes.iter().find(|(_, p)| p % 12 != 1) {
                return bad(format!("LPS family needs p = 1 mod 12, got {p}"));
            }
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON of every field except the output
    /// paths, as lowercase hex.
    pub fn digest(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = v.as_object_mut() {
            map.remove("output");
            map.remove("figure_csv");
        }
        let bytes = Sha256::digest(v.to_string().as_bytes());
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Degree of the generator sets this config produces.
    pub fn degree(&self) -> usize {
        match self.family {
            Family::Random => 2 * self.d,
            _ => 4,
        }
    }
}
