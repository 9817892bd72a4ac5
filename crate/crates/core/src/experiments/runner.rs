use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{
    fixed_generators, lps_generators, random_generators, random_permutations, Family, GeneratorSet,
    SpaceKind, VertexSpace,
};
use crate::desymmetrize::{
    affine_extreme_nontrivial, affine_spectrum_by_sectors, monochromatic_spectrum,
    principal_series_indices, steinberg_spectrum, torus_sector_blocks, Sector, SpectrumSample,
};
use crate::error::{Error, Result};
use crate::experiments::config::{ExperimentConfig, Measurement};
use crate::experiments::record::{
    read_records, EssentialResult, ExceptionalResult, ExperimentRecord, KsTriple,
    MeasurementResults, RadiusResult, RECORD_SCHEMA_VERSION,
};
use crate::graph::{bipartition_signs, components, GraphBuilder, SchreierGraph};
use crate::metrics::{
    diameter, essential_diameter, girth_at_identity, radius_at, GirthLimits, EXACT_PAIRS_LIMIT,
};
use crate::modp::Prime;
use crate::spectra::{extreme_nontrivial, graph_spectrum};
use crate::stats::{
    count_exceptional, discrepancy, ramanujan_bound, spacing_ks, unfold_spacings, SpacingModel,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub written: usize,
    pub skipped: usize,
    pub with_errors: usize,
}

fn generators(cfg: &ExperimentConfig, p: u64, seed: u64) -> Result<GeneratorSet> {
    if cfg.space == SpaceKind::Perm {
        let n = u32::try_from(p).map_err(|_| Error::OutOfRange(format!("degree {p}")))?;
        return Ok(random_permutations(seed, cfg.d, n));
    }
    let p = Prime::new(p)?;
    match cfg.family {
        Family::Fixed => Ok(fixed_generators(p)),
        Family::Lps => lps_generators(p),
        Family::Random => Ok(random_generators(seed, cfg.d, p)),
        Family::Custom => Err(Error::Config("custom sets cannot be swept".into())),
    }
}

/// Lazily computed spectra shared by the spectral measurements of a unit.
#[derive(Default)]
struct SpectralCache {
    full: Option<Vec<f64>>,
    nontrivial: Option<SpectrumSample<f64>>,
}

struct Unit<'a> {
    cfg: &'a ExperimentConfig,
    p: u64,
    seed: u64,
    gens: GeneratorSet,
    graph: SchreierGraph,
    k: usize,
    cache: SpectralCache,
}

impl Unit<'_> {
    fn prime(&self) -> Result<Prime> {
        Prime::new(self.p)
    }

    fn full(&mut self) -> Result<&Vec<f64>> {
        if self.cache.full.is_none() {
            let ev = match self.cfg.space {
                SpaceKind::Affine => affine_spectrum_by_sectors(self.prime()?, &self.gens)?,
                _ => graph_spectrum::<f64>(&self.graph)?,
            };
            self.cache.full = Some(ev);
        }
        Ok(self.cache.full.as_ref().expect("filled"))
    }

    /// Steinberg sector on the projective line, principal series on the
    /// affine plane, the whole spectrum minus `±k` elsewhere.
    fn nontrivial(&mut self) -> Result<&SpectrumSample<f64>> {
        if self.cache.nontrivial.is_none() {
            let k = self.k;
            let prov = Some(self.gens.provenance());
            let sample = if self.cfg.space == SpaceKind::Affine {
                let p = self.prime()?;
                let keep: HashSet<u32> = principal_series_indices(p).collect();
                let mut ev = Vec::new();
                for b in torus_sector_blocks(p, &self.gens)? {
                    if keep.contains(&b.j()) {
                        ev.extend(b.eigenvalues::<f64>()?);
                    }
                }
                SpectrumSample::new(ev, Sector::WholeGraph, k, Some(self.p), prov)?
            } else {
                let bip = bipartition_signs(&self.graph).is_some();
                let mut s = steinberg_spectrum(self.full()?, k, bip)?;
                if self.cfg.space != SpaceKind::Projective {
                    s.sector = Sector::WholeGraph;
                }
                s.p = Some(self.p);
                s.provenance = prov;
                s
            };
            self.cache.nontrivial = Some(sample);
        }
        Ok(self.cache.nontrivial.as_ref().expect("filled"))
    }

    fn measure(&mut self, m: Measurement, out: &mut MeasurementResults) -> Result<()> {
        let k = self.k;
        match m {
            Measurement::TopEig => {
                let pair = match self.cfg.space {
                    SpaceKind::Affine => {
                        affine_extreme_nontrivial(self.prime()?, &self.gens, &self.cfg.eigen)?
                    }
                    _ => extreme_nontrivial::<f64>(&self.graph, &self.cfg.eigen)?,
                };
                out.lambda2 = Some(pair.lambda2);
                out.lambda_min = Some(pair.lambda_min);
                out.lambda2_minus_bound = Some(pair.lambda2 - ramanujan_bound(k));
                out.bipartite = Some(pair.bipartite);
            }
            Measurement::Spectrum => out.spectrum = Some(self.full()?.clone()),
            Measurement::Discrepancy => {
                out.discrepancy = Some(discrepancy(&self.nontrivial()?.eigenvalues, k)?);
            }
            Measurement::Spacings => {
                let sample = if self.cfg.space == SpaceKind::Affine {
                    monochromatic_spectrum::<f64>(self.prime()?, &self.gens, 1)?
                } else {
                    self.nontrivial()?.clone()
                };
                let series = unfold_spacings(&sample, k)?;
                out.spacings_ks = Some(KsTriple {
                    goe: spacing_ks(&series, SpacingModel::Goe),
                    gse: spacing_ks(&series, SpacingModel::Gse),
                    poisson: spacing_ks(&series, SpacingModel::Poisson),
                    spacings: series.spacings.len(),
                    sector: series.sector,
                });
            }
            Measurement::Exceptional { alpha } => {
                let c = count_exceptional(self.nontrivial()?, k, alpha)?;
                out.exceptional.push(ExceptionalResult {
                    alpha,
                    count: c.count,
                    threshold: c.threshold,
                    bound: c.bound,
                });
            }
            Measurement::Diameter => {
                let transitive = self.cfg.space == SpaceKind::Group;
                out.diameter = Some(diameter(&self.graph, transitive)?);
            }
            Measurement::RadiusAt { vertex } => {
                let v = usize::try_from(vertex).unwrap_or(usize::MAX);
                out.radius.push(RadiusResult {
                    vertex,
                    radius: radius_at(&self.graph, v)?,
                });
            }
            Measurement::EssentialDiameter { q } => {
                let h = essential_diameter(&self.graph, q, self.cfg.sample_sources, self.seed)?;
                out.essential_diameter.push(EssentialResult {
                    q,
                    h,
                    exact: self.graph.num_vertices() <= EXACT_PAIRS_LIMIT,
                });
            }
            Measurement::Girth => {
                out.girth = Some(girth_at_identity(&self.gens, GirthLimits::default())?);
            }
        }
        Ok(())
    }
}

/// Builds the generators and graph of one `(p, seed)` unit and evaluates
/// every requested measurement. Failures are stored in `errors`.
pub fn run_unit(
    cfg: &ExperimentConfig,
    digest: &str,
    prime_index: u64,
    p: u64,
    seed: u64,
) -> ExperimentRecord {
    let start = Instant::now();
    let mut rec = blank_record(cfg, digest, prime_index, p, seed);
    if let Err(e) = fill(cfg, &mut rec, false) {
        rec.errors.push(e.to_string());
    }
    rec.wall_time_s = start.elapsed().as_secs_f64();
    rec
}

/// As [`run_unit`], but the first failure (including a disconnected graph
/// for spectral and distance measurements) is returned as an error.
pub fn run_unit_strict(
    cfg: &ExperimentConfig,
    digest: &str,
    prime_index: u64,
    p: u64,
    seed: u64,
) -> Result<ExperimentRecord> {
    let start = Instant::now();
    let mut rec = blank_record(cfg, digest, prime_index, p, seed);
    fill(cfg, &mut rec, true)?;
    rec.wall_time_s = start.elapsed().as_secs_f64();
    Ok(rec)
}

fn blank_record(
    cfg: &ExperimentConfig,
    digest: &str,
    prime_index: u64,
    p: u64,
    seed: u64,
) -> ExperimentRecord {
    ExperimentRecord {
        schema: RECORD_SCHEMA_VERSION,
        config_digest: digest.to_string(),
        family: cfg.family,
        space: cfg.space,
        p,
        prime_index,
        seed,
        d: cfg.d,
        degree: cfg.degree(),
        vertices: 0,
        provenance: None,
        measurements: cfg.measurements.clone(),
        eigen: cfg.eigen.clone(),
        connected: None,
        results: MeasurementResults::default(),
        errors: Vec::new(),
        software_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: 0.0,
    }
}

fn fill(cfg: &ExperimentConfig, rec: &mut ExperimentRecord, strict: bool) -> Result<()> {
    let space = VertexSpace::new(cfg.space, rec.p)?;
    rec.vertices = space.vertex_count();
    let gens = generators(cfg, rec.p, rec.seed)?;
    rec.provenance = Some(gens.provenance());
    rec.degree = gens.len();
    let graph = GraphBuilder::default().build(&space, &gens)?;
    let connected = components(&graph).is_connected();
    rec.connected = Some(connected);
    let mut unit = Unit {
        cfg,
        p: rec.p,
        seed: rec.seed,
        k: gens.len(),
        gens,
        graph,
        cache: SpectralCache::default(),
    };
    for &m in &cfg.measurements {
        let needs_connected = m.is_spectral()
            || matches!(
                m,
                Measurement::Diameter
                    | Measurement::RadiusAt { .. }
                    | Measurement::EssentialDiameter { .. }
            );
        if needs_connected && !connected {
            if strict {
                return Err(Error::NotConnected(components(&unit.graph).count()));
            }
            continue;
        }
        let t = Instant::now();
        match unit.measure(m, &mut rec.results) {
            Err(e) if strict => return Err(e),
            Err(e) => rec.errors.push(format!("{}: {e}", m.name())),
            Ok(()) => {}
        }
        *rec.results
            .runtimes
            .entry(m.name().to_string())
            .or_insert(0.0) += t.elapsed().as_secs_f64();
    }
    Ok(())
}

fn units(cfg: &ExperimentConfig) -> Result<Vec<(u64, u64, u64)>> {
    let primes = cfg.primes.resolve()?;
    Ok(primes
        .iter()
        .flat_map(|&(i, p)| cfg.seeds.iter().map(move |&s| (i, p, s)))
        .collect())
}

/// All records of a config in sweep order, without touching the output file.
pub fn run_records(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let digest = cfg.digest();
    Ok(units(cfg)?
        .par_iter()
        .map(|&(i, p, s)| run_unit(cfg, &digest, i, p, s))
        .collect())
}

/// Runs the sweep, appending to `cfg.output`. Units whose
/// `(digest, p, seed)` already appear in the file are skipped, so an
/// interrupted run resumes where it stopped. Units run in parallel batches;
/// each batch is written in sweep order and flushed before the next starts.
pub fn run(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let digest = cfg.digest();
    let mut done: HashSet<(String, u64, u64)> = HashSet::new();
    if cfg.output.exists() {
        for r in read_records(BufReader::new(File::open(&cfg.output)?))? {
            done.insert(r.key());
        }
    }
    if let Some(dir) = cfg.output.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let all = units(cfg)?;
    let pending: Vec<_> = all
        .iter()
        .copied()
        .filter(|&(_, p, s)| !done.contains(&(digest.clone(), p, s)))
        .collect();
    let mut report = RunReport {
        skipped: all.len() - pending.len(),
        ..Default::default()
    };
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&cfg.output)?;
    let mut w = BufWriter::new(file);
    let batch = rayon::current_num_threads().max(1);
    for chunk in pending.chunks(batch) {
        let recs: Vec<ExperimentRecord> = chunk
            .par_iter()
            .map(|&(i, p, s)| run_unit(cfg, &digest, i, p, s))
            .collect();
        for r in &recs {
            writeln!(w, "{}", r.to_json_line()?)?;
            report.written += 1;
            report.with_errors += usize::from(!r.errors.is_empty());
        }
        w.flush()?;
    }
    drop(w);
    if let Some(path) = &cfg.figure_csv {
        let recs: Vec<ExperimentRecord> = read_records(BufReader::new(File::open(&cfg.output)?))?
            .into_iter()
            .filter(|r| r.config_digest == digest)
            .collect();
        write_figure_csv(&recs, BufWriter::new(File::create(path)?))?;
    }
    Ok(report)
}

/// Plot data with columns `prime_index,p,lambda2_minus_bound`, one row per
/// record carrying a top-eigenvalue result, ordered by prime then seed.
pub fn write_figure_csv<W: Write>(records: &[ExperimentRecord], mut w: W) -> Result<()> {
    let mut rows: Vec<&ExperimentRecord> = records
        .iter()
        .filter(|r| r.results.lambda2_minus_bound.is_some())
        .collect();
    rows.sort_by_key(|r| (r.prime_index, r.p, r.seed));
    writeln!(w, "prime_index,p,lambda2_minus_bound")?;
    for r in rows {
        let v = r.results.lambda2_minus_bound.expect("filtered");
        writeln!(w, "{},{},{v}", r.prime_index, r.p)?;
    }
    w.flush()?;
    Ok(())
}
