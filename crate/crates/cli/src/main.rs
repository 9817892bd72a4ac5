//! `sl2spec`: spectra and distances of Schreier graphs of SL2(Z/pZ).
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration
//! error, 3 eigensolver non-convergence. Errors go to stderr as one JSON
//! object.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use sl2_spectra::experiments::{
    read_records, run_unit_strict, summarize, ExperimentConfig, ExperimentRecord, Measurement,
    PrimeSpec, SummaryField,
};
use sl2_spectra::{EigenRequest, Error, Family, SpaceKind};

#[derive(Parser)]
#[command(
    name = "sl2spec",
    version,
    about = "Spectra and distances of Schreier graphs of SL2(Z/pZ)"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Fixed,
    Lps,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Projective,
    Affine,
    Group,
    Perm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Prime modulus (the domain size for `--space perm`).
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value = "fixed")]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "projective")]
    space: SpaceArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random families draw `d` elements plus their inverses.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    /// Relative eigensolver residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Full adjacency spectrum (sector union on the affine plane).
    Spectrum(GraphArgs),
    /// Extreme nontrivial eigenvalues and the gap to 2√(k−1).
    TopEig(GraphArgs),
    /// Exact diameter, optionally with the essential diameter.
    Diameter {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also report the smallest h with this fraction of pairs closer than h.
        #[arg(long)]
        essential: Option<f64>,
    },
    /// Eccentricity of one vertex.
    Radius {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        vertex: u64,
    },
    /// Shortest relators of the generator set.
    Girth(GraphArgs),
    /// Kolmogorov–Smirnov distances of unfolded spacings to GOE, GSE, Poisson.
    Spacings(GraphArgs),
    /// Discrepancy of the nontrivial spectrum against Kesten–McKay.
    Discrepancy {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also count eigenvalues beyond alpha times the Ramanujan bound.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Run a JSON experiment config, resuming an existing output file.
    Sweep { config: PathBuf },
    /// Mean, population variance and histogram of one field over records.
    Summarize {
        #[arg(long)]
        measurement: String,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "jsonl")]
        format: Format,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

enum CliError {
    Lib(Error),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

fn variant_name(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or("Error")
        .to_string()
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::NoConvergence(_) => 3,
                Error::Config(_)
                | Error::NotPrime(_)
                | Error::BadPrimeResidue(_)
                | Error::NotSymmetric
                | Error::IncompatibleSpace(_)
                | Error::OutOfRange(_)
                | Error::AlphaOutOfRange(_)
                | Error::InvalidVertex { .. }
                | Error::EmptyInput
                | Error::Json(_) => 2,
                _ => 1,
            },
        }
    }

    fn report(&self) {
        let (kind, message) = match self {
            CliError::Usage(m) => ("Usage".to_string(), m.clone()),
            CliError::Lib(e) => (variant_name(e), e.to_string()),
        };
        eprintln!(
            "{}",
            json!({ "error": kind, "message": message, "exit_code": self.code() })
        );
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn config_for(g: &GraphArgs, measurements: Vec<Measurement>) -> Result<ExperimentConfig, CliError> {
    let family = match g.family {
        FamilyArg::Fixed => Family::Fixed,
        FamilyArg::Lps => Family::Lps,
        FamilyArg::Random => Family::Random,
    };
    let space = match g.space {
        SpaceArg::Projective => SpaceKind::Projective,
        SpaceArg::Affine => SpaceKind::Affine,
        SpaceArg::Group => SpaceKind::Group,
        SpaceArg::Perm => SpaceKind::Perm,
    };
    let cfg = ExperimentConfig {
        family,
        space,
        primes: PrimeSpec::List(vec![g.p]),
        seeds: vec![g.seed],
        d: g.d,
        measurements,
        eigen: EigenRequest {
            tolerance: g.tol,
            ..EigenRequest::default()
        },
        sample_sources: 64,
        output: PathBuf::from("-"),
        figure_csv: None,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn measure(g: &GraphArgs, measurements: Vec<Measurement>) -> Result<ExperimentRecord, CliError> {
    let cfg = config_for(g, measurements)?;
    let (index, p) = cfg.primes.resolve()?[0];
    Ok(run_unit_strict(&cfg, &cfg.digest(), index, p, g.seed)?)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the whole record as one JSON line, or `header` plus `rows` as CSV.
fn emit(
    g: &GraphArgs,
    rec: &ExperimentRecord,
    header: &str,
    rows: Vec<String>,
) -> Result<(), CliError> {
    let mut w = output(&g.out)?;
    match g.format {
        Format::Jsonl => writeln!(w, "{}", rec.to_json_line()?)?,
        Format::Csv => {
            writeln!(w, "{header}")?;
            for r in rows {
                writeln!(w, "{r}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Spectrum(g) => {
            let rec = measure(&g, vec![Measurement::Spectrum])?;
            let ev = rec.results.spectrum.clone().unwrap_or_default();
            let rows = ev
                .iter()
                .enumerate()
                .map(|(i, x)| format!("{i},{x}"))
                .collect();
            emit(&g, &rec, "index,eigenvalue", rows)
        }
        Command::TopEig(g) => {
            let rec = measure(&g, vec![Measurement::TopEig])?;
            let r = &rec.results;
            let row = format!(
                "{},{},{},{},{}",
                rec.p,
                rec.degree,
                opt(r.lambda2),
                opt(r.lambda_min),
                opt(r.lambda2_minus_bound)
            );
            emit(
                &g,
                &rec,
                "p,k,lambda2,lambda_min,lambda2_minus_bound",
                vec![row],
            )
        }
        Command::Diameter { graph, essential } => {
            let mut ms = vec![Measurement::Diameter];
            if let Some(q) = essential {
                ms.push(Measurement::EssentialDiameter { q });
            }
            let rec = measure(&graph, ms)?;
            let ess = rec.results.essential_diameter.first().map(|e| e.h);
            let row = format!("{},{},{}", rec.p, opt(rec.results.diameter), opt(ess));
            emit(&graph, &rec, "p,diameter,essential_diameter", vec![row])
        }
        Command::Radius { graph, vertex } => {
            let rec = measure(&graph, vec![Measurement::RadiusAt { vertex }])?;
            let r = rec.results.radius.first().map(|x| x.radius);
            let row = format!("{},{vertex},{}", rec.p, opt(r));
            emit(&graph, &rec, "p,vertex,radius", vec![row])
        }
        Command::Girth(g) => {
            let rec = measure(&g, vec![Measurement::Girth])?;
            let gi = rec.results.girth;
            let row = format!(
                "{},{},{},{},{}",
                rec.p,
                opt(gi.and_then(|x| x.relator_length)),
                opt(gi.and_then(|x| x.simple_girth)),
                opt(gi.and_then(|x| x.minus_identity)),
                opt(gi.and_then(|x| x.plus_minus_identity)),
            );
            emit(
                &g,
                &rec,
                "p,relator_length,simple_girth,minus_identity,plus_minus_identity",
                vec![row],
            )
        }
        Command::Spacings(g) => {
            let rec = measure(&g, vec![Measurement::Spacings])?;
            let ks = rec.results.spacings_ks.clone();
            let row = match ks {
                Some(k) => format!("{},{},{},{},{}", rec.p, k.spacings, k.goe, k.gse, k.poisson),
                None => format!("{},,,,", rec.p),
            };
            emit(&g, &rec, "p,spacings,ks_goe,ks_gse,ks_poisson", vec![row])
        }
        Command::Discrepancy { graph, alpha } => {
            let mut ms = vec![Measurement::Discrepancy];
            if let Some(alpha) = alpha {
                ms.push(Measurement::Exceptional { alpha });
            }
            let rec = measure(&graph, ms)?;
            let exc = rec.results.exceptional.first().map(|e| e.count);
            let row = format!("{},{},{}", rec.p, opt(rec.results.discrepancy), opt(exc));
            emit(&graph, &rec, "p,discrepancy,exceptional_count", vec![row])
        }
        Command::Sweep { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = sl2_spectra::run(&cfg)?;
            println!(
                "{}",
                json!({ "written": report.written, "skipped": report.skipped,
                "with_errors": report.with_errors, "output": cfg.output })
            );
            Ok(())
        }
        Command::Summarize {
            measurement,
            bins,
            out,
            format,
            files,
        } => {
            let field: SummaryField = measurement.parse()?;
            let mut records = Vec::new();
            for f in &files {
                records.extend(read_records(BufReader::new(File::open(f)?))?);
            }
            let s = summarize(&records, field, bins)?;
            let mut w = output(&out)?;
            match format {
                Format::Jsonl => {
                    writeln!(w, "{}", serde_json::to_string(&s).map_err(Error::from)?)?
                }
                Format::Csv => {
                    writeln!(w, "bin_left,bin_right,count")?;
                    for (i, c) in s.bin_counts.iter().enumerate() {
                        writeln!(w, "{},{},{c}", s.bin_edges[i], s.bin_edges[i + 1])?;
                    }
                }
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let err = CliError::Usage(e.to_string().trim().to_string());
            err.report();
            return ExitCode::from(err.code());
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.code())
        }
    }
}
