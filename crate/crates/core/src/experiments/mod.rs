//! Config-driven experiment sweeps: one JSONL record per `(p, seed)` unit,
//! resumable, plus CSV plot data and summaries.

pub mod config;
pub mod record;
pub mod runner;
pub mod summary;

pub use config::{ExperimentConfig, Measurement, PrimeGrid, PrimeSpec};
pub use record::{
    read_records, ExceptionalResult, ExperimentRecord, KsTriple, MeasurementResults,
    RECORD_SCHEMA_VERSION,
};
pub use runner::{run, run_records, run_unit, run_unit_strict, write_figure_csv, RunReport};
pub use summary::{summarize, summarize_values, Summary, SummaryField};
