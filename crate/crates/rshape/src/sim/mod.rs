//! Benchmark supports with known geometry, uniform samplers, and the
//! Monte Carlo study harness that scores both smoothing selectors.

mod models;
mod sample;
mod study;

pub use models::{make_model, model_names, SupportModel};
pub use sample::sample_uniform;
pub use study::{
    assemble_study, convergence_probe, records_csv, replicate_seed, run_cell, run_replicate,
    run_study, summary_tables,
    CellSummary, ConvergenceReport, ReplicateRecord, RsOutcome, StudyConfig, StudyResult,
    DEFAULT_GRID_RESOLUTION,
};
