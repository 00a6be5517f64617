//! Deterministic experiment harness: config-driven Monte-Carlo sweeps over
//! random sparse subsets of Z_N, with machine-readable JSON/CSV reports.
//!
//! Given the same (config, seeds), a sweep reproduces bit-for-bit: sampling
//! is counter-based, trials are order-independent, and CSV bodies carry no
//! timestamps.

pub mod config;
pub mod experiments;
pub mod report;

pub use config::{ConstraintEval, ExperimentConfig, ExperimentKind, OutputFormat, SeedSpec};
pub use experiments::{run_trials, TrialDetail, TrialRow};
pub use report::{
    csv_bytes, csv_success_fraction, emit_report, json_bytes, parse_report_json, Aggregate,
    EmitFormat, ExperimentReport, Metadata,
};
