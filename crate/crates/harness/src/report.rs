//! Machine-readable reports: the JSON document, the flattened CSV rows with
//! their fixed column contract, and the round-trip parsers used by `audit`.
//!
//! CSV bodies contain no timestamps or environment data, so identical
//! (config, seeds) runs are byte-identical.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ResolvedParams};
use crate::experiments::{TrialDetail, TrialRow};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv body has no rows or malformed success column")]
    MalformedCsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: usize,
    pub successes: usize,
    pub success_fraction: f64,
}

/// Run provenance: versions, the frozen generator spec, and known-reading
/// notes. No timestamps: reports are pure functions of (config, seeds).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub schema_version: u32,
    pub crate_version: String,
    pub rng: String,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn current() -> Metadata {
        Metadata {
            schema_version: 1,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "counter-based splitmix64 finalizer chain keyed by (seed, stream, element); \
                  streams: 0 = membership, 1 = uniform subset shuffle, 2 = greedy scan order; \
                  inclusion threshold ceil(p*2^64)"
                .to_string(),
            notes: vec![
                "success is asserted in the high-probability (1 - o(1)) reading of each \
                 structural statement"
                    .to_string(),
                "epsilon0 is a desk-scale knob; both analytic regimes for it are evaluated \
                 and reported with every run"
                    .to_string(),
                "regular Bohr-set radii come from a deterministic 256-point grid scan, a \
                 pragmatic substitute for the existential radius argument"
                    .to_string(),
            ],
        }
    }
}

/// Full experiment report: config echo, resolved parameters, per-seed rows,
/// and the aggregate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub resolved: ResolvedParams,
    pub rows: Vec<TrialRow>,
    pub aggregate: Aggregate,
    pub metadata: Metadata,
}

/// Fixed CSV column order; empty fields mean not-applicable for the
/// experiment.
pub const CSV_COLUMNS: [&str; 34] = [
    "experiment",
    "seed",
    "n",
    "p",
    "alpha",
    "strategy",
    "w_size",
    "a_size",
    "alpha_achieved",
    "shortfall",
    "eta",
    "eta_budget",
    "eta_ok",
    "l2_norm_sq",
    "l2_budget",
    "l2_ok",
    "restriction_norm",
    "restriction_budget",
    "restriction_ok",
    "decomposition_ok",
    "count_modn",
    "genuine_count",
    "main_term",
    "error_exact",
    "error_bound",
    "sumset_size",
    "ap_length",
    "good_set_size",
    "good_ap_length",
    "good_ap_in_sumset",
    "steps",
    "final_alpha",
    "anomaly",
    "success",
];

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn csv_record(report: &ExperimentReport, row: &TrialRow) -> Vec<String> {
    let c = &report.config;
    let mut fields = vec![
        c.experiment.name().to_string(),
        row.seed.to_string(),
        c.n.to_string(),
        fmt_f64(c.p),
        fmt_f64(c.alpha),
        c.strategy.name().to_string(),
        row.w_size.to_string(),
        row.a_size.to_string(),
        fmt_f64(row.alpha_achieved),
        row.shortfall.to_string(),
    ];
    match &row.certificate {
        Some(cert) => fields.extend([
            fmt_f64(cert.eta),
            fmt_f64(cert.eta_budget),
            cert.eta_ok.to_string(),
            fmt_f64(cert.l2_norm_sq),
            fmt_f64(row.l2_budget),
            row.l2_ok.to_string(),
            fmt_f64(cert.restriction_norm),
            fmt_f64(cert.restriction_budget),
            cert.restriction_ok.to_string(),
        ]),
        None => fields.extend(std::iter::repeat_n(String::new(), 9)),
    }
    // detail columns 0..13: decomposition_ok, count_modn, genuine_count,
    // main_term, error_exact, error_bound, sumset_size, ap_length,
    // good_set_size, good_ap_length, good_ap_in_sumset, steps, final_alpha
    let mut detail = vec![String::new(); 13];
    match &row.detail {
        TrialDetail::PowerDifference {
            count_modn,
            genuine_count,
            main_term,
            decomposition_ok,
            error_exact,
            error_bound,
            ..
        } => {
            detail[0] = decomposition_ok.to_string();
            detail[1] = count_modn.to_string();
            detail[2] = genuine_count.to_string();
            detail[3] = fmt_f64(*main_term);
            detail[4] = fmt_f64(*error_exact);
            detail[5] = fmt_f64(*error_bound);
        }
        TrialDetail::SumsetSize {
            sumset_size,
            decomposition_ok,
            ..
        } => {
            detail[0] = decomposition_ok.to_string();
            detail[6] = sumset_size.to_string();
        }
        TrialDetail::SumsetAp {
            sumset_ap,
            good_set_size,
            good_ap,
            good_ap_in_sumset,
            steps,
            final_alpha,
            decomposition_ok,
            ..
        } => {
            detail[0] = decomposition_ok.to_string();
            detail[7] = sumset_ap.length.to_string();
            detail[8] = good_set_size.to_string();
            detail[9] = good_ap.map(|w| w.length.to_string()).unwrap_or_default();
            detail[10] = good_ap_in_sumset.to_string();
            detail[11] = steps.to_string();
            detail[12] = fmt_f64(*final_alpha);
        }
        TrialDetail::DecompositionAudit { certificate, .. } => {
            detail[0] = certificate.all_ok().to_string();
        }
        TrialDetail::IncrementTrace {
            trace,
            final_alpha,
            decomposition_ok,
            ..
        } => {
            detail[0] = decomposition_ok.to_string();
            detail[11] = trace.steps.len().to_string();
            detail[12] = fmt_f64(*final_alpha);
        }
        TrialDetail::Anomaly => {}
    }
    fields.extend(detail);
    fields.push(row.anomaly.clone().unwrap_or_default());
    fields.push(row.success.to_string());
    fields
}

/// The CSV body (header + one record per seed) as bytes.
pub fn csv_bytes(report: &ExperimentReport) -> Result<Vec<u8>, ReportError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS)?;
    for row in &report.rows {
        writer.write_record(csv_record(report, row))?;
    }
    Ok(writer.into_inner().expect("vec writer never fails"))
}

/// Pretty JSON document with a trailing newline.
pub fn json_bytes(report: &ExperimentReport) -> Result<Vec<u8>, ReportError> {
    let mut out = serde_json::to_vec_pretty(report)?;
    out.push(b'\n');
    Ok(out)
}

pub fn parse_report_json(bytes: &[u8]) -> Result<ExperimentReport, ReportError> {
    Ok(serde_json::from_slice(bytes)?)
}

/// Recompute the aggregate success fraction from a CSV body.
pub fn csv_success_fraction(bytes: &[u8]) -> Result<f64, ReportError> {
    let mut reader = csv::Reader::from_reader(bytes);
    let success_idx = CSV_COLUMNS.len() - 1;
    let mut trials = 0usize;
    let mut successes = 0usize;
    for record in reader.records() {
        let record = record?;
        let field = record.get(success_idx).ok_or(ReportError::MalformedCsv)?;
        match field {
            "true" => successes += 1,
            "false" => {}
            _ => return Err(ReportError::MalformedCsv),
        }
        trials += 1;
    }
    if trials == 0 {
        return Ok(0.0);
    }
    Ok(successes as f64 / trials as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Csv,
}

/// Serialize the report in the requested format.
pub fn render(report: &ExperimentReport, format: EmitFormat) -> Result<Vec<u8>, ReportError> {
    match format {
        EmitFormat::Json => json_bytes(report),
        EmitFormat::Csv => csv_bytes(report),
    }
}

/// Write the rendered report to a file.
pub fn emit_report(
    report: &ExperimentReport,
    format: EmitFormat,
    path: &Path,
) -> Result<(), ReportError> {
    let bytes = render(report, format)?;
    let mut file = std::fs::File::create(path).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(&bytes).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}
