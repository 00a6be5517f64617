//! CLI entry point. Subcommands: `run` a sweep, `audit` a report for
//! reproducibility, `emit` a stored report in another format.
//!
//! Exit code 0 means the sweep completed (regardless of per-trial outcomes);
//! nonzero signals a configuration or infrastructure error.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use znlab_core::random_model::Strategy;
use znlab_harness::config::{ExperimentConfig, ExperimentKind, OutputFormat, SeedSpec};
use znlab_harness::report::{self, EmitFormat};
use znlab_harness::{run_trials, ExperimentReport};

#[derive(Parser)]
#[command(
    name = "znlab",
    version,
    about = "Deterministic Monte-Carlo experiments on additive structures in random sparse subsets of Z_N"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Run an experiment sweep and emit its report.
    Run(RunArgs),
    /// Re-run a stored report's config and verify the rows reproduce.
    Audit {
        /// Path to a JSON report produced by `run`.
        #[arg(long)]
        report: PathBuf,
    },
    /// Convert a stored JSON report to another format.
    Emit {
        /// Path to a JSON report produced by `run`.
        #[arg(long)]
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON config file; when given it overrides the parameter flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<ExperimentKind>,
    /// Prime modulus N.
    #[arg(long)]
    n: Option<usize>,
    /// Per-element inclusion probability of W.
    #[arg(long)]
    p: Option<f64>,
    /// Relative density target |A|/|W|.
    #[arg(long)]
    alpha: Option<f64>,
    /// Power exponent (power-diff) or target progression length (sumset-ap).
    #[arg(long)]
    k: Option<u32>,
    /// Sumset density target (sumset-size).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    epsilon0: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Regularity constant.
    #[arg(long)]
    c0: Option<f64>,
    /// Number of seeds 0..count.
    #[arg(long)]
    seeds: Option<u64>,
    /// Explicit comma-separated seed list; overrides --seeds.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    /// uniform-random | progression-intersect | square-difference-free-greedy
    #[arg(long)]
    strategy: Option<Strategy>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

fn config_from_args(args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    if let Some(path) = &args.config {
        let bytes =
            std::fs::read(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut config: ExperimentConfig =
            serde_json::from_slice(&bytes).context("parsing config JSON")?;
        if args.experiment.is_some() || args.n.is_some() || args.p.is_some() {
            log::info!("--config given; parameter flags are ignored in favour of the file");
        }
        // output flags still apply when the file leaves them unset
        if config.output.is_none() {
            config.output = args.out.as_ref().map(|p| p.display().to_string());
        }
        if let Some(format) = args.format {
            config.format = format;
        }
        return Ok(config);
    }
    let (Some(experiment), Some(n), Some(p), Some(alpha)) =
        (args.experiment, args.n, args.p, args.alpha)
    else {
        bail!("--experiment, --n, --p, --alpha are required without --config");
    };
    let seeds = match (&args.seed_list, args.seeds) {
        (Some(list), _) => SeedSpec::List(list.clone()),
        (None, Some(count)) => SeedSpec::Count(count),
        (None, None) => SeedSpec::Count(10),
    };
    Ok(ExperimentConfig {
        experiment,
        n,
        p,
        alpha,
        theta: None,
        k: args.k,
        beta: args.beta,
        sigma: args.sigma,
        epsilon0: args.epsilon0,
        q: args.q,
        c0: args.c0.unwrap_or(znlab_core::tol::C0_DEFAULT),
        m_budget: znlab_core::tol::M_DEFAULT,
        seeds,
        strategy: args.strategy.unwrap_or(Strategy::UniformRandom),
        output: args.out.as_ref().map(|p| p.display().to_string()),
        format: args.format.unwrap_or(OutputFormat::Json),
    })
}

fn emit_format(format: OutputFormat) -> EmitFormat {
    match format {
        OutputFormat::Json => EmitFormat::Json,
        OutputFormat::Csv => EmitFormat::Csv,
    }
}

fn write_out(bytes: &[u8], out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .context("writing to stdout"),
    }
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<()> {
    let config = config_from_args(args)?;
    let report = run_trials(&config)?;
    for eval in &report.resolved.constraints {
        eprintln!(
            "[constraint] {}: lhs={:.4} rhs={:.4} -> {} ({})",
            eval.name,
            eval.lhs,
            eval.rhs,
            if eval.satisfied { "PASS" } else { "FAIL" },
            eval.note
        );
    }
    eprintln!(
        "[sweep] {} n={} p={} alpha={} strategy={}: {}/{} trials succeeded (fraction {})",
        config.experiment.name(),
        config.n,
        config.p,
        config.alpha,
        config.strategy.name(),
        report.aggregate.successes,
        report.aggregate.trials,
        report.aggregate.success_fraction
    );
    let bytes = report::render(&report, emit_format(config.format))?;
    let out = config.output.as_ref().map(PathBuf::from);
    write_out(&bytes, out.as_ref())
}

fn cmd_audit(path: &PathBuf) -> anyhow::Result<()> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading report {}", path.display()))?;
    let stored: ExperimentReport = report::parse_report_json(&bytes)?;
    let fresh = run_trials(&stored.config)?;
    if fresh.rows.len() != stored.rows.len() {
        bail!(
            "audit failed: row count {} vs {}",
            fresh.rows.len(),
            stored.rows.len()
        );
    }
    let mut mismatches = 0usize;
    for (old, new) in stored.rows.iter().zip(&fresh.rows) {
        let old_json = serde_json::to_string(old)?;
        let new_json = serde_json::to_string(new)?;
        if old_json != new_json {
            mismatches += 1;
            eprintln!("[audit] seed {} does not reproduce", old.seed);
        }
    }
    if stored.aggregate.successes != fresh.aggregate.successes {
        bail!(
            "audit failed: aggregate {} vs {}",
            fresh.aggregate.successes,
            stored.aggregate.successes
        );
    }
    if mismatches > 0 {
        bail!("audit failed: {mismatches} rows do not reproduce");
    }
    eprintln!(
        "[audit] OK: {} rows reproduce bit-for-bit",
        stored.rows.len()
    );
    Ok(())
}

fn cmd_emit(path: &PathBuf, format: OutputFormat, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let bytes =
        std::fs::read(path).with_context(|| format!("reading report {}", path.display()))?;
    let stored: ExperimentReport = report::parse_report_json(&bytes)?;
    let rendered = report::render(&stored, emit_format(format))?;
    write_out(&rendered, out)
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Audit { report } => cmd_audit(report),
        Command::Emit {
            report,
            format,
            out,
        } => cmd_emit(report, *format, out.as_ref()),
    }
}
