//! The per-seed experiment pipelines and the sweep runner.
//!
//! Every trial is a pure function of (config, seed): sample W, build A by
//! the configured strategy, certify pseudorandomness, decompose where the
//! pipeline calls for it, detect the arithmetic structure, and record the
//! full certificate chain. Internal anomalies are recorded on the row and
//! never abort the sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use znlab_core::decomposition::{self, DecompositionCertificate, DecompositionResult};
use znlab_core::fourier::{self, DensityFunction, ZnFunction};
use znlab_core::increment::{self, IterationTrace};
use znlab_core::random_model::{self, PseudorandomCertificate, Strategy};
use znlab_core::structures::{self, ApWitness};
use znlab_core::tol;

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind, ResolvedParams};
use crate::report::{Aggregate, ExperimentReport, Metadata};

/// Experiment-specific measurements for one seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrialDetail {
    PowerDifference {
        k: u32,
        /// Ordered pairs (x, x+r^k) in A, differences mod N.
        count_modn: u64,
        /// Pairs inside a common third of [0, N), hence genuine integer
        /// differences.
        genuine_count: u64,
        genuine: bool,
        /// Varnavides average of the structured part.
        main_term: f64,
        decomposition_ok: bool,
        f1_sup: f64,
        error_exact: f64,
        error_bound: f64,
        chain_ok: bool,
    },
    SumsetSize {
        sumset_size: usize,
        target: f64,
        f1_sup: f64,
        f1_sup_budget: f64,
        bounded_regime_ok: bool,
        /// |{x : (f∗f)(x) > 0}| and its analytic target (α−10σ)N.
        support_positive: usize,
        support_target: f64,
        decomposition_ok: bool,
        prog_len: Option<usize>,
        extremal_bound: Option<usize>,
        extremal_ok: Option<bool>,
    },
    SumsetAp {
        sumset_ap: ApWitness,
        good_set_size: usize,
        good_ap: Option<ApWitness>,
        good_ap_in_sumset: bool,
        /// (α²/10)|B| threshold applied to f∗f on B′.
        good_threshold: f64,
        /// Abundance threshold from the iteration, on the normalized f₁/2
        /// scale.
        found_threshold_normalized: f64,
        steps: usize,
        step_bound: usize,
        nonterminal: bool,
        final_alpha: f64,
        decomposition_ok: bool,
    },
    DecompositionAudit {
        lambda0_size: usize,
        b0_size: usize,
        certificate: DecompositionCertificate,
    },
    IncrementTrace {
        trace: Box<IterationTrace>,
        found_recount_ok: bool,
        within_bound: bool,
        final_alpha: f64,
        decomposition_ok: bool,
    },
    Anomaly,
}

/// One per-seed row: reproducible from (config, seed) alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRow {
    pub seed: u64,
    pub w_size: usize,
    pub a_size: usize,
    pub alpha_achieved: f64,
    pub shortfall: bool,
    pub certificate: Option<PseudorandomCertificate>,
    pub l2_budget: f64,
    pub l2_ok: bool,
    pub success: bool,
    pub detail: TrialDetail,
    pub anomaly: Option<String>,
}

impl TrialRow {
    fn anomaly(seed: u64, l2_budget: f64, message: String) -> TrialRow {
        TrialRow {
            seed,
            w_size: 0,
            a_size: 0,
            alpha_achieved: 0.0,
            shortfall: false,
            certificate: None,
            l2_budget,
            l2_ok: false,
            success: false,
            detail: TrialDetail::Anomaly,
            anomaly: Some(message),
        }
    }
}

/// Run the configured sweep. Trials are independent and run concurrently;
/// rows come back in seed order.
pub fn run_trials(config: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    let resolved = config.resolve()?;
    let seeds = config.seeds.seeds();
    let rows: Vec<TrialRow> = seeds
        .par_iter()
        .map(|&seed| run_one(config, &resolved, seed))
        .collect();
    let successes = rows.iter().filter(|r| r.success).count();
    let aggregate = Aggregate {
        trials: rows.len(),
        successes,
        success_fraction: if rows.is_empty() {
            0.0
        } else {
            successes as f64 / rows.len() as f64
        },
    };
    Ok(ExperimentReport {
        config: config.clone(),
        resolved,
        rows,
        aggregate,
        metadata: Metadata::current(),
    })
}

fn run_one(config: &ExperimentConfig, resolved: &ResolvedParams, seed: u64) -> TrialRow {
    match run_one_inner(config, resolved, seed) {
        Ok(row) => row,
        Err(message) => {
            log::warn!("seed {seed}: anomaly: {message}");
            TrialRow::anomaly(seed, resolved.l2_budget, message)
        }
    }
}

fn run_one_inner(
    config: &ExperimentConfig,
    resolved: &ResolvedParams,
    seed: u64,
) -> Result<TrialRow, String> {
    let n = config.n;
    let sample = random_model::sample_w(n, config.p, seed).map_err(|e| e.to_string())?;
    let sample = random_model::adversarial_subset(&sample, config.alpha, config.strategy)
        .map_err(|e| e.to_string())?;
    let a = sample.subset().map_err(|e| e.to_string())?.to_vec();
    let (nu, f) = random_model::build_measures(&sample);
    let f = f.expect("subset was just built");
    let certificate = random_model::certify_pseudorandom(
        &nu,
        &f,
        resolved.q,
        resolved.m_budget,
        resolved.eta_budget,
    );
    let l2_ok = certificate.l2_norm_sq <= resolved.l2_budget;

    let (success, detail) = match config.experiment {
        ExperimentKind::Sarkozy | ExperimentKind::PowerDiff => {
            power_difference_trial(config, resolved, &a, &nu, &f, &certificate)?
        }
        ExperimentKind::SumsetSize => {
            sumset_size_trial(config, resolved, &a, &nu, &f, &certificate)?
        }
        ExperimentKind::SumsetAp => sumset_ap_trial(config, resolved, &a, &nu, &f, &certificate)?,
        ExperimentKind::DecompositionAudit => {
            let dec = decompose_with(&f, &nu, resolved, &certificate)?;
            let detail = TrialDetail::DecompositionAudit {
                lambda0_size: dec.lambda0.len(),
                b0_size: dec.b0.len(),
                certificate: dec.bounds.clone(),
            };
            (dec.bounds.all_ok(), detail)
        }
        ExperimentKind::IncrementTrace => {
            increment_trace_trial(config, resolved, &nu, &f, &certificate)?
        }
    };

    Ok(TrialRow {
        seed,
        w_size: sample.w_size(),
        a_size: sample.a_size(),
        alpha_achieved: sample.alpha.unwrap_or(0.0),
        shortfall: sample.shortfall,
        certificate: Some(certificate),
        l2_budget: resolved.l2_budget,
        l2_ok,
        success,
        detail,
        anomaly: None,
    })
}

fn decompose_with(
    f: &DensityFunction,
    nu: &DensityFunction,
    resolved: &ResolvedParams,
    certificate: &PseudorandomCertificate,
) -> Result<DecompositionResult, String> {
    decomposition::decompose(f, nu, resolved.epsilon0, certificate.eta).map_err(|e| e.to_string())
}

/// Indices of the thirds [0, N/3), [N/3, 2N/3), [2N/3, N).
fn trisect(n: usize, set: &[usize]) -> [Vec<usize>; 3] {
    let mut thirds: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for &x in set {
        let idx = if 3 * x < n {
            0
        } else if 3 * x < 2 * n {
            1
        } else {
            2
        };
        thirds[idx].push(x);
    }
    thirds
}

fn power_difference_trial(
    config: &ExperimentConfig,
    resolved: &ResolvedParams,
    a: &[usize],
    nu: &DensityFunction,
    f: &DensityFunction,
    certificate: &PseudorandomCertificate,
) -> Result<(bool, TrialDetail), String> {
    let n = config.n;
    let k = resolved.k;
    let count_modn = structures::power_difference_count(n, a, k).map_err(|e| e.to_string())?;
    // pairs inside a common third differ by r^k < N/3 without wrapping, so
    // they witness genuine integer power differences
    let genuine_count = trisect(n, a)
        .iter()
        .map(|third| structures::power_difference_count(n, third, k).map_err(|e| e.to_string()))
        .sum::<Result<u64, String>>()?;
    let dec = decompose_with(f, nu, resolved, certificate)?;
    let main_term = structures::varnavides_average(&dec.f1, k);
    let indicator = structures::power_indicator(n, k).map_err(|e| e.to_string())?;
    let term = structures::spectral_error_term(&dec.f2, &indicator).map_err(|e| e.to_string())?;
    let genuine = genuine_count > 0;
    Ok((
        genuine,
        TrialDetail::PowerDifference {
            k,
            count_modn,
            genuine_count,
            genuine,
            main_term,
            decomposition_ok: dec.bounds.all_ok(),
            f1_sup: dec.bounds.f1_sup,
            error_exact: term.exact_sum,
            error_bound: term.holder_bound,
            chain_ok: term.chain_ok,
        },
    ))
}

fn sumset_size_trial(
    config: &ExperimentConfig,
    resolved: &ResolvedParams,
    a: &[usize],
    nu: &DensityFunction,
    f: &DensityFunction,
    certificate: &PseudorandomCertificate,
) -> Result<(bool, TrialDetail), String> {
    let n = config.n;
    let beta = config.beta.expect("validated");
    let sum = structures::sumset(n, a, a).map_err(|e| e.to_string())?;
    let target = beta * n as f64;
    let dec = decompose_with(f, nu, resolved, certificate)?;
    let f1_sup = dec.bounds.f1_sup;
    let f1_sup_budget = 1.0 + resolved.sigma;
    let bounded_regime_ok = f1_sup <= f1_sup_budget + tol::DOMINANCE_SLACK;
    let conv = fourier::convolve(f, f).map_err(|e| e.to_string())?;
    let support_positive = conv.values().iter().filter(|v| **v > 0.0).count();
    let alpha_meas = f.mean();
    let support_target = (alpha_meas - 10.0 * resolved.sigma) * n as f64;
    let (prog_len, extremal_bound, extremal_ok) =
        if config.strategy == Strategy::ProgressionIntersect {
            let len = random_model::strategy_progression(n, config.alpha).len();
            let bound = 2 * len + 1;
            (Some(len), Some(bound), Some(sum.len() <= bound))
        } else {
            (None, None, None)
        };
    let success = sum.len() as f64 >= target;
    Ok((
        success,
        TrialDetail::SumsetSize {
            sumset_size: sum.len(),
            target,
            f1_sup,
            f1_sup_budget,
            bounded_regime_ok,
            support_positive,
            support_target,
            decomposition_ok: dec.bounds.all_ok(),
            prog_len,
            extremal_bound,
            extremal_ok,
        },
    ))
}

/// Normalized structured part f₁/2, valid since ‖f₁‖_∞ ≤ 2 in the operating
/// regime; the iteration requires values in [0, 1].
fn normalized_structured_part(dec: &DecompositionResult) -> Result<DensityFunction, String> {
    let halved: Vec<f64> = dec.f1.values().iter().map(|v| v / 2.0).collect();
    DensityFunction::new(dec.f1.modulus(), halved).map_err(|e| e.to_string())
}

fn sumset_ap_trial(
    config: &ExperimentConfig,
    resolved: &ResolvedParams,
    a: &[usize],
    nu: &DensityFunction,
    f: &DensityFunction,
    certificate: &PseudorandomCertificate,
) -> Result<(bool, TrialDetail), String> {
    let n = config.n;
    let dec = decompose_with(f, nu, resolved, certificate)?;
    let f_iter = normalized_structured_part(&dec)?;
    let trace =
        increment::iterate_increment(&f_iter, resolved.sigma, config.c0, resolved.max_steps)
            .map_err(|e| e.to_string())?;
    let sum = structures::sumset(n, a, a).map_err(|e| e.to_string())?;
    let sumset_ap = structures::longest_ap(n, &sum).map_err(|e| e.to_string())?;
    let alpha_meas = f.mean();
    let conv = fourier::convolve(f, f).map_err(|e| e.to_string())?;
    let (good_set_size, good_ap, good_ap_in_sumset, good_threshold, found_threshold) =
        if let Some(found) = &trace.terminal {
            let threshold = alpha_meas * alpha_meas / 10.0 * found.b.len() as f64;
            let good: Vec<usize> = found
                .bprime
                .elements()
                .iter()
                .copied()
                .filter(|&x| conv.values()[x] >= threshold)
                .collect();
            let good_ap = if good.is_empty() {
                None
            } else {
                Some(structures::longest_ap(n, &good).map_err(|e| e.to_string())?)
            };
            let in_sumset = good_ap
                .as_ref()
                .map(|w| w.contained_in(n, &sum))
                .unwrap_or(false);
            (good.len(), good_ap, in_sumset, threshold, found.threshold)
        } else {
            (0, None, false, 0.0, 0.0)
        };
    let steps = trace.steps.len();
    let final_alpha = trace.steps.last().map(|s| s.alpha).unwrap_or(0.0);
    let k_target = resolved.k as usize;
    let success = sumset_ap.length >= k_target && good_ap_in_sumset;
    Ok((
        success,
        TrialDetail::SumsetAp {
            sumset_ap,
            good_set_size,
            good_ap,
            good_ap_in_sumset,
            good_threshold,
            found_threshold_normalized: found_threshold,
            steps,
            step_bound: trace.step_bound,
            nonterminal: trace.nonterminal,
            final_alpha,
            decomposition_ok: dec.bounds.all_ok(),
        },
    ))
}

fn increment_trace_trial(
    config: &ExperimentConfig,
    resolved: &ResolvedParams,
    nu: &DensityFunction,
    f: &DensityFunction,
    certificate: &PseudorandomCertificate,
) -> Result<(bool, TrialDetail), String> {
    let dec = decompose_with(f, nu, resolved, certificate)?;
    let f_iter = normalized_structured_part(&dec)?;
    let trace =
        increment::iterate_increment(&f_iter, resolved.sigma, config.c0, resolved.max_steps)
            .map_err(|e| e.to_string())?;
    let within_bound = !trace.nonterminal && trace.steps.len() <= trace.step_bound;
    let found_recount_ok = if let Some(found) = &trace.terminal {
        let f_k = f_iter.restrict_to(found.b.elements());
        let conv = fourier::convolve(&f_k, &f_k).map_err(|e| e.to_string())?;
        let recount = found
            .bprime
            .elements()
            .iter()
            .filter(|&&x| conv.values()[x] >= found.threshold)
            .count();
        recount == found.good_count
            && found.good_fraction >= 1.0 - resolved.sigma - tol::DOMINANCE_SLACK
    } else {
        false
    };
    let final_alpha = trace.steps.last().map(|s| s.alpha).unwrap_or(0.0);
    let success = within_bound && found_recount_ok;
    Ok((
        success,
        TrialDetail::IncrementTrace {
            trace: Box::new(trace),
            found_recount_ok,
            within_bound,
            final_alpha,
            decomposition_ok: dec.bounds.all_ok(),
        },
    ))
}
