//! The density-increment machinery: balanced functions, witness sets, the
//! one-step dichotomy, and the iteration that produces a Bohr set pair on
//! which f∗f is large almost everywhere.
//!
//! Each step either certifies abundance (at least a (1−σ)-fraction of the
//! sub-Bohr set B′ has (f∗f)(x) ≥ (α²/2)|B|) or exhibits a narrower Bohr
//! set on which f has mean at least α(1+2⁻⁵). A step that can do neither
//! returns an explicit diagnostic; there is no silent third state.
//!
//! Center bookkeeping: for f supported on B = b + B(Γ,δ), the convolution
//! f∗f is supported near 2b, so the abundance test runs on
//! B′ = 2b + B(Γ,δ′). (Normalizing b = 0 recovers the usual statement; the
//! translated form keeps f∗f and B′ geometrically aligned for every b.)

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::bohr::{self, BohrError, BohrSet};
use crate::fourier::{self, BalancedFunction, DensityFunction, ZnFunction};
use crate::tol;

#[derive(Debug, thiserror::Error)]
pub enum IncrementError {
    #[error("f is not supported on B: f({index}) = {value} outside the set")]
    SupportViolation { index: usize, value: f64 },
    #[error("f must take values in [0, 1]; sup = {0}")]
    NotNormalized(f64),
    #[error("mean of f on B is {0}; need a positive density")]
    ZeroDensity(f64),
    #[error("sigma = {0} outside (0, 1]")]
    InvalidSigma(f64),
    #[error("no regular radius at the {stage} scale: {source}")]
    NoRegularRadius {
        stage: &'static str,
        #[source]
        source: BohrError,
    },
    #[error(
        "dichotomy failure at alpha = {alpha}: abundance holds on only \
         {good_fraction} of B' and the best translate mean {new_mean} is below \
         the required {required}"
    )]
    DichotomyFailure {
        alpha: f64,
        good_fraction: f64,
        new_mean: f64,
        required: f64,
    },
    #[error("witness set requested but abundance holds: only {candidates} sub-threshold points, need {needed}")]
    WitnessUnderflow { candidates: usize, needed: usize },
    #[error(transparent)]
    Bohr(#[from] BohrError),
}

/// E(f | B) = |B|⁻¹ Σ_{x∈B} f(x).
pub fn mean_on(f: &impl ZnFunction, b: &BohrSet) -> f64 {
    let vals = f.values();
    b.elements().iter().map(|&x| vals[x]).sum::<f64>() / b.len() as f64
}

/// g = f − α·1_B with α = E(f|B); Σ g = 0.
pub fn balanced_function(
    f: &DensityFunction,
    b: &BohrSet,
) -> Result<BalancedFunction, IncrementError> {
    check_support(f, b)?;
    let alpha = mean_on(f, b);
    let mut values = f.values().to_vec();
    for &x in b.elements() {
        values[x] -= alpha;
    }
    Ok(BalancedFunction::new(f.modulus(), values).expect("finite values"))
}

fn check_support(f: &DensityFunction, b: &BohrSet) -> Result<(), IncrementError> {
    for (index, &value) in f.values().iter().enumerate() {
        if value > 0.0 && !b.contains(index) {
            return Err(IncrementError::SupportViolation { index, value });
        }
    }
    Ok(())
}

/// The abundance certificate: (B, B′) with (f∗f)(x) ≥ threshold on a
/// (1−σ)-fraction of B′.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FoundOutcome {
    pub b: BohrSet,
    pub bprime: BohrSet,
    pub threshold: f64,
    pub good_count: usize,
    pub good_fraction: f64,
}

/// Per-step record of the large-spectrum energy, logged on increment paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyCheck {
    /// (N/|B|)·Σ_{ξ∈L} |ĝ(ξ)|².
    pub energy: f64,
    /// α²/4, the main term.
    pub main_term: f64,
    /// d·δ′/δ, the scale of the error term.
    pub d_delta_ratio: f64,
    /// Monitored budget ENERGY_BUDGET_FACTOR · d·δ′/δ.
    pub budget: f64,
    /// energy ≥ main_term − budget (monitored, not fatal).
    pub ok: bool,
    pub witness_size: usize,
    pub l_size: usize,
    /// Chebyshev cap (4N/(ασ|B′|))²·|S|/N on |L|; the count never exceeds it.
    pub l_chebyshev_cap: f64,
}

/// The density-increment certificate: a narrower Bohr set with mean ≥
/// α(1+2⁻⁵).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IncrementData {
    pub bdoubleprime: BohrSet,
    pub new_mean: f64,
    /// Frequencies added to Γ by the greedy selection.
    pub added: BTreeSet<usize>,
    /// True when the greedy cap ⌈16·α⁻²·ln σ⁻¹⌉ bound the selection.
    pub capped: bool,
    pub energy: EnergyCheck,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum IncrementOutcome {
    Found(FoundOutcome),
    Increment(IncrementData),
}

/// The ⌈σ|B′|⌉ elements of B′ with the smallest (f∗f) values among those
/// below (α²/2)|B|, ordered by (value, element).
pub fn witness_set(
    f: &DensityFunction,
    b: &BohrSet,
    bprime: &BohrSet,
    alpha: f64,
    sigma: f64,
) -> Result<Vec<usize>, IncrementError> {
    let conv = fourier::convolve(f, f).expect("same modulus");
    witness_from_conv(conv.values(), b, bprime, alpha, sigma)
}

fn witness_from_conv(
    conv: &[f64],
    b: &BohrSet,
    bprime: &BohrSet,
    alpha: f64,
    sigma: f64,
) -> Result<Vec<usize>, IncrementError> {
    let threshold = 0.5 * alpha * alpha * b.len() as f64;
    let needed = (sigma * bprime.len() as f64).ceil() as usize;
    let mut candidates: Vec<usize> = bprime
        .elements()
        .iter()
        .copied()
        .filter(|&x| conv[x] < threshold)
        .collect();
    if candidates.len() < needed {
        return Err(IncrementError::WitnessUnderflow {
            candidates: candidates.len(),
            needed,
        });
    }
    candidates.sort_by(|&x, &y| conv[x].total_cmp(&conv[y]).then(x.cmp(&y)));
    candidates.truncate(needed);
    Ok(candidates)
}

/// Greedy dissociated-like frequency selection from the large spectrum of
/// the witness set: frequencies sorted by |Ŝ(ξ)| descending, skipping any
/// expressible as ±ξ₁±ξ₂ of already-chosen ones, capped at
/// ⌈16·α⁻²·ln σ⁻¹⌉. ξ = 0 is a vacuous Bohr constraint and is never chosen.
fn greedy_frequencies(
    n: usize,
    l_set: &[(usize, f64)],
    existing: &BTreeSet<usize>,
    cap: usize,
) -> (BTreeSet<usize>, bool) {
    let mut order: Vec<(usize, f64)> = l_set.to_vec();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut chosen: Vec<usize> = Vec::new();
    let mut forbidden: HashSet<usize> = HashSet::new();
    let mut capped = false;
    for &(xi, _) in &order {
        if xi == 0 || existing.contains(&xi) {
            continue;
        }
        if forbidden.contains(&xi) {
            continue;
        }
        if chosen.len() >= cap {
            capped = true;
            break;
        }
        for &c in chosen.iter().chain(std::iter::once(&xi)) {
            forbidden.insert((xi + c) % n);
            forbidden.insert((xi + n - c) % n);
            forbidden.insert((c + n - xi) % n);
            forbidden.insert((2 * n - xi - c) % n);
        }
        chosen.push(xi);
    }
    (chosen.into_iter().collect(), capped)
}

/// One dichotomy step for f supported on B with E(f|B) = α.
pub fn increment_step(
    f: &DensityFunction,
    b: &BohrSet,
    sigma: f64,
    c0: f64,
) -> Result<IncrementOutcome, IncrementError> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(IncrementError::InvalidSigma(sigma));
    }
    let sup = f.sup_norm();
    if sup > 1.0 + tol::DOMINANCE_SLACK {
        return Err(IncrementError::NotNormalized(sup));
    }
    check_support(f, b)?;
    let alpha = mean_on(f, b);
    if alpha <= 0.0 {
        return Err(IncrementError::ZeroDensity(alpha));
    }
    let n = f.modulus();
    let d = b.rank().max(1);
    let delta = b.radius();
    let shift = b.shift();

    // scale (1): δ′ from the grid inside (c0·α²·δ/d, 2c0·α²·δ/d)
    let delta_prime_top = (2.0 * c0 * alpha * alpha * delta / d as f64).min(1.999);
    let delta_prime =
        bohr::find_regular_radius(n, b.frequencies(), delta_prime_top, c0).map_err(|source| {
            IncrementError::NoRegularRadius {
                stage: "B'",
                source,
            }
        })?;
    // f∗f is supported near 2b, so B′ is centred there.
    let bprime = bohr::bohr_elements(n, b.frequencies(), delta_prime, 2 * shift % n)?;

    let conv = fourier::convolve(f, f).expect("same modulus");
    let conv_vals = conv.values();
    let threshold = 0.5 * alpha * alpha * b.len() as f64;
    let good_count = bprime
        .elements()
        .iter()
        .filter(|&&x| conv_vals[x] >= threshold)
        .count();
    let good_fraction = good_count as f64 / bprime.len() as f64;
    if good_fraction >= 1.0 - sigma {
        return Ok(IncrementOutcome::Found(FoundOutcome {
            b: b.clone(),
            bprime,
            threshold,
            good_count,
            good_fraction,
        }));
    }

    // abundance failed: witness set, large spectrum, greedy frequencies
    let witness = witness_from_conv(conv_vals, b, &bprime, alpha, sigma)?;
    let witness_ind = DensityFunction::indicator(n, &witness).expect("witness elements in range");
    let s_spec = fourier::dft(&witness_ind);
    let l_threshold = alpha * sigma * bprime.len() as f64 / (4.0 * n as f64);
    let l_set: Vec<(usize, f64)> = s_spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(xi, c)| (xi, c.norm()))
        .filter(|(_, norm)| *norm >= l_threshold)
        .collect();
    let l_chebyshev_cap = (4.0 * n as f64 / (alpha * sigma * bprime.len() as f64)).powi(2)
        * witness.len() as f64
        / n as f64;
    debug_assert!(
        l_set.len() as f64 <= l_chebyshev_cap * (1.0 + tol::DOMINANCE_SLACK),
        "Chebyshev cap on |L| violated"
    );

    let g = balanced_function(f, b)?;
    let g_spec = fourier::dft(&g);
    let energy_sum: f64 = l_set
        .iter()
        .map(|&(xi, _)| g_spec.coeff(xi).norm_sqr())
        .sum();
    let energy = n as f64 / b.len() as f64 * energy_sum;
    let d_delta_ratio = d as f64 * delta_prime / delta;
    let budget = tol::ENERGY_BUDGET_FACTOR * d_delta_ratio;
    let main_term = alpha * alpha / 4.0;
    let energy_check = EnergyCheck {
        energy,
        main_term,
        d_delta_ratio,
        budget,
        ok: energy >= main_term - budget,
        witness_size: witness.len(),
        l_size: l_set.len(),
        l_chebyshev_cap,
    };
    if !energy_check.ok {
        log::debug!(
            "large-spectrum energy below monitored budget: {energy:.4e} < {:.4e} - {budget:.4e}",
            main_term
        );
    }

    let cap = (tol::CHANG_CAP_FACTOR / (alpha * alpha) * (1.0 / sigma).ln()).ceil() as usize;
    let (added, capped) = greedy_frequencies(n, &l_set, b.frequencies(), cap.max(1));
    if capped {
        log::warn!("greedy frequency cap {cap} bound the selection at alpha = {alpha}");
    }
    let mut gamma_new: BTreeSet<usize> = b.frequencies().clone();
    gamma_new.extend(added.iter().copied());

    // scale (2): δ″ from the grid below min(δ′, 4·α²·δ′ / (d²·ln σ⁻¹))
    let chang_scale = if sigma < 1.0 {
        4.0 * alpha * alpha * delta_prime / (d as f64 * d as f64 * (1.0 / sigma).ln())
    } else {
        delta_prime
    };
    let delta_dp_top = delta_prime.min(chang_scale);
    let delta_dp =
        bohr::find_regular_radius(n, &gamma_new, delta_dp_top, c0).map_err(|source| {
            IncrementError::NoRegularRadius {
                stage: "B''",
                source,
            }
        })?;
    let kernel = bohr::bohr_elements(n, &gamma_new, delta_dp, 0)?;

    // b″ maximizes |f ∗ B″|; the kernel is symmetric, so the convolution at
    // b is the plain sum of f over b + kernel.
    let kernel_ind = DensityFunction::indicator(n, kernel.elements()).expect("kernel in range");
    let local_sums = fourier::convolve(f, &kernel_ind).expect("same modulus");
    let (best_shift, best_sum) =
        local_sums
            .values()
            .iter()
            .enumerate()
            .fold(
                (0usize, f64::MIN),
                |(bi, bv), (i, &v)| {
                    if v > bv {
                        (i, v)
                    } else {
                        (bi, bv)
                    }
                },
            );
    let new_mean = best_sum / kernel.len() as f64;
    let required = alpha * tol::INCREMENT_GROWTH;
    if new_mean + tol::ABS_MEAN < required {
        return Err(IncrementError::DichotomyFailure {
            alpha,
            good_fraction,
            new_mean,
            required,
        });
    }
    let bdoubleprime = kernel.with_shift(best_shift);
    Ok(IncrementOutcome::Increment(IncrementData {
        bdoubleprime,
        new_mean,
        added,
        capped,
        energy: energy_check,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepTag {
    Found,
    Increment,
}

/// Per-step trace record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepRecord {
    pub k: usize,
    pub gamma_size: usize,
    pub delta: f64,
    pub alpha: f64,
    pub outcome: StepTag,
    pub capped: bool,
    pub energy: Option<EnergyCheck>,
}

/// Trace of the full iteration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationTrace {
    pub steps: Vec<StepRecord>,
    pub terminal: Option<FoundOutcome>,
    /// Set when max_steps ran out before abundance; an anomaly, since the
    /// mean-growth bound caps the step count.
    pub nonterminal: bool,
    /// ⌈ln(1/α₀)/ln(33/32)⌉ + 1, the growth-implied step bound.
    pub step_bound: usize,
}

/// Step bound implied by the (1+2⁻⁵) growth per increment step.
pub fn step_bound(alpha0: f64) -> usize {
    assert!(alpha0 > 0.0);
    if alpha0 >= 1.0 {
        return 1;
    }
    ((1.0 / alpha0).ln() / tol::INCREMENT_GROWTH.ln()).ceil() as usize + 1
}

impl IterationTrace {
    /// Per-step CSV rows `k,gamma_size,delta,alpha,outcome` (header included).
    pub fn csv_rows(&self) -> String {
        let mut out = String::from("k,gamma_size,delta,alpha,outcome\n");
        for s in &self.steps {
            let tag = match s.outcome {
                StepTag::Found => "found",
                StepTag::Increment => "increment",
            };
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                s.k, s.gamma_size, s.delta, s.alpha, tag
            ));
        }
        out
    }
}

/// Iterate the dichotomy from Γ₀ = {0} until abundance or `max_steps`.
///
/// Each step applies [`increment_step`] to f restricted to the current Bohr
/// set; Found for the restricted function implies the global form, since
/// f ≥ f·1_B pointwise and the local mean only grows.
pub fn iterate_increment(
    f_global: &DensityFunction,
    sigma: f64,
    c0: f64,
    max_steps: usize,
) -> Result<IterationTrace, IncrementError> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(IncrementError::InvalidSigma(sigma));
    }
    let sup = f_global.sup_norm();
    if sup > 1.0 + tol::DOMINANCE_SLACK {
        return Err(IncrementError::NotNormalized(sup));
    }
    let alpha0 = f_global.mean();
    if alpha0 <= 0.0 {
        return Err(IncrementError::ZeroDensity(alpha0));
    }
    let n = f_global.modulus();
    let gamma0: BTreeSet<usize> = [0usize].into_iter().collect();
    let delta0 = bohr::find_regular_radius(n, &gamma0, 1.0, c0).map_err(|source| {
        IncrementError::NoRegularRadius {
            stage: "B0",
            source,
        }
    })?;
    // Γ₀ = {0} materializes to all of Z_N; every translate has the same
    // mean, so the smallest shift 0 wins the averaging.
    let mut current = bohr::bohr_elements(n, &gamma0, delta0, 0)?;
    let mut steps: Vec<StepRecord> = Vec::new();
    let bound = step_bound(alpha0);
    for k in 0..max_steps {
        let f_k = f_global.restrict_to(current.elements());
        let alpha_k = mean_on(&f_k, &current);
        if alpha_k <= 0.0 {
            return Err(IncrementError::ZeroDensity(alpha_k));
        }
        match increment_step(&f_k, &current, sigma, c0)? {
            IncrementOutcome::Found(found) => {
                steps.push(StepRecord {
                    k,
                    gamma_size: current.rank(),
                    delta: current.radius(),
                    alpha: alpha_k,
                    outcome: StepTag::Found,
                    capped: false,
                    energy: None,
                });
                return Ok(IterationTrace {
                    steps,
                    terminal: Some(found),
                    nonterminal: false,
                    step_bound: bound,
                });
            }
            IncrementOutcome::Increment(inc) => {
                steps.push(StepRecord {
                    k,
                    gamma_size: current.rank(),
                    delta: current.radius(),
                    alpha: alpha_k,
                    outcome: StepTag::Increment,
                    capped: inc.capped,
                    energy: Some(inc.energy),
                });
                current = inc.bdoubleprime;
            }
        }
    }
    log::warn!("iteration hit max_steps = {max_steps} without abundance (anomaly)");
    Ok(IterationTrace {
        steps,
        terminal: None,
        nonterminal: true,
        step_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn freqs(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn balanced_function_of_scaled_indicator_vanishes() {
        let b = bohr::bohr_elements(101, &freqs(&[1]), 0.8, 0).unwrap();
        let f = DensityFunction::scaled_indicator(101, b.elements(), 0.7).unwrap();
        let g = balanced_function(&f, &b).unwrap();
        for &v in g.values() {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_function_sums_to_zero_and_matches_linearity() {
        let n = 101;
        let b = bohr::bohr_elements(n, &freqs(&[1]), 1.2, 0).unwrap();
        let raw = oracle::pseudo_density(n, 5);
        let f = raw.restrict_to(b.elements());
        let g = balanced_function(&f, &b).unwrap();
        assert!(g.values().iter().sum::<f64>().abs() < tol::ABS_MEAN * n as f64);
        let g_spec = fourier::dft(&g);
        assert!(g_spec.coeff(0).norm() < tol::ABS_MEAN);
        // ĝ(ξ) = f̂(ξ) − α·B̂(ξ)
        let alpha = mean_on(&f, &b);
        let f_spec = fourier::dft(&f);
        let b_spec = fourier::dft(&DensityFunction::indicator(n, b.elements()).unwrap());
        for xi in 0..n {
            let expected = f_spec.coeff(xi) - alpha * b_spec.coeff(xi);
            assert!((g_spec.coeff(xi) - expected).norm() < 1e-11);
        }
    }

    #[test]
    fn balanced_function_rejects_outside_support() {
        let b = bohr::bohr_elements(101, &freqs(&[1]), 0.3, 0).unwrap();
        let f = DensityFunction::constant(101, 0.5).unwrap();
        assert!(matches!(
            balanced_function(&f, &b),
            Err(IncrementError::SupportViolation { .. })
        ));
    }

    #[test]
    fn witness_of_vanishing_convolution_is_prefix_of_bprime() {
        // f concentrated at one point c with 2c outside B': f∗f vanishes on
        // B', every element ties at 0, and the (value, x) order picks the
        // first ⌈σ|B'|⌉ elements of B' in sorted order.
        let n = 101;
        let b = bohr::bohr_elements(n, &freqs(&[1]), 1.5, 0).unwrap();
        let bprime = bohr::bohr_elements(n, &freqs(&[1]), 0.3, 0).unwrap();
        let c = *b
            .elements()
            .iter()
            .find(|&&x| !bprime.contains(2 * x % n))
            .unwrap();
        let f = DensityFunction::indicator(n, &[c]).unwrap();
        let sigma = 0.5;
        let alpha = mean_on(&f, &b);
        let witness = witness_set(&f, &b, &bprime, alpha, sigma).unwrap();
        let m = (sigma * bprime.len() as f64).ceil() as usize;
        assert_eq!(witness, bprime.elements()[..m].to_vec());
    }

    #[test]
    fn trace_csv_has_one_row_per_step() {
        let n = 1009;
        let prog: Vec<usize> = (0..n).filter(|x| x % 3 == 0).collect();
        let f = DensityFunction::indicator(n, &prog).unwrap();
        let trace = iterate_increment(&f, 1.0 / 16.0, 0.1, 12).unwrap();
        let csv = trace.csv_rows();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "k,gamma_size,delta,alpha,outcome");
        assert_eq!(lines.len(), trace.steps.len() + 1);
        assert!(lines.last().unwrap().ends_with("found"));
    }

    #[test]
    fn witness_set_size_and_threshold() {
        let n = 1009;
        let b = bohr::bohr_elements(n, &freqs(&[1]), 0.9, 0).unwrap();
        // sparse f on B: conv is tiny almost everywhere, so the witness is
        // the first ⌈σ|B'|⌉ elements of B' in conv-then-index order.
        let few: Vec<usize> = b.elements().iter().copied().take(3).collect();
        let f = DensityFunction::scaled_indicator(n, &few, 0.9).unwrap();
        let alpha = mean_on(&f, &b);
        let bprime = bohr::bohr_elements(n, &freqs(&[1]), 0.2, 0).unwrap();
        let sigma = 0.25;
        let witness = witness_set(&f, &b, &bprime, alpha, sigma).unwrap();
        assert_eq!(witness.len(), (sigma * bprime.len() as f64).ceil() as usize);
        let conv = fourier::convolve(&f, &f).unwrap();
        let threshold = 0.5 * alpha * alpha * b.len() as f64;
        for &x in &witness {
            assert!(conv.values()[x] < threshold);
            assert!(bprime.contains(x));
        }
    }

    #[test]
    fn indicator_of_bohr_set_is_found_immediately() {
        let n = 1009;
        let b = bohr::bohr_elements(n, &freqs(&[1]), 0.5, 0).unwrap();
        let f = DensityFunction::indicator(n, b.elements()).unwrap();
        let outcome = increment_step(&f, &b, 0.1, 0.1).unwrap();
        match outcome {
            IncrementOutcome::Found(found) => {
                assert!(found.good_fraction >= 0.9);
                // recount from scratch
                let conv = fourier::convolve(&f, &f).unwrap();
                let recount = found
                    .bprime
                    .elements()
                    .iter()
                    .filter(|&&x| conv.values()[x] >= found.threshold)
                    .count();
                assert_eq!(recount, found.good_count);
            }
            IncrementOutcome::Increment(_) => panic!("expected abundance for f = 1_B"),
        }
    }

    #[test]
    fn found_respects_shifted_center() {
        let n = 1009;
        let b = bohr::bohr_elements(n, &freqs(&[1]), 0.5, 123).unwrap();
        let f = DensityFunction::indicator(n, b.elements()).unwrap();
        match increment_step(&f, &b, 0.1, 0.1).unwrap() {
            IncrementOutcome::Found(found) => {
                assert_eq!(found.bprime.shift(), (2 * 123) % n);
                assert!(found.good_fraction >= 0.9);
            }
            IncrementOutcome::Increment(_) => panic!("expected abundance"),
        }
    }

    #[test]
    fn constant_function_is_found_at_step_zero() {
        let n = 1009;
        let f = DensityFunction::constant(n, 0.4).unwrap();
        let trace = iterate_increment(&f, 0.1, 0.1, 8).unwrap();
        assert!(!trace.nonterminal);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].outcome, StepTag::Found);
        let found = trace.terminal.unwrap();
        assert!(found.good_fraction >= 0.9);
    }

    #[test]
    fn progression_support_increments_then_terminates() {
        // f = indicator of the multiples of 3 below N: the abundance test
        // fails on the full group, so the step must produce a genuine
        // density increment, and the iteration must then terminate.
        let n = 1009;
        let prog: Vec<usize> = (0..n).filter(|x| x % 3 == 0).collect();
        let f = DensityFunction::indicator(n, &prog).unwrap();
        let sigma = 1.0 / 16.0;
        let trace = iterate_increment(&f, sigma, 0.1, 12).unwrap();
        assert!(!trace.nonterminal, "iteration failed to terminate");
        assert!(
            trace.steps.len() >= 2,
            "expected at least one increment step, got {:?}",
            trace.steps
        );
        assert_eq!(trace.steps[0].outcome, StepTag::Increment);
        // mean growth across increment steps
        for pair in trace.steps.windows(2) {
            assert!(
                pair[1].alpha + tol::ABS_MEAN >= pair[0].alpha * tol::INCREMENT_GROWTH,
                "alpha did not grow: {} -> {}",
                pair[0].alpha,
                pair[1].alpha
            );
        }
        assert!(trace.steps.len() <= trace.step_bound);
    }

    #[test]
    fn step_bound_matches_growth_formula() {
        for alpha in [0.05, 0.3, 0.9] {
            let expected = ((1.0f64 / alpha).ln() / (33.0f64 / 32.0).ln()).ceil() as usize + 1;
            assert_eq!(step_bound(alpha), expected);
        }
        assert_eq!(step_bound(1.0), 1);
    }

    #[test]
    fn rejects_unnormalized_input() {
        let f = DensityFunction::constant(101, 1.5).unwrap();
        assert!(matches!(
            iterate_increment(&f, 0.1, 0.1, 4),
            Err(IncrementError::NotNormalized(_))
        ));
    }
}
