//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with its measured quantities. Run with `cargo test --test acceptance`
//! (`-- --nocapture` to see the lines).

use std::collections::BTreeSet;
use std::time::Instant;

use znlab_core::bohr;
use znlab_core::fourier::{self, DensityFunction, ZnFunction};
use znlab_core::increment::{self, IncrementOutcome};
use znlab_core::oracle;
use znlab_core::random_model::{self, Strategy};
use znlab_core::structures;
use znlab_core::tol;

use znlab_harness::config::{ExperimentConfig, ExperimentKind, OutputFormat, SeedSpec};
use znlab_harness::{
    csv_bytes, csv_success_fraction, json_bytes, parse_report_json, run_trials, TrialDetail,
};

fn banner(index: u32, name: &str, pass: bool, detail: &str, started: Instant) {
    println!(
        "ACCEPTANCE {index:02} {name}: {} ({detail}; {:.2?})",
        if pass { "PASS" } else { "FAIL" },
        started.elapsed()
    );
    assert!(pass, "criterion {index} ({name}) failed: {detail}");
}

fn base_config(experiment: ExperimentKind, n: usize, p: f64, alpha: f64) -> ExperimentConfig {
    ExperimentConfig {
        experiment,
        n,
        p,
        alpha,
        theta: None,
        k: None,
        beta: None,
        sigma: None,
        epsilon0: None,
        q: None,
        c0: tol::C0_DEFAULT,
        m_budget: tol::M_DEFAULT,
        seeds: SeedSpec::Count(10),
        strategy: Strategy::UniformRandom,
        output: None,
        format: OutputFormat::Json,
    }
}

#[test]
fn acceptance_01_fourier_core() {
    let started = Instant::now();
    let sizes = [4usize, 8, 13, 101, 257, 512];
    let mut worst_rel: f64 = 0.0;
    for (i, &n) in sizes.iter().enumerate() {
        let f = oracle::pseudo_density(n, 100 + i as u64);
        let g = oracle::pseudo_density(n, 200 + i as u64);
        // dft against the quadratic sum
        let fast = fourier::dft(&f);
        let naive = oracle::naive_dft(&f);
        let scale = naive
            .coeffs()
            .iter()
            .fold(1e-300_f64, |m, c| m.max(c.norm()));
        for (a, b) in fast.coeffs().iter().zip(naive.coeffs()) {
            worst_rel = worst_rel.max((a - b).norm() / scale);
        }
        // inversion against the quadratic sum
        let back = fourier::inverse_dft(&fast);
        let naive_back = oracle::naive_inverse_dft(&fast);
        let vscale = naive_back.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for (a, b) in back.values().iter().zip(&naive_back) {
            worst_rel = worst_rel.max((a - b).abs() / vscale);
        }
        // convolution against the quadratic sum
        let conv = fourier::convolve(&f, &g).unwrap();
        let naive_conv = oracle::naive_convolve(&f, &g);
        let cscale = naive_conv.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        for (a, b) in conv.values().iter().zip(&naive_conv) {
            worst_rel = worst_rel.max((a - b).abs() / cscale);
        }
    }
    let oracle_ok = worst_rel < tol::REL_TRANSFORM;

    // 1000 random instances: Plancherel and the convolution identity
    let mut identities_ok = true;
    let mut worst_identity: f64 = 0.0;
    for trial in 0..1000u64 {
        let n = sizes[(trial % sizes.len() as u64) as usize];
        let f = oracle::pseudo_density(n, 10_000 + trial);
        let g = oracle::pseudo_density(n, 20_000 + trial);
        let fs = fourier::dft(&f);
        let lhs: f64 = fs.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let rhs = f.values().iter().map(|v| v * v).sum::<f64>() / n as f64;
        let plancherel_err = (lhs - rhs).abs();
        let gs = fourier::dft(&g);
        let conv = fourier::convolve(&f, &g).unwrap();
        let cs = fourier::dft(&conv);
        let mut conv_err: f64 = 0.0;
        for xi in 0..n {
            let ident = n as f64 * fs.coeff(xi) * gs.coeff(xi);
            conv_err = conv_err.max((ident - cs.coeff(xi)).norm());
        }
        worst_identity = worst_identity.max(plancherel_err).max(conv_err);
        if plancherel_err >= tol::ABS_IDENTITY || conv_err >= tol::ABS_IDENTITY {
            identities_ok = false;
        }
    }
    banner(
        1,
        "fourier core vs naive oracles",
        oracle_ok && identities_ok,
        &format!("worst oracle rel err {worst_rel:.2e}, worst identity err {worst_identity:.2e} over 1000 instances"),
        started,
    );
}

#[test]
fn acceptance_02_square_spectral_bound() {
    let started = Instant::now();
    let mut pass = true;
    let mut detail = String::new();
    for n in [101usize, 1009, 10_007, 100_003] {
        let ind = structures::power_indicator(n, 2).unwrap();
        let norm = ind.spectral_norm_6k();
        let budget = 2.0_f64.powf(19.0 / 12.0) * (n as f64).powf(-0.5);
        pass &= norm <= budget;
        detail.push_str(&format!("N={n}: {norm:.3e} <= {budget:.3e}; "));
    }
    banner(
        2,
        "square indicator 12-norm bound",
        pass,
        detail.trim_end(),
        started,
    );
}

#[test]
fn acceptance_03_power_spectral_bound() {
    let started = Instant::now();
    let mut pass = true;
    let mut worst_ratio: f64 = 0.0;
    for k in [2u32, 3, 4] {
        for n in [1009usize, 10_007] {
            let ind = structures::power_indicator(n, k).unwrap();
            let norm = ind.spectral_norm_6k();
            let budget = tol::WARING_C1 * (n as f64).powf(1.0 / k as f64 - 1.0);
            worst_ratio = worst_ratio.max(norm / budget);
            pass &= norm <= budget;
        }
    }
    banner(
        3,
        "power indicator 6k-norm bound (frozen c1)",
        pass,
        &format!(
            "c1 = {}, worst norm/budget ratio {worst_ratio:.3}",
            tol::WARING_C1
        ),
        started,
    );
}

#[test]
fn acceptance_04_decomposition_certificates() {
    let started = Instant::now();
    let mut total = 0usize;
    let mut passed = 0usize;
    for &p in &[0.3, 0.1] {
        for &epsilon0 in &[0.1, 0.05] {
            let mut config = base_config(ExperimentKind::DecompositionAudit, 10_007, p, 0.4);
            config.epsilon0 = Some(epsilon0);
            config.seeds = SeedSpec::Count(25);
            let report = run_trials(&config).unwrap();
            total += report.aggregate.trials;
            passed += report.aggregate.successes;
        }
    }
    banner(
        4,
        "decomposition certificates (i)-(iv)",
        total == 100 && passed == 100,
        &format!("{passed}/{total} instances passed all four checks"),
        started,
    );
}

#[test]
fn acceptance_05_pseudorandomness() {
    let started = Instant::now();
    let (n, p) = (10_007usize, 0.3);
    let eta_budget = tol::ETA_BUDGET_FACTOR * (n as f64).powf(-0.2);
    let l2_budget = 2.0 / p;
    let mut eta_hits = 0usize;
    let mut l2_hits = 0usize;
    for seed in 0..100u64 {
        let sample = random_model::sample_w(n, p, seed).unwrap();
        let sample =
            random_model::adversarial_subset(&sample, 1.0, Strategy::UniformRandom).unwrap();
        let (nu, f) = random_model::build_measures(&sample);
        let cert = random_model::certify_pseudorandom(
            &nu,
            &f.unwrap(),
            23.0 / 11.0,
            tol::M_DEFAULT,
            eta_budget,
        );
        if cert.eta_ok {
            eta_hits += 1;
        }
        if cert.l2_norm_sq <= l2_budget {
            l2_hits += 1;
        }
        assert!(
            cert.plancherel_ok,
            "Plancherel re-check failed at seed {seed}"
        );
    }
    banner(
        5,
        "pseudorandomness certificates over 100 seeds",
        eta_hits >= 95 && l2_hits >= 95,
        &format!("eta within 3N^(-1/5) in {eta_hits}/100, l2 within 2/p in {l2_hits}/100"),
        started,
    );
}

#[test]
fn acceptance_06_structure_counters() {
    let started = Instant::now();
    let sizes = [31usize, 101, 257, 1009, 2003];
    let mut checked = 0usize;
    let mut count_ok = true;
    let mut consistency_ok = true;
    for trial in 0..500u64 {
        let n = sizes[(trial % sizes.len() as u64) as usize];
        let set = oracle::pseudo_subset(n, 31_000 + trial, 1, 3);
        if set.is_empty() {
            continue;
        }
        let k = if trial % 7 == 0 { 3 } else { 2 };
        let fast = structures::power_difference_count(n, &set, k).unwrap();
        let brute = oracle::brute_force_power_difference_count(n, &set, k);
        count_ok &= fast == brute;
        let f = DensityFunction::indicator(n, &set).unwrap();
        let avg = structures::varnavides_average(&f, k);
        let reconstructed = avg * (n * structures::power_range(n, k)) as f64;
        consistency_ok &=
            reconstructed.round() as u64 == fast && (reconstructed - fast as f64).abs() < 1e-6;
        checked += 1;
    }
    banner(
        6,
        "structure counters vs brute force",
        count_ok && consistency_ok && checked == 500,
        &format!("{checked} sets checked; counts exact, Varnavides identity exact"),
        started,
    );
}

#[test]
fn acceptance_07_square_difference_experiment() {
    let started = Instant::now();
    let mut fractions = Vec::new();
    for strategy in [Strategy::UniformRandom, Strategy::ProgressionIntersect] {
        let mut config = base_config(ExperimentKind::Sarkozy, 10_007, 0.3, 0.4);
        config.seeds = SeedSpec::Count(100);
        config.strategy = strategy;
        let report = run_trials(&config).unwrap();
        fractions.push((strategy.name(), report.aggregate.success_fraction));
    }
    // the square-difference-free greedy strategy documents its achieved
    // density; the builder caps it well below alpha
    let mut config = base_config(ExperimentKind::Sarkozy, 10_007, 0.3, 0.4);
    config.seeds = SeedSpec::Count(100);
    config.strategy = Strategy::SquareDifferenceFreeGreedy;
    let report = run_trials(&config).unwrap();
    let mean_achieved: f64 =
        report.rows.iter().map(|r| r.alpha_achieved).sum::<f64>() / report.rows.len() as f64;
    let greedy_sd_free = report.rows.iter().all(|r| match &r.detail {
        TrialDetail::PowerDifference { count_modn, .. } => *count_modn == 0,
        _ => false,
    });
    let pass = fractions.iter().all(|(_, f)| *f == 1.0) && greedy_sd_free && mean_achieved < 0.4;
    banner(
        7,
        "square differences in random subsets",
        pass,
        &format!(
            "{}={}, {}={}, greedy mean |A|/|W| = {mean_achieved:.3} (sd-free in all seeds)",
            fractions[0].0, fractions[0].1, fractions[1].0, fractions[1].1
        ),
        started,
    );
}

#[test]
fn acceptance_08_sumset_size_experiment() {
    let started = Instant::now();
    let mut config = base_config(ExperimentKind::SumsetSize, 10_007, 0.5, 0.4);
    config.beta = Some(0.15);
    config.seeds = SeedSpec::Count(100);
    let report = run_trials(&config).unwrap();
    let uniform_fraction = report.aggregate.success_fraction;

    config.strategy = Strategy::ProgressionIntersect;
    let report = run_trials(&config).unwrap();
    let extremal_every_seed = report.rows.iter().all(|r| match &r.detail {
        TrialDetail::SumsetSize { extremal_ok, .. } => *extremal_ok == Some(true),
        _ => false,
    });
    banner(
        8,
        "sumset size lower bound and extremal strategy",
        uniform_fraction == 1.0 && extremal_every_seed,
        &format!(
            "uniform fraction {uniform_fraction}, progression |A+A| <= 2|P|+1 in all {} seeds",
            report.rows.len()
        ),
        started,
    );
}

struct IncrementInstance {
    label: String,
    f: DensityFunction,
    /// Bohr set for a direct one-step check; None means run the iteration.
    step_domain: Option<bohr::BohrSet>,
}

fn increment_instances() -> Vec<IncrementInstance> {
    let mut out = Vec::new();
    for &n in &[1009usize, 10_007] {
        for &alpha in &[0.25, 0.5] {
            out.push(IncrementInstance {
                label: format!("constant {alpha} at N={n}"),
                f: DensityFunction::constant(n, alpha).unwrap(),
                step_domain: None,
            });
        }
        for &m in &[3usize, 4] {
            let prog: Vec<usize> = (0..n).filter(|x| x % m == 0).collect();
            out.push(IncrementInstance {
                label: format!("multiples of {m} at N={n}"),
                f: DensityFunction::indicator(n, &prog).unwrap(),
                step_domain: None,
            });
        }
        let rank1: &[(usize, f64, usize)] = &[(1, 0.5, 0), (7, 0.9, 0), (1, 0.5, 123)];
        for &(xi, delta, shift) in rank1 {
            let freqs: BTreeSet<usize> = [xi].into_iter().collect();
            let b = bohr::bohr_elements(n, &freqs, delta, shift).unwrap();
            let f = DensityFunction::indicator(n, b.elements()).unwrap();
            out.push(IncrementInstance {
                label: format!("1_B rank-1 xi={xi} delta={delta} shift={shift} at N={n}"),
                f,
                step_domain: Some(b),
            });
        }
        let freqs: BTreeSet<usize> = [1usize, 13].into_iter().collect();
        let b2 = bohr::bohr_elements(n, &freqs, 0.9, 0).unwrap();
        out.push(IncrementInstance {
            label: format!("1_B rank-2 at N={n}"),
            f: DensityFunction::indicator(n, b2.elements()).unwrap(),
            step_domain: Some(b2),
        });
        let freqs3: BTreeSet<usize> = [3usize].into_iter().collect();
        let b3 = bohr::bohr_elements(n, &freqs3, 0.7, 0).unwrap();
        let f3 = DensityFunction::scaled_indicator(n, b3.elements(), 0.8).unwrap();
        out.push(IncrementInstance {
            label: format!("0.8 on rank-1 Bohr set at N={n}"),
            f: f3,
            step_domain: Some(b3),
        });
        // dense sub-progression forces the increment branch of a single step
        let sub: Vec<usize> = (0..n).filter(|x| x % 5 == 0).collect();
        let gamma0: BTreeSet<usize> = [0usize].into_iter().collect();
        let delta0 = bohr::find_regular_radius(n, &gamma0, 1.0, tol::C0_DEFAULT).unwrap();
        let full = bohr::bohr_elements(n, &gamma0, delta0, 0).unwrap();
        out.push(IncrementInstance {
            label: format!("multiples of 5 single step at N={n}"),
            f: DensityFunction::indicator(n, &sub).unwrap(),
            step_domain: Some(full),
        });
    }
    out
}

#[test]
fn acceptance_09_increment_machinery() {
    let started = Instant::now();
    let sigma = 1.0 / 16.0;
    let c0 = tol::C0_DEFAULT;
    let instances = increment_instances();
    assert_eq!(instances.len(), 20);
    let mut sound = 0usize;
    let mut details = Vec::new();
    for inst in &instances {
        let ok = match &inst.step_domain {
            Some(b) => {
                let f = inst.f.restrict_to(b.elements());
                let alpha = increment::mean_on(&f, b);
                match increment::increment_step(&f, b, sigma, c0) {
                    Ok(IncrementOutcome::Found(found)) => {
                        let conv = fourier::convolve(&f, &f).unwrap();
                        let recount = found
                            .bprime
                            .elements()
                            .iter()
                            .filter(|&&x| conv.values()[x] >= found.threshold)
                            .count();
                        let threshold_ok = (found.threshold - 0.5 * alpha * alpha * b.len() as f64)
                            .abs()
                            < 1e-9 * b.len() as f64;
                        recount == found.good_count
                            && found.good_fraction >= 1.0 - sigma
                            && threshold_ok
                    }
                    Ok(IncrementOutcome::Increment(inc)) => {
                        let recount = increment::mean_on(&inst.f, &inc.bdoubleprime);
                        (recount - inc.new_mean).abs() < 1e-9
                            && inc.new_mean + 1e-9 >= alpha * tol::INCREMENT_GROWTH
                    }
                    Err(err) => {
                        details.push(format!("{}: {err}", inst.label));
                        false
                    }
                }
            }
            None => match increment::iterate_increment(&inst.f, sigma, c0, 64) {
                Ok(trace) => {
                    let within = !trace.nonterminal && trace.steps.len() <= trace.step_bound;
                    let recount_ok = trace
                        .terminal
                        .as_ref()
                        .map(|found| {
                            let f_k = inst.f.restrict_to(found.b.elements());
                            let conv = fourier::convolve(&f_k, &f_k).unwrap();
                            let recount = found
                                .bprime
                                .elements()
                                .iter()
                                .filter(|&&x| conv.values()[x] >= found.threshold)
                                .count();
                            recount == found.good_count
                                && recount as f64 >= (1.0 - sigma) * found.bprime.len() as f64
                        })
                        .unwrap_or(false);
                    within && recount_ok
                }
                Err(err) => {
                    details.push(format!("{}: {err}", inst.label));
                    false
                }
            },
        };
        if ok {
            sound += 1;
        } else if details
            .last()
            .map(|d| !d.starts_with(&inst.label))
            .unwrap_or(true)
        {
            details.push(format!("{}: unsound outcome", inst.label));
        }
    }
    banner(
        9,
        "increment machinery on constructed instances",
        sound == 20,
        &format!(
            "{sound}/20 sound; {}",
            if details.is_empty() {
                "no diagnostics".into()
            } else {
                details.join(" | ")
            }
        ),
        started,
    );
}

#[test]
fn acceptance_10_sumset_ap_pipeline() {
    let started = Instant::now();
    let mut config = base_config(ExperimentKind::SumsetAp, 10_007, 0.5, 0.45);
    config.k = Some(5);
    config.seeds = SeedSpec::Count(20);
    let report = run_trials(&config).unwrap();
    let mut min_ap = usize::MAX;
    let mut all_in_sumset = true;
    for row in &report.rows {
        match &row.detail {
            TrialDetail::SumsetAp {
                sumset_ap,
                good_ap_in_sumset,
                good_set_size,
                ..
            } => {
                min_ap = min_ap.min(sumset_ap.length);
                all_in_sumset &= *good_ap_in_sumset && *good_set_size > 0;
            }
            _ => all_in_sumset = false,
        }
    }
    banner(
        10,
        "sumset progression pipeline",
        report.aggregate.success_fraction == 1.0 && min_ap >= 5 && all_in_sumset,
        &format!(
            "fraction {}, min sumset AP length {min_ap}, good-set AP inside A+A in all seeds",
            report.aggregate.success_fraction
        ),
        started,
    );
}

#[test]
fn acceptance_11_determinism() {
    let started = Instant::now();
    let config_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut entries: Vec<_> = std::fs::read_dir(config_dir)
        .expect("configs directory ships with the repo")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().map(|e| e == "json").unwrap_or(false))
        .collect();
    entries.sort();
    assert_eq!(entries.len(), 6, "six shipped default configs");
    let mut pass = true;
    let mut detail = String::new();
    for path in &entries {
        let config: ExperimentConfig =
            serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
        let first = run_trials(&config).unwrap();
        let second = run_trials(&config).unwrap();
        let csv_a = csv_bytes(&first).unwrap();
        let csv_b = csv_bytes(&second).unwrap();
        let identical = csv_a == csv_b;
        // round-trips reproduce the aggregate exactly
        let json = json_bytes(&first).unwrap();
        let parsed = parse_report_json(&json).unwrap();
        let json_ok = parsed.aggregate == first.aggregate;
        let csv_ok = csv_success_fraction(&csv_a).unwrap() == first.aggregate.success_fraction;
        pass &= identical && json_ok && csv_ok;
        detail.push_str(&format!(
            "{}: {} ",
            path.file_stem().unwrap().to_string_lossy(),
            if identical && json_ok && csv_ok {
                "ok"
            } else {
                "MISMATCH"
            }
        ));
    }
    banner(
        11,
        "shipped config suite determinism",
        pass,
        detail.trim_end(),
        started,
    );
}
