//! Arithmetic-structure detectors and analytic estimates: k-th power
//! indicators, power-difference counts, Varnavides-type averages, sumsets,
//! longest-arithmetic-progression search, and the spectral error terms used
//! by the experiment pipelines.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::bohr::BohrSet;
use crate::fourier::{self, BalancedFunction, DensityFunction, FourierError, ZnFunction};
use crate::tol;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum StructuresError {
    #[error("power exponent k = {0} rejected: need k >= 2")]
    InvalidExponent(u32),
    #[error("element {element} outside Z_{modulus}")]
    ElementOutOfRange { element: usize, modulus: usize },
    #[error("set is empty")]
    EmptySet,
    #[error("modulus {n} exceeds the longest-AP cap {cap} and the sieved variant was disabled")]
    ModulusTooLarge { n: usize, cap: usize },
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let pow_mod = |mut base: u64, mut exp: u64| -> u64 {
        let mut acc = 1u128;
        let mut b = base as u128 % n as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % n as u128;
            }
            b = b * b % n as u128;
            exp >>= 1;
        }
        base = acc as u64;
        base
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest r with r^k ≤ N/3, i.e. ⌊(N/3)^{1/k}⌋.
pub fn power_range(n: usize, k: u32) -> usize {
    assert!(k >= 1);
    let mut r = (n as f64 / 3.0).powf(1.0 / k as f64) as usize + 2;
    while r > 0 && 3u128 * (r as u128).pow(k) > n as u128 {
        r -= 1;
    }
    r
}

/// The shifts r^k mod N for 1 ≤ r ≤ ⌊(N/3)^{1/k}⌋, in order of r.
pub fn power_shifts(n: usize, k: u32) -> Vec<usize> {
    (1..=power_range(n, k))
        .map(|r| ((r as u128).pow(k) % n as u128) as usize)
        .collect()
}

/// Indicator data of the k-th powers below N/3.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerIndicator {
    pub modulus: usize,
    pub exponent: u32,
    /// Sorted support {r^k mod N : 1 ≤ r ≤ ⌊(N/3)^{1/k}⌋}.
    pub support: Vec<usize>,
    /// Residue collisions detected at construction (0 when the r^k are
    /// distinct mod N, which holds whenever they are genuine integers < N).
    pub collisions: usize,
}

impl PowerIndicator {
    pub fn density(&self) -> DensityFunction {
        DensityFunction::indicator(self.modulus, &self.support).expect("valid support")
    }

    /// ‖P̂_k‖_{6k}, the norm entering the error-term chain.
    pub fn spectral_norm_6k(&self) -> f64 {
        let spec = fourier::dft(&self.density());
        fourier::spectral_lq_norm(&spec, 6.0 * self.exponent as f64).expect("q >= 1")
    }
}

/// Build the k-th power indicator. Non-prime N is allowed but warned, since
/// the support-size accounting assumes distinct residues.
pub fn power_indicator(n: usize, k: u32) -> Result<PowerIndicator, StructuresError> {
    if k < 2 {
        return Err(StructuresError::InvalidExponent(k));
    }
    if !is_prime(n as u64) {
        log::warn!("power_indicator: modulus {n} is not prime; residue collisions possible");
    }
    let shifts = power_shifts(n, k);
    let mut support = shifts.clone();
    support.sort_unstable();
    support.dedup();
    let collisions = shifts.len() - support.len();
    if collisions > 0 {
        log::warn!("power_indicator: {collisions} residue collisions at N={n}, k={k}");
    }
    Ok(PowerIndicator {
        modulus: n,
        exponent: k,
        support,
        collisions,
    })
}

/// Count of ordered pairs (x, x + r^k) with both endpoints in the set,
/// 1 ≤ r ≤ ⌊(N/3)^{1/k}⌋, differences read mod N.
pub fn power_difference_count(n: usize, set: &[usize], k: u32) -> Result<u64, StructuresError> {
    for &x in set {
        if x >= n {
            return Err(StructuresError::ElementOutOfRange {
                element: x,
                modulus: n,
            });
        }
    }
    let bits = BitSet::from_sorted(n, set);
    let mut count = 0u64;
    for s in power_shifts(n, k) {
        // pairs (x, x+s): x ∈ A and x+s ∈ A ⇔ x ∈ A ∩ (A − s)
        count += bits.intersection_count(&bits.rotate(n - s % n)) as u64;
    }
    Ok(count)
}

/// E(f(n)·f(n + r^k) | n ∈ Z_N, 1 ≤ r ≤ ⌊(N/3)^{1/k}⌋), by direct summation.
/// Returns 0 when the r-range is empty (N < 3).
pub fn varnavides_average(f: &impl ZnFunction, k: u32) -> f64 {
    let n = f.modulus();
    let shifts = power_shifts(n, k);
    if shifts.is_empty() {
        return 0.0;
    }
    let vals = f.values();
    let mut total = 0.0;
    for &s in &shifts {
        let mut inner = 0.0;
        for x in 0..n {
            inner += vals[x] * vals[(x + s) % n];
        }
        total += inner;
    }
    total / (n as f64 * shifts.len() as f64)
}

/// A + B = {a + b mod N}, exact via bitset translation.
pub fn sumset(n: usize, a: &[usize], b: &[usize]) -> Result<Vec<usize>, StructuresError> {
    for &x in a.iter().chain(b) {
        if x >= n {
            return Err(StructuresError::ElementOutOfRange {
                element: x,
                modulus: n,
            });
        }
    }
    let a_bits = BitSet::from_sorted(n, a);
    let mut out = BitSet::new(n);
    for &bv in b {
        out.union_with(&a_bits.rotate(bv));
    }
    Ok(out.to_sorted_vec())
}

/// Witness of an arithmetic progression start, start+step, …,
/// start+(length−1)·step (mod N) inside a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApWitness {
    pub start: usize,
    pub step: usize,
    pub length: usize,
}

impl ApWitness {
    pub fn elements(&self, n: usize) -> Vec<usize> {
        (0..self.length)
            .map(|j| (self.start + j * (self.step % n)) % n)
            .collect()
    }

    pub fn contained_in(&self, n: usize, set: &[usize]) -> bool {
        let bits = BitSet::from_sorted(n, set);
        self.elements(n).iter().all(|&x| bits.contains(x))
    }
}

/// Longest arithmetic progression in S (progressions read mod N), maximal
/// length with the lexicographically smallest (step, start) tie-break.
///
/// Below [`tol::LONGEST_AP_EXHAUSTIVE_CAP`] every step 1..N is scanned;
/// above it the step-sieved variant runs: candidate steps are restricted to
/// the difference set (S−S) and, by the d ↔ N−d reversal symmetry, to
/// d ≤ N/2. Both variants return identical witnesses.
pub fn longest_ap(n: usize, set: &[usize]) -> Result<ApWitness, StructuresError> {
    if set.is_empty() {
        return Err(StructuresError::EmptySet);
    }
    for &x in set {
        if x >= n {
            return Err(StructuresError::ElementOutOfRange {
                element: x,
                modulus: n,
            });
        }
    }
    if n <= tol::LONGEST_AP_EXHAUSTIVE_CAP {
        Ok(longest_ap_exhaustive(n, set))
    } else {
        Ok(longest_ap_sieved(n, set))
    }
}

/// Plain exhaustive search over every nonzero step.
pub fn longest_ap_exhaustive(n: usize, set: &[usize]) -> ApWitness {
    let member = BitSet::from_sorted(n, set);
    scan_steps(n, &member, set, 1..n)
}

/// Step-sieved search: steps restricted to the realized difference set and
/// folded to d ≤ N/2 by reversal symmetry. Exact: any progression of
/// length ≥ 2 has its step (or N − step) among the differences of members.
pub fn longest_ap_sieved(n: usize, set: &[usize]) -> ApWitness {
    let member = BitSet::from_sorted(n, set);
    // (S − S) via translated intersections of the member bitset
    let mut diffs = BitSet::new(n);
    for &s in set {
        diffs.union_with(&member.rotate(n - s));
    }
    let half = n / 2;
    let steps: Vec<usize> = (1..=half)
        .filter(|&d| diffs.contains(d) || diffs.contains(n - d))
        .collect();
    scan_steps(n, &member, set, steps.into_iter())
}

fn scan_steps(
    n: usize,
    member: &BitSet,
    set: &[usize],
    steps: impl Iterator<Item = usize>,
) -> ApWitness {
    let total = member.count();
    let mut best = ApWitness {
        start: set.iter().copied().min().unwrap(),
        step: 1,
        length: 1,
    };
    if total == n {
        return ApWitness {
            start: 0,
            step: 1,
            length: n,
        };
    }
    for d in steps {
        if best.length >= n {
            break;
        }
        let g = gcd(d, n);
        let cycle_len = n / g;
        if cycle_len <= best.length {
            continue;
        }
        for rep in 0..g {
            let (len, start) = longest_run_on_cycle(n, member, rep, d, cycle_len);
            if len > best.length {
                best = ApWitness {
                    start,
                    step: d,
                    length: len,
                };
            }
        }
    }
    best
}

/// Longest run of members along the cycle rep, rep+d, rep+2d, … (mod N);
/// returns (length, start of that run), preferring the smallest start among
/// maximal runs. A fully-member cycle counts as one run starting at its
/// smallest element.
fn longest_run_on_cycle(
    n: usize,
    member: &BitSet,
    rep: usize,
    d: usize,
    cycle_len: usize,
) -> (usize, usize) {
    // find a non-member anchor to break the circle
    let mut anchor = None;
    let mut x = rep;
    let mut min_elem = usize::MAX;
    for _ in 0..cycle_len {
        if member.contains(x) {
            min_elem = min_elem.min(x);
        } else {
            anchor = Some(x);
        }
        x = (x + d) % n;
    }
    let Some(anchor) = anchor else {
        return (
            cycle_len,
            if min_elem == usize::MAX {
                rep
            } else {
                min_elem
            },
        );
    };
    if min_elem == usize::MAX {
        return (0, rep); // no member on this cycle
    }
    let mut best_len = 0usize;
    let mut best_start = usize::MAX;
    let mut run_len = 0usize;
    let mut run_start = 0usize;
    let mut x = (anchor + d) % n;
    for _ in 0..cycle_len {
        if member.contains(x) {
            if run_len == 0 {
                run_start = x;
            }
            run_len += 1;
            if run_len > best_len || (run_len == best_len && run_start < best_start) {
                best_len = run_len;
                best_start = run_start;
            }
        } else {
            run_len = 0;
        }
        x = (x + d) % n;
    }
    (best_len, best_start)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The error-term chain for Σ_ξ |f̂₂(ξ)|²·|P̂_k(ξ)|: the exact sum together
/// with the Hölder bound ‖P̂_k‖_{6k} · ‖f̂₂‖_q^{(12k−1)/(6k)} · ‖f̂₂‖_∞^{1/(6k)},
/// q = (12k−1)/(6k−1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralErrorTerm {
    pub exponent: u32,
    pub q: f64,
    pub exact_sum: f64,
    pub holder_bound: f64,
    /// ‖P̂_k‖_{6k} (k = 2 gives the ‖Ŝ‖₁₂ of the square-difference chain).
    pub power_norm: f64,
    pub f2_q_norm: f64,
    pub f2_inf_norm: f64,
    /// Exact sum ≤ bound, with round-off slack; false indicates a bug.
    pub chain_ok: bool,
}

/// Evaluate the spectral error term of f₂ against a power indicator.
pub fn spectral_error_term(
    f2: &BalancedFunction,
    indicator: &PowerIndicator,
) -> Result<SpectralErrorTerm, FourierError> {
    if f2.modulus() != indicator.modulus {
        return Err(FourierError::ModulusMismatch {
            left: f2.modulus(),
            right: indicator.modulus,
        });
    }
    let k = indicator.exponent;
    let q = (12.0 * k as f64 - 1.0) / (6.0 * k as f64 - 1.0);
    let f2_spec = fourier::dft(f2);
    let s_spec = fourier::dft(&indicator.density());
    let exact_sum: f64 = f2_spec
        .coeffs()
        .iter()
        .zip(s_spec.coeffs())
        .map(|(a, b)| a.norm_sqr() * b.norm())
        .sum();
    let power_norm = fourier::spectral_lq_norm(&s_spec, 6.0 * k as f64)?;
    let f2_q_norm = fourier::spectral_lq_norm(&f2_spec, q)?;
    let f2_inf_norm = fourier::spectral_lq_norm(&f2_spec, f64::INFINITY)?;
    let holder_bound = power_norm
        * f2_q_norm.powf((12.0 * k as f64 - 1.0) / (6.0 * k as f64))
        * f2_inf_norm.powf(1.0 / (6.0 * k as f64));
    let chain_ok = exact_sum <= holder_bound * (1.0 + tol::DOMINANCE_SLACK);
    debug_assert!(
        chain_ok,
        "Hölder chain violated: {exact_sum} > {holder_bound}"
    );
    Ok(SpectralErrorTerm {
        exponent: k,
        q,
        exact_sum,
        holder_bound,
        power_norm,
        f2_q_norm,
        f2_inf_norm,
        chain_ok,
    })
}

/// ‖f_i ∗ f₂‖²_{L²(B′)} = Σ_{x∈B′} (f_i∗f₂)²(x).
pub fn l2_error_on_bohr(
    fi: &DensityFunction,
    f2: &BalancedFunction,
    bprime: &BohrSet,
) -> Result<f64, FourierError> {
    if fi.modulus() != bprime.modulus() {
        return Err(FourierError::ModulusMismatch {
            left: fi.modulus(),
            right: bprime.modulus(),
        });
    }
    let conv = fourier::convolve_signed(fi, f2)?;
    let vals = conv.values();
    Ok(bprime.elements().iter().map(|&x| vals[x] * vals[x]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    #[test]
    fn prime_checker() {
        for p in [2u64, 3, 13, 101, 257, 1009, 2003, 10_007, 100_003] {
            assert!(is_prime(p), "{p}");
        }
        for c in [1u64, 4, 100, 1001, 10_001, 100_001] {
            assert!(!is_prime(c), "{c}");
        }
    }

    #[test]
    fn square_indicator_small() {
        let ind = power_indicator(31, 2).unwrap();
        assert_eq!(ind.support, vec![1, 4, 9]);
        assert_eq!(ind.collisions, 0);
    }

    #[test]
    fn cube_indicator_small() {
        let ind = power_indicator(31, 3).unwrap();
        assert_eq!(ind.support, vec![1, 8]);
    }

    #[test]
    fn support_size_matches_range() {
        let ind = power_indicator(10_007, 2).unwrap();
        assert_eq!(ind.support.len(), power_range(10_007, 2));
        assert_eq!(ind.collisions, 0);
    }

    #[test]
    fn rejects_low_exponent() {
        assert_eq!(
            power_indicator(31, 1).unwrap_err(),
            StructuresError::InvalidExponent(1)
        );
    }

    #[test]
    fn non_prime_modulus_is_allowed_with_distinct_residues() {
        // powers below N/3 are genuine integers below N, so they stay
        // distinct mod N even for composite N; the warning is advisory
        let ind = power_indicator(100, 2).unwrap();
        assert_eq!(ind.support, vec![1, 4, 9, 16, 25]);
        assert_eq!(ind.collisions, 0);
    }

    #[test]
    fn power_difference_count_small() {
        // In Z_31 with k=2: (1,2) differs by 1², (1,5) by 2².
        assert_eq!(power_difference_count(31, &[1, 2, 5], 2).unwrap(), 2);
        assert_eq!(power_difference_count(31, &[], 2).unwrap(), 0);
        assert_eq!(power_difference_count(31, &[7], 2).unwrap(), 0);
    }

    #[test]
    fn power_difference_count_full_set() {
        let n = 101;
        let all: Vec<usize> = (0..n).collect();
        let expected = (n * power_range(n, 2)) as u64;
        assert_eq!(power_difference_count(n, &all, 2).unwrap(), expected);
    }

    #[test]
    fn varnavides_of_constant_is_one() {
        let f = DensityFunction::constant(101, 1.0).unwrap();
        assert!((varnavides_average(&f, 2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn varnavides_matches_double_loop() {
        let n = 101;
        let evens: Vec<usize> = (0..n).filter(|x| x % 2 == 0).collect();
        let f = DensityFunction::indicator(n, &evens).unwrap();
        let got = varnavides_average(&f, 2);
        // independent double loop in the (n, r) orientation
        let r_max = power_range(n, 2);
        let mut total = 0.0;
        for x in 0..n {
            for r in 1..=r_max {
                total += f.value(x) * f.value((x + r * r) % n);
            }
        }
        let expected = total / (n * r_max) as f64;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn varnavides_scales_quadratically() {
        let f = oracle::pseudo_density(97, 5);
        let scaled =
            DensityFunction::new(97, f.values().iter().map(|v| 3.0 * v).collect()).unwrap();
        let a = varnavides_average(&f, 2);
        let b = varnavides_average(&scaled, 2);
        assert!(tol::close(b, 9.0 * a, 1e-12));
    }

    #[test]
    fn counting_consistency_identity() {
        let n = 1009;
        let set = oracle::pseudo_subset(n, 33, 1, 3);
        let f = DensityFunction::indicator(n, &set).unwrap();
        for k in [2u32, 3] {
            let avg = varnavides_average(&f, k);
            let count = power_difference_count(n, &set, k).unwrap();
            let reconstructed = avg * (n * power_range(n, k)) as f64;
            assert!(
                (reconstructed - count as f64).abs() < 1e-6,
                "k={k}: {reconstructed} vs {count}"
            );
            assert_eq!(reconstructed.round() as u64, count);
            assert_eq!(avg > 0.0, count > 0);
        }
    }

    #[test]
    fn sumset_small() {
        assert_eq!(sumset(5, &[0, 1], &[0, 1]).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn sumset_rejects_out_of_range() {
        assert!(matches!(
            sumset(5, &[0, 7], &[0]),
            Err(StructuresError::ElementOutOfRange {
                element: 7,
                modulus: 5
            })
        ));
    }

    #[test]
    fn sumset_is_convolution_support() {
        let n = 257;
        let a = oracle::pseudo_subset(n, 9, 1, 4);
        let f = DensityFunction::indicator(n, &a).unwrap();
        let conv = fourier::convolve(&f, &f).unwrap();
        let support: Vec<usize> = conv
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| **v > 0.5)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(sumset(n, &a, &a).unwrap(), support);
    }

    #[test]
    fn longest_ap_example() {
        let w = longest_ap(11, &[1, 2, 3, 7]).unwrap();
        assert_eq!((w.start, w.step, w.length), (1, 1, 3));
    }

    #[test]
    fn longest_ap_full_group_and_singleton() {
        let all: Vec<usize> = (0..13).collect();
        let w = longest_ap(13, &all).unwrap();
        assert_eq!((w.start, w.step, w.length), (0, 1, 13));
        let s = longest_ap(13, &[5]).unwrap();
        assert_eq!((s.start, s.step, s.length), (5, 1, 1));
    }

    #[test]
    fn longest_ap_rejects_empty() {
        assert_eq!(longest_ap(13, &[]).unwrap_err(), StructuresError::EmptySet);
    }

    #[test]
    fn longest_ap_wraps_modulus() {
        // {9, 11, 0, 2, 4} is a 5-term progression of step 2 through 13.
        let w = longest_ap(13, &[0, 2, 4, 9, 11]).unwrap();
        assert_eq!(w.length, 5);
        assert!(w.contained_in(13, &[0, 2, 4, 9, 11]));
    }

    #[test]
    fn sieved_variant_matches_exhaustive() {
        for seed in 0..30u64 {
            let n = 53 + (seed as usize % 3) * 20;
            let set = oracle::pseudo_subset(n, seed, 1, 3);
            if set.is_empty() {
                continue;
            }
            let a = longest_ap_exhaustive(n, &set);
            let b = longest_ap_sieved(n, &set);
            assert_eq!(a, b, "n={n} seed={seed}");
        }
    }

    #[test]
    fn exhaustive_matches_oracle() {
        for seed in 0..20u64 {
            let n = 29 + (seed as usize % 4) * 6;
            let set = oracle::pseudo_subset(n, seed.wrapping_mul(77), 2, 5);
            if set.is_empty() {
                continue;
            }
            let got = longest_ap(n, &set).unwrap();
            let (start, step, len) = oracle::exhaustive_longest_ap(n, &set);
            assert_eq!(
                (got.start, got.step, got.length),
                (start, step, len),
                "n={n}"
            );
        }
    }

    #[test]
    fn spectral_error_term_zero_function() {
        let f2 = BalancedFunction::new(101, vec![0.0; 101]).unwrap();
        let ind = power_indicator(101, 2).unwrap();
        let term = spectral_error_term(&f2, &ind).unwrap();
        assert_eq!(term.exact_sum, 0.0);
        assert!(term.chain_ok);
    }

    #[test]
    fn spectral_error_chain_holds_on_random_inputs() {
        for seed in 0..10u64 {
            let vals: Vec<f64> = oracle::pseudo_values(1009, seed)
                .into_iter()
                .map(|v| v - 0.5)
                .collect();
            let f2 = BalancedFunction::new(1009, vals).unwrap();
            for k in [2u32, 3] {
                let ind = power_indicator(1009, k).unwrap();
                let term = spectral_error_term(&f2, &ind).unwrap();
                assert!(term.chain_ok, "seed={seed} k={k}");
                assert!((term.q - (12.0 * k as f64 - 1.0) / (6.0 * k as f64 - 1.0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn l2_error_full_group_is_global_norm() {
        let n = 257;
        let fi = oracle::pseudo_density(n, 3);
        let f2vals: Vec<f64> = oracle::pseudo_values(n, 4)
            .into_iter()
            .map(|v| v - 0.5)
            .collect();
        let f2 = BalancedFunction::new(n, f2vals).unwrap();
        let full =
            crate::bohr::bohr_elements(n, &std::collections::BTreeSet::new(), 1.0, 0).unwrap();
        let got = l2_error_on_bohr(&fi, &f2, &full).unwrap();
        let conv = fourier::convolve_signed(&fi, &f2).unwrap();
        let expected: f64 = conv.values().iter().map(|v| v * v).sum();
        assert!(tol::close(got, expected, 1e-12));
    }

    #[test]
    fn l2_error_matches_direct_sum() {
        // sparse instance at N=10007 against the direct O(N·|B'|) oracle
        let n = 10_007;
        let support = oracle::pseudo_subset(n, 8, 3, 10);
        let fi = DensityFunction::scaled_indicator(n, &support, 1.0 / 0.3).unwrap();
        let f2vals: Vec<f64> = oracle::pseudo_values(n, 9)
            .into_iter()
            .map(|v| v - 0.5)
            .collect();
        let f2 = BalancedFunction::new(n, f2vals).unwrap();
        let lam: std::collections::BTreeSet<usize> = [1usize].into_iter().collect();
        let bprime = crate::bohr::bohr_elements(n, &lam, 0.2, 0).unwrap();
        let got = l2_error_on_bohr(&fi, &f2, &bprime).unwrap();
        let mut expected = 0.0;
        for &x in bprime.elements() {
            let mut conv = 0.0;
            for y in 0..n {
                conv += fi.value(y) * f2.value((x + n - y) % n);
            }
            expected += conv * conv;
        }
        assert!(tol::close(got, expected, tol::REL_L2_BOHR));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn count_matches_brute_force(seed in 0u64..500, k in 2u32..4) {
            let n = 31 + (seed % 50) as usize;
            let set = oracle::pseudo_subset(n, seed, 1, 3);
            let fast = power_difference_count(n, &set, k).unwrap();
            let brute = oracle::brute_force_power_difference_count(n, &set, k);
            prop_assert_eq!(fast, brute);
        }

        #[test]
        fn longest_ap_affine_invariant(seed in 0u64..200) {
            let n = 37usize;
            let set = oracle::pseudo_subset(n, seed, 2, 5);
            prop_assume!(!set.is_empty());
            let base = longest_ap(n, &set).unwrap().length;
            for (a, b) in [(2usize, 5usize), (10, 0), (36, 13)] {
                let mapped: Vec<usize> = set.iter().map(|&x| (a * x + b) % n).collect();
                let got = longest_ap(n, &mapped).unwrap().length;
                prop_assert_eq!(got, base);
            }
        }
    }
}
