//! Independent reference implementations used to cross-check the fast paths.
//!
//! Everything here is deliberately naive (quadratic sums, all-pairs scans,
//! exhaustive searches) and shares no code with the implementations it
//! checks. Complexity limits these to small moduli.

use num_complex::Complex64;

use crate::fourier::{DensityFunction, Spectrum, ZnFunction};

/// Naive O(N²) transform with exact integer phase reduction, the oracle for
/// [`crate::fourier::dft`].
pub fn naive_dft(f: &impl ZnFunction) -> Spectrum {
    let n = f.modulus();
    let vals = f.values();
    let mut coeffs = Vec::with_capacity(n);
    for xi in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &v) in vals.iter().enumerate() {
            let phase = ((x as u128 * xi as u128) % n as u128) as f64;
            let theta = -2.0 * std::f64::consts::PI * phase / n as f64;
            acc += v * Complex64::new(theta.cos(), theta.sin());
        }
        coeffs.push(acc / n as f64);
    }
    Spectrum::new(n, coeffs).unwrap()
}

/// Naive O(N²) inversion f(x) = Σ_ξ F(ξ) e^{+2πixξ/N}.
pub fn naive_inverse_dft(spec: &Spectrum) -> Vec<f64> {
    let n = spec.modulus();
    (0..n)
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for xi in 0..n {
                let phase = ((x as u128 * xi as u128) % n as u128) as f64;
                let theta = 2.0 * std::f64::consts::PI * phase / n as f64;
                acc += spec.coeff(xi) * Complex64::new(theta.cos(), theta.sin());
            }
            acc.re
        })
        .collect()
}

/// Direct O(N²) circular convolution Σ_y f(y) g(x−y).
pub fn naive_convolve(f: &impl ZnFunction, g: &impl ZnFunction) -> Vec<f64> {
    let n = f.modulus();
    assert_eq!(n, g.modulus());
    let (fv, gv) = (f.values(), g.values());
    (0..n)
        .map(|x| (0..n).map(|y| fv[y] * gv[(x + n - y) % n]).sum())
        .collect()
}

/// All-pairs count of ordered pairs (x, x+r^k) with both endpoints in `set`,
/// 1 ≤ r ≤ ⌊(N/3)^{1/k}⌋; the oracle for the bitset counter.
pub fn brute_force_power_difference_count(n: usize, set: &[usize], k: u32) -> u64 {
    let r_max = crate::structures::power_range(n, k);
    let mut member = vec![false; n];
    for &x in set {
        member[x % n] = true;
    }
    let mut count = 0u64;
    for x in 0..n {
        if !member[x] {
            continue;
        }
        for r in 1..=r_max {
            let shift = (r as u128).pow(k) % n as u128;
            if member[(x + shift as usize) % n] {
                count += 1;
            }
        }
    }
    count
}

/// Exhaustive longest-AP search by extending every (start, step) pair; the
/// oracle for the production search. Progressions have distinct elements, so
/// length is capped at the cycle length N/gcd(step, N). Cubic-ish; keep N
/// small.
pub fn exhaustive_longest_ap(n: usize, set: &[usize]) -> (usize, usize, usize) {
    assert!(!set.is_empty());
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let mut member = vec![false; n];
    for &x in set {
        member[x % n] = true;
    }
    let mut best = (1usize, set.iter().copied().min().unwrap(), 1usize); // (len, start, step)
    for step in 1..n {
        let cap = n / gcd(step, n);
        for start in 0..n {
            if !member[start] {
                continue;
            }
            let mut len = 1;
            let mut x = start;
            loop {
                if len == cap {
                    break;
                }
                x = (x + step) % n;
                if !member[x] {
                    break;
                }
                len += 1;
            }
            let cand = (len, start, step);
            if cand.0 > best.0 || (cand.0 == best.0 && (cand.2, cand.1) < (best.2, best.1)) {
                best = cand;
            }
        }
    }
    (best.1, best.2, best.0)
}

/// The structured part of the decomposition by its defining double average
/// E(f(x+y1−y2) : y1, y2 ∈ B0), summed directly; the oracle for the
/// convolution route.
pub fn direct_double_average(f: &impl ZnFunction, b0: &[usize]) -> Vec<f64> {
    let n = f.modulus();
    let vals = f.values();
    assert!(!b0.is_empty());
    let norm = 1.0 / (b0.len() * b0.len()) as f64;
    (0..n)
        .map(|x| {
            let mut acc = 0.0;
            for &y1 in b0 {
                for &y2 in b0 {
                    acc += vals[(x + (y1 % n) + n - (y2 % n)) % n];
                }
            }
            acc * norm
        })
        .collect()
}

/// Count of non-wrapping progressions {x, x+r², …, x+(k−1)r²} ⊆ [0, N) that
/// are "good" for the set: they meet it in at least `threshold` elements.
/// Brute force over every admissible start.
pub fn good_progression_count(
    n: usize,
    set: &[usize],
    r: usize,
    k: usize,
    threshold: usize,
) -> usize {
    let mut member = vec![false; n];
    for &x in set {
        member[x % n] = true;
    }
    let step = r * r;
    if k == 0 || (k - 1).checked_mul(step).map_or(true, |s| s >= n) {
        return 0;
    }
    let last_start = n - 1 - (k - 1) * step;
    (0..=last_start)
        .filter(|&x| (0..k).filter(|&j| member[x + j * step]).count() >= threshold)
        .count()
}

/// Σ over admissible starts of |set ∩ {x, x+r², …}|; the double-counting
/// side of the good-progression argument.
pub fn progression_incidence_sum(n: usize, set: &[usize], r: usize, k: usize) -> usize {
    let mut member = vec![false; n];
    for &x in set {
        member[x % n] = true;
    }
    let step = r * r;
    if k == 0 || (k - 1).checked_mul(step).map_or(true, |s| s >= n) {
        return 0;
    }
    let last_start = n - 1 - (k - 1) * step;
    (0..=last_start)
        .map(|x| (0..k).filter(|&j| member[x + j * step]).count())
        .sum()
}

/// Small deterministic value generator for test inputs. splitmix64 per
/// index, unrelated to the production counter generator's key schedule.
pub fn pseudo_values(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed.wrapping_add(0x1234_5678_9abc_def0);
    (0..n)
        .map(|_| {
            state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// Deterministic nonnegative test function on Z_N with values in [0, 1).
pub fn pseudo_density(n: usize, seed: u64) -> DensityFunction {
    DensityFunction::new(n, pseudo_values(n, seed)).unwrap()
}

/// Deterministic subset of Z_N with inclusion probability ~num/den.
pub fn pseudo_subset(n: usize, seed: u64, num: u64, den: u64) -> Vec<usize> {
    pseudo_values(n, seed)
        .into_iter()
        .enumerate()
        .filter(|(_, v)| *v * (den as f64) < num as f64)
        .map(|(i, _)| i)
        .collect()
}
