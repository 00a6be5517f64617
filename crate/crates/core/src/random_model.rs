//! Deterministic sampling of the random set W, the majorant ν and embedded
//! density f, pseudorandomness certificates, and adversarial subset
//! strategies.
//!
//! # Generator
//!
//! Sampling uses a counter-based generator: one keyed 64-bit draw per
//! element, so membership of x depends only on `(seed, stream, x)` and the
//! sample is order-independent and reproducible across platforms. The frozen
//! key schedule is three chained splitmix64 finalizer rounds:
//!
//! ```text
//! h = mix64(seed ^ 0x517CC1B727220A95)
//! h = mix64(h ^ stream · 0x9E3779B97F4A7C15)
//! h = mix64(h ^ x · 0xD1B54A32D192ED03)
//! ```
//!
//! Streams: 0 = W membership, 1 = uniform subset shuffle, 2 = greedy scan
//! order. x ∈ W iff the draw is below ⌈p·2^64⌉ (p = 1 always includes).

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::fourier::{self, DensityFunction, Spectrum, ZnFunction};
use crate::structures;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RandomModelError {
    #[error("probability p = {0} outside (0, 1]")]
    InvalidProbability(f64),
    #[error("subset fraction alpha = {0} outside (0, 1]")]
    InvalidAlpha(f64),
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("sample has no subset A; build one with adversarial_subset")]
    MissingSubset,
    #[error("sample W is empty; no subset can be drawn")]
    EmptyW,
}

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One keyed draw of the counter-based generator.
#[inline]
pub fn counter_draw(seed: u64, stream: u64, x: u64) -> u64 {
    let mut h = mix64(seed ^ 0x517C_C1B7_2722_0A95);
    h = mix64(h ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    h = mix64(h ^ x.wrapping_mul(0xD1B5_4A32_D192_ED03));
    h
}

const STREAM_MEMBERSHIP: u64 = 0;
const STREAM_UNIFORM_SUBSET: u64 = 1;
const STREAM_GREEDY_ORDER: u64 = 2;

/// Sequential view over one stream of the counter generator.
struct SeqRng {
    seed: u64,
    stream: u64,
    counter: u64,
}

impl SeqRng {
    fn new(seed: u64, stream: u64) -> Self {
        SeqRng {
            seed,
            stream,
            counter: 0,
        }
    }

    fn next_u64(&mut self) -> u64 {
        let v = counter_draw(self.seed, self.stream, self.counter);
        self.counter += 1;
        v
    }

    /// Deterministic Fisher-Yates shuffle.
    fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = (self.next_u64() % (i as u64 + 1)) as usize;
            items.swap(i, j);
        }
    }
}

/// Subset-selection strategies for A ⊆ W.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// A uniformly shuffled ⌈α|W|⌉-subset of W.
    UniformRandom,
    /// W ∩ (P + x) for the shift x maximizing the intersection, P an
    /// arithmetic progression of step ⌈1/α⌉ and length ⌈αN⌉.
    ProgressionIntersect,
    /// Greedy maximal subset of W with no two elements differing by a
    /// nonzero square shift r² (mod N), r ≤ ⌊√(N/3)⌋.
    SquareDifferenceFreeGreedy,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::UniformRandom => "uniform-random",
            Strategy::ProgressionIntersect => "progression-intersect",
            Strategy::SquareDifferenceFreeGreedy => "square-difference-free-greedy",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform-random" => Ok(Strategy::UniformRandom),
            "progression-intersect" => Ok(Strategy::ProgressionIntersect),
            "square-difference-free-greedy" => Ok(Strategy::SquareDifferenceFreeGreedy),
            other => Err(format!(
                "unknown strategy '{other}' (expected uniform-random, \
                 progression-intersect, or square-difference-free-greedy)"
            )),
        }
    }
}

/// A sampled random set W ⊆ Z_N, optionally with a chosen subset A ⊆ W.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSetSample {
    pub modulus: usize,
    pub p: f64,
    /// Minimal θ with p ≥ N^{−θ}; informational.
    pub theta: f64,
    pub seed: u64,
    pub w: Vec<usize>,
    pub a: Option<Vec<usize>>,
    pub strategy: Option<Strategy>,
    /// |A| / |W| when A is present.
    pub alpha: Option<f64>,
    /// Set when the strategy could not reach the requested subset size.
    pub shortfall: bool,
}

impl RandomSetSample {
    pub fn w_size(&self) -> usize {
        self.w.len()
    }

    pub fn a_size(&self) -> usize {
        self.a.as_ref().map_or(0, Vec::len)
    }

    pub fn subset(&self) -> Result<&[usize], RandomModelError> {
        self.a.as_deref().ok_or(RandomModelError::MissingSubset)
    }
}

/// Sample W with independent per-element inclusion probability p.
pub fn sample_w(n: usize, p: f64, seed: u64) -> Result<RandomSetSample, RandomModelError> {
    if n == 0 {
        return Err(RandomModelError::ZeroModulus);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(RandomModelError::InvalidProbability(p));
    }
    let threshold = if p >= 1.0 {
        u64::MAX
    } else {
        (p * 2.0_f64.powi(64)).ceil() as u64
    };
    let w: Vec<usize> = (0..n)
        .filter(|&x| p >= 1.0 || counter_draw(seed, STREAM_MEMBERSHIP, x as u64) < threshold)
        .collect();
    let theta = if p >= 1.0 || n == 1 {
        0.0
    } else {
        (1.0 / p).ln() / (n as f64).ln()
    };
    Ok(RandomSetSample {
        modulus: n,
        p,
        theta,
        seed,
        w,
        a: None,
        strategy: None,
        alpha: None,
        shortfall: false,
    })
}

/// ν = p⁻¹·1_W and, when A is present, f = p⁻¹·1_A.
pub fn build_measures(sample: &RandomSetSample) -> (DensityFunction, Option<DensityFunction>) {
    let scale = 1.0 / sample.p;
    let nu = DensityFunction::scaled_indicator(sample.modulus, &sample.w, scale)
        .expect("sample holds valid residues");
    let f = sample.a.as_ref().map(|a| {
        DensityFunction::scaled_indicator(sample.modulus, a, scale)
            .expect("subset holds valid residues")
    });
    (nu, f)
}

/// Measured pseudorandomness quantities with their budgets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudorandomCertificate {
    /// Measured ‖ν̂ − 1_{ξ=0}‖_∞.
    pub eta: f64,
    pub eta_budget: f64,
    pub eta_ok: bool,
    /// Measured ‖f̂‖₂².
    pub l2_norm_sq: f64,
    /// Internal Plancherel re-check ‖f̂‖₂² = N⁻¹‖f‖₂².
    pub plancherel_ok: bool,
    pub restriction_q: f64,
    /// Measured ‖f̂‖_q.
    pub restriction_norm: f64,
    pub restriction_budget: f64,
    pub restriction_ok: bool,
}

/// Measure the pseudorandomness hypotheses of (ν, f) against their budgets.
/// A failing certificate is a valid output.
pub fn certify_pseudorandom(
    nu: &DensityFunction,
    f: &DensityFunction,
    q: f64,
    restriction_budget: f64,
    eta_budget: f64,
) -> PseudorandomCertificate {
    let nu_spec = fourier::dft(nu);
    let eta = eta_from_spectrum(&nu_spec);
    let f_spec = fourier::dft(f);
    let l2_norm_sq = f_spec.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>();
    let plancherel_rhs = f.values().iter().map(|v| v * v).sum::<f64>() / f.modulus() as f64;
    let plancherel_ok = crate::tol::close(l2_norm_sq, plancherel_rhs, crate::tol::REL_TRANSFORM);
    let restriction_norm = fourier::spectral_lq_norm(&f_spec, q).expect("q >= 1");
    PseudorandomCertificate {
        eta,
        eta_budget,
        eta_ok: eta <= eta_budget,
        l2_norm_sq,
        plancherel_ok,
        restriction_q: q,
        restriction_norm,
        restriction_budget,
        restriction_ok: restriction_norm <= restriction_budget,
    }
}

/// ‖ν̂ − 1_{ξ=0}‖_∞ from an already-computed spectrum.
pub fn eta_from_spectrum(nu_spec: &Spectrum) -> f64 {
    let at_zero = (nu_spec.coeff(0) - num_complex::Complex64::new(1.0, 0.0)).norm();
    at_zero.max(nu_spec.sup_norm_off_zero())
}

/// Build A ⊆ W by the given strategy, targeting |A| ≥ α|W|.
pub fn adversarial_subset(
    sample: &RandomSetSample,
    alpha: f64,
    strategy: Strategy,
) -> Result<RandomSetSample, RandomModelError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(RandomModelError::InvalidAlpha(alpha));
    }
    if sample.w.is_empty() {
        return Err(RandomModelError::EmptyW);
    }
    let target = (alpha * sample.w.len() as f64).ceil() as usize;
    let mut a = match strategy {
        Strategy::UniformRandom => {
            let mut pool = sample.w.clone();
            SeqRng::new(sample.seed, STREAM_UNIFORM_SUBSET).shuffle(&mut pool);
            pool.truncate(target.min(pool.len()));
            pool
        }
        Strategy::ProgressionIntersect => progression_intersect(sample, alpha),
        Strategy::SquareDifferenceFreeGreedy => greedy_square_difference_free(sample),
    };
    a.sort_unstable();
    let shortfall = a.len() < target;
    let alpha_achieved = a.len() as f64 / sample.w.len() as f64;
    Ok(RandomSetSample {
        a: Some(a),
        strategy: Some(strategy),
        alpha: Some(alpha_achieved),
        shortfall,
        ..sample.clone()
    })
}

/// The arithmetic progression used by [`Strategy::ProgressionIntersect`]:
/// step ⌈1/α⌉, length ⌈αN⌉, starting at 0.
pub fn strategy_progression(n: usize, alpha: f64) -> Vec<usize> {
    let step = (1.0 / alpha).ceil() as usize;
    let len = ((alpha * n as f64).ceil() as usize).clamp(1, n);
    (0..len).map(|j| (j * step) % n).collect()
}

fn progression_intersect(sample: &RandomSetSample, alpha: f64) -> Vec<usize> {
    let n = sample.modulus;
    let prog = strategy_progression(n, alpha);
    // counts[x] = |W ∩ (P + x)|, built by scattering each (w, p) pair.
    let mut counts = vec![0u32; n];
    for &w in &sample.w {
        for &p in &prog {
            counts[(w + n - p) % n] += 1;
        }
    }
    let best_x = (0..n)
        .max_by_key(|&x| (counts[x], std::cmp::Reverse(x)))
        .unwrap();
    let shifted = BitSet::from_sorted(
        n,
        &prog.iter().map(|&p| (p + best_x) % n).collect::<Vec<_>>(),
    );
    sample
        .w
        .iter()
        .copied()
        .filter(|&w| shifted.contains(w))
        .collect()
}

fn greedy_square_difference_free(sample: &RandomSetSample) -> Vec<usize> {
    let n = sample.modulus;
    let shifts = structures::power_shifts(n, 2);
    let mut order = sample.w.clone();
    SeqRng::new(sample.seed, STREAM_GREEDY_ORDER).shuffle(&mut order);
    let mut chosen = BitSet::new(n);
    let mut a = Vec::new();
    for &w in &order {
        let conflict = shifts
            .iter()
            .any(|&s| chosen.contains((w + s) % n) || chosen.contains((w + n - s) % n));
        if !conflict {
            chosen.insert(w);
            a.push(w);
        }
    }
    a
}
