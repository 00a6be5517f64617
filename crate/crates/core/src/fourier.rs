//! Fourier analysis on Z_N with the normalization pair used throughout the
//! library: the forward transform is an expectation,
//!
//! ```text
//! f̂(ξ) = (1/N) · Σ_x f(x) · e^{-2πi x ξ / N},
//! ```
//!
//! and inversion is a plain sum, f(x) = Σ_ξ f̂(ξ) · e^{+2πi x ξ / N}.
//! Convolution is the unnormalized (f∗g)(x) = Σ_y f(y) g(x−y), so the
//! identity N·f̂·ĝ = (f∗g)^ holds.
//!
//! The fast path is a Bluestein chirp-z reduction to a power-of-two length,
//! so prime N (the common case) costs O(N log N) with one code path.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum FourierError {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("values length {got} does not match modulus {modulus}")]
    LengthMismatch { modulus: usize, got: usize },
    #[error("value at index {index} is {value}, expected a finite nonnegative real")]
    InvalidDensityValue { index: usize, value: f64 },
    #[error("value at index {index} is {value}, expected a finite real")]
    NonFiniteValue { index: usize, value: f64 },
    #[error("norm order q = {0} rejected: need q >= 1 (or infinity)")]
    InvalidNormOrder(f64),
}

/// A real-valued function on Z_N, indexed by x ∈ {0, …, N−1}.
pub trait ZnFunction {
    fn modulus(&self) -> usize;
    fn values(&self) -> &[f64];

    fn value(&self, x: usize) -> f64 {
        self.values()[x % self.modulus()]
    }

    /// E f = N⁻¹ Σ_x f(x).
    fn mean(&self) -> f64 {
        self.values().iter().sum::<f64>() / self.modulus() as f64
    }

    /// ‖f‖_p = (Σ_x |f(x)|^p)^{1/p}, a plain sum rather than an expectation.
    fn norm_p(&self, p: f64) -> f64 {
        assert!(p >= 1.0);
        self.values()
            .iter()
            .map(|v| v.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    fn sup_norm(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Nonnegative function on Z_N: densities, majorants, indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityFunction {
    modulus: usize,
    values: Vec<f64>,
}

/// Signed function on Z_N: balanced functions and error parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BalancedFunction {
    modulus: usize,
    values: Vec<f64>,
}

fn check_len(modulus: usize, len: usize) -> Result<(), FourierError> {
    if modulus == 0 {
        return Err(FourierError::ZeroModulus);
    }
    if len != modulus {
        return Err(FourierError::LengthMismatch { modulus, got: len });
    }
    Ok(())
}

impl DensityFunction {
    pub fn new(modulus: usize, values: Vec<f64>) -> Result<Self, FourierError> {
        check_len(modulus, values.len())?;
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(FourierError::InvalidDensityValue { index, value });
            }
        }
        Ok(DensityFunction { modulus, values })
    }

    pub fn constant(modulus: usize, c: f64) -> Result<Self, FourierError> {
        DensityFunction::new(modulus, vec![c; modulus])
    }

    /// Indicator of a set of residues (duplicates collapse).
    pub fn indicator(modulus: usize, elems: &[usize]) -> Result<Self, FourierError> {
        Self::scaled_indicator(modulus, elems, 1.0)
    }

    /// `scale`·1_S, e.g. the majorant p⁻¹·W(x).
    pub fn scaled_indicator(
        modulus: usize,
        elems: &[usize],
        scale: f64,
    ) -> Result<Self, FourierError> {
        if modulus == 0 {
            return Err(FourierError::ZeroModulus);
        }
        let mut values = vec![0.0; modulus];
        for &x in elems {
            values[x % modulus] = scale;
        }
        DensityFunction::new(modulus, values)
    }

    /// Pointwise product with the indicator of `elems` (restriction f·1_S).
    pub fn restrict_to(&self, elems: &[usize]) -> DensityFunction {
        let mut values = vec![0.0; self.modulus];
        for &x in elems {
            let x = x % self.modulus;
            values[x] = self.values[x];
        }
        DensityFunction {
            modulus: self.modulus,
            values,
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl BalancedFunction {
    pub fn new(modulus: usize, values: Vec<f64>) -> Result<Self, FourierError> {
        check_len(modulus, values.len())?;
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(FourierError::NonFiniteValue { index, value });
            }
        }
        Ok(BalancedFunction { modulus, values })
    }

    /// Reinterpret as a density if no value is below −tol; values in
    /// [−tol, 0) are clamped to zero.
    pub fn try_into_density(self, tol: f64) -> Result<DensityFunction, FourierError> {
        let modulus = self.modulus;
        let mut values = self.values;
        for (index, v) in values.iter_mut().enumerate() {
            if *v < -tol {
                return Err(FourierError::InvalidDensityValue { index, value: *v });
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        DensityFunction::new(modulus, values)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl ZnFunction for DensityFunction {
    fn modulus(&self) -> usize {
        self.modulus
    }
    fn values(&self) -> &[f64] {
        &self.values
    }
}

impl ZnFunction for BalancedFunction {
    fn modulus(&self) -> usize {
        self.modulus
    }
    fn values(&self) -> &[f64] {
        &self.values
    }
}

impl<T: ZnFunction + ?Sized> ZnFunction for &T {
    fn modulus(&self) -> usize {
        (**self).modulus()
    }
    fn values(&self) -> &[f64] {
        (**self).values()
    }
}

/// The N Fourier coefficients of a function on Z_N, coeffs\[ξ\] = f̂(ξ).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    modulus: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(modulus: usize, coeffs: Vec<Complex64>) -> Result<Self, FourierError> {
        check_len(modulus, coeffs.len())?;
        Ok(Spectrum { modulus, coeffs })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, xi: usize) -> Complex64 {
        self.coeffs[xi % self.modulus]
    }

    /// max_{ξ≠0} |f̂(ξ)|, the off-zero sup norm used by pseudorandomness
    /// certificates.
    pub fn sup_norm_off_zero(&self) -> f64 {
        self.coeffs.iter().skip(1).fold(0.0, |m, c| m.max(c.norm()))
    }
}

// ---------------------------------------------------------------------------
// Transform engine: radix-2 FFT + Bluestein chirp-z for arbitrary length.
// ---------------------------------------------------------------------------

struct Radix2 {
    len: usize,
    // e^{-2πi k / len} for k < len/2
    twiddles: Vec<Complex64>,
}

impl Radix2 {
    fn new(len: usize) -> Self {
        assert!(len.is_power_of_two());
        let twiddles = (0..len / 2)
            .map(|k| {
                let theta = -2.0 * std::f64::consts::PI * k as f64 / len as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        Radix2 { len, twiddles }
    }

    /// In-place forward DFT (e^{-2πi jk/len}); `inverse` conjugates the
    /// twiddles and scales by 1/len.
    fn process(&self, a: &mut [Complex64], inverse: bool) {
        let n = self.len;
        debug_assert_eq!(a.len(), n);
        // bit-reversal permutation
        let mut j = 0usize;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j |= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut width = 2;
        while width <= n {
            let stride = n / width;
            for chunk in a.chunks_exact_mut(width) {
                let (lo, hi) = chunk.split_at_mut(width / 2);
                for (k, (l, h)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let t = *h * w;
                    *h = *l - t;
                    *l += t;
                }
            }
            width <<= 1;
        }
        if inverse {
            let scale = 1.0 / n as f64;
            for v in a.iter_mut() {
                *v *= scale;
            }
        }
    }
}

/// Bluestein plan for an unnormalized DFT of arbitrary length n:
/// X_k = Σ_j x_j e^{-2πi jk/n}, computed as a convolution of length m = 2^t.
struct Plan {
    n: usize,
    // chirp[j] = e^{-πi j²/n}, argument reduced with j² mod 2n kept exact.
    chirp: Vec<Complex64>,
    // FFT of the conjugate-chirp kernel, padded cyclically to length m.
    kernel_fft: Vec<Complex64>,
    fft: Radix2,
}

impl Plan {
    fn new(n: usize) -> Self {
        assert!(n >= 1);
        let m = (2 * n - 1).next_power_of_two();
        let fft = Radix2::new(m);
        let chirp: Vec<Complex64> = (0..n)
            .map(|j| {
                let j = j as u128;
                let sq = (j * j) % (2 * n as u128);
                let theta = -std::f64::consts::PI * sq as f64 / n as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let mut kernel = vec![Complex64::new(0.0, 0.0); m];
        kernel[0] = chirp[0].conj();
        for t in 1..n {
            let c = chirp[t].conj();
            kernel[t] = c;
            kernel[m - t] = c;
        }
        fft.process(&mut kernel, false);
        Plan {
            n,
            chirp,
            kernel_fft: kernel,
            fft,
        }
    }

    /// Unnormalized forward DFT of x (length n).
    fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.n);
        if self.n == 1 {
            return vec![x[0]];
        }
        let m = self.kernel_fft.len();
        let mut a = vec![Complex64::new(0.0, 0.0); m];
        for j in 0..self.n {
            a[j] = x[j] * self.chirp[j];
        }
        self.fft.process(&mut a, false);
        for (av, kv) in a.iter_mut().zip(&self.kernel_fft) {
            *av *= kv;
        }
        self.fft.process(&mut a, true);
        (0..self.n).map(|k| a[k] * self.chirp[k]).collect()
    }
}

enum Engine {
    Radix2(Radix2),
    Bluestein(Plan),
}

impl Engine {
    fn new(n: usize) -> Self {
        if n.is_power_of_two() {
            Engine::Radix2(Radix2::new(n))
        } else {
            Engine::Bluestein(Plan::new(n))
        }
    }

    fn forward(&self, x: &[Complex64]) -> Vec<Complex64> {
        match self {
            Engine::Radix2(fft) => {
                let mut buf = x.to_vec();
                fft.process(&mut buf, false);
                buf
            }
            Engine::Bluestein(plan) => plan.forward(x),
        }
    }
}

static PLANS: LazyLock<Mutex<HashMap<usize, Arc<Engine>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn engine(n: usize) -> Arc<Engine> {
    let mut map = PLANS.lock().unwrap();
    map.entry(n)
        .or_insert_with(|| Arc::new(Engine::new(n)))
        .clone()
}

/// Unnormalized DFT sum Σ_j x_j e^{-2πi jk/n}.
fn dft_sum(x: &[Complex64]) -> Vec<Complex64> {
    engine(x.len()).forward(x)
}

/// Unnormalized inverse sum Σ_ξ F_ξ e^{+2πi xξ/n}, via conjugation.
fn inverse_sum(f: &[Complex64]) -> Vec<Complex64> {
    let conj: Vec<Complex64> = f.iter().map(|c| c.conj()).collect();
    dft_sum(&conj).into_iter().map(|c| c.conj()).collect()
}

// ---------------------------------------------------------------------------
// Public operations.
// ---------------------------------------------------------------------------

/// f̂(ξ) = (1/N) Σ_x f(x) e^{-2πixξ/N}.
pub fn dft(f: &impl ZnFunction) -> Spectrum {
    let n = f.modulus();
    let buf: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let scale = 1.0 / n as f64;
    let coeffs = dft_sum(&buf).into_iter().map(|c| c * scale).collect();
    Spectrum { modulus: n, coeffs }
}

/// f(x) = Σ_ξ f̂(ξ) e^{+2πixξ/N}. Returns the signed function; use
/// [`BalancedFunction::try_into_density`] when the source was nonnegative.
pub fn inverse_dft(spec: &Spectrum) -> BalancedFunction {
    let values = inverse_sum(&spec.coeffs)
        .into_iter()
        .map(|c| c.re)
        .collect();
    BalancedFunction {
        modulus: spec.modulus,
        values,
    }
}

fn convolve_raw(f: &[f64], g: &[f64], n: usize) -> Vec<f64> {
    let fb: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let gb: Vec<Complex64> = g.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let fs = dft_sum(&fb);
    let gs = dft_sum(&gb);
    // (f∗g)^sum = f̂sum · ĝsum; invert with the 1/N the plain sums lack.
    let prod: Vec<Complex64> = fs.iter().zip(&gs).map(|(a, b)| a * b).collect();
    let scale = 1.0 / n as f64;
    inverse_sum(&prod)
        .into_iter()
        .map(|c| c.re * scale)
        .collect()
}

/// Circular convolution (f∗g)(x) = Σ_y f(y) g(x−y) of nonnegative inputs.
/// Values within transform round-off of zero are clamped to exact zero, so
/// the support of the result matches the exact convolution's.
pub fn convolve(f: &DensityFunction, g: &DensityFunction) -> Result<DensityFunction, FourierError> {
    if f.modulus != g.modulus {
        return Err(FourierError::ModulusMismatch {
            left: f.modulus,
            right: g.modulus,
        });
    }
    let n = f.modulus;
    let mut values = convolve_raw(&f.values, &g.values, n);
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let floor = crate::tol::CONV_ZERO_FLOOR * scale;
    for v in values.iter_mut() {
        debug_assert!(*v > -1e-6 * scale, "convolution value {v} below round-off");
        if *v <= floor {
            *v = 0.0;
        }
    }
    Ok(DensityFunction { modulus: n, values })
}

/// Circular convolution of possibly-signed inputs.
pub fn convolve_signed(
    f: &impl ZnFunction,
    g: &impl ZnFunction,
) -> Result<BalancedFunction, FourierError> {
    if f.modulus() != g.modulus() {
        return Err(FourierError::ModulusMismatch {
            left: f.modulus(),
            right: g.modulus(),
        });
    }
    let n = f.modulus();
    Ok(BalancedFunction {
        modulus: n,
        values: convolve_raw(f.values(), g.values(), n),
    })
}

/// ‖f̂‖_q = (Σ_ξ |coeffs\[ξ\]|^q)^{1/q}; q = ∞ gives the max modulus.
pub fn spectral_lq_norm(spec: &Spectrum, q: f64) -> Result<f64, FourierError> {
    if q.is_infinite() && q > 0.0 {
        return Ok(spec.coeffs.iter().fold(0.0, |m, c| m.max(c.norm())));
    }
    if q.is_nan() || q < 1.0 {
        return Err(FourierError::InvalidNormOrder(q));
    }
    Ok(spec
        .coeffs
        .iter()
        .map(|c| c.norm().powf(q))
        .sum::<f64>()
        .powf(1.0 / q))
}

/// Reflection f̃(x) = f(−x mod N).
pub fn reflect(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    for (x, &v) in values.iter().enumerate() {
        out[(n - x) % n] = v;
    }
    out
}
