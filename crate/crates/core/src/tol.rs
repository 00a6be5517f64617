//! Central tolerance table and calibrated constants.
//!
//! Every numeric threshold used by the library and its certificate checks
//! lives here, so that a tolerance is never an ad-hoc literal at a call site.

/// Relative tolerance for the fast transform against the naive quadratic sum.
pub const REL_TRANSFORM: f64 = 1e-9;

/// Absolute per-entry tolerance for the dft/inverse_dft round trip.
pub const ABS_ROUNDTRIP: f64 = 1e-9;

/// Absolute tolerance for derived spectral identities (Plancherel,
/// N·f̂·ĝ = (f∗g)^).
pub const ABS_IDENTITY: f64 = 1e-8;

/// Absolute pointwise tolerance for exact additivity f = f1 + f2.
pub const ABS_ADDITIVITY: f64 = 1e-9;

/// Absolute tolerance on means (E f1 = E f, mean-zero of balanced functions).
pub const ABS_MEAN: f64 = 1e-9;

/// Slack for one-sided spectral dominance checks such as |f̂_i(ξ)| ≤ |f̂(ξ)|,
/// applied as `lhs ≤ rhs + DOMINANCE_SLACK * (1 + rhs)`.
pub const DOMINANCE_SLACK: f64 = 1e-9;

/// Relative tolerance for L² sums over Bohr sets against direct summation.
pub const REL_L2_BOHR: f64 = 1e-6;

/// Nonnegative convolution outputs below this fraction of the maximum value
/// are transform round-off and clamp to exact zero, keeping supports and
/// tie-breaks faithful to the exact result.
pub const CONV_ZERO_FLOOR: f64 = 1e-10;

/// Default regularity constant c0; any small positive value works, this one
/// is the shipped default.
pub const C0_DEFAULT: f64 = 0.1;

/// Calibrated absolute constant in the regular Bohr set size bound
/// P(B) ≥ (BOHR_SIZE_C · c0² · δ)^|Λ|. Violations are warned about, not
/// fatal: they indicate a regularity-verdict bug.
pub const BOHR_SIZE_C: f64 = 1.0 / (2.0 * std::f64::consts::PI);

/// Number of candidates in the deterministic regular-radius grid.
pub const REGULAR_RADIUS_GRID: usize = 256;

/// Default pseudorandomness budget factor: η must be ≤ ETA_BUDGET_FACTOR ·
/// N^{-1/5} for the certificate to pass at finite N.
pub const ETA_BUDGET_FACTOR: f64 = 3.0;

/// Default restriction-norm budget M (the source leaves M implicit; this is
/// monitored, not derived).
pub const M_DEFAULT: f64 = 10.0;

/// Density-increment growth factor 1 + 2⁻⁵ per increment step.
pub const INCREMENT_GROWTH: f64 = 1.0 + 0.03125;

/// Cap factor for the greedy frequency selection: |Λ| ≤ ⌈16·α⁻²·ln σ⁻¹⌉.
pub const CHANG_CAP_FACTOR: f64 = 16.0;

/// Monitored budget factor for the large-spectrum energy check: the energy is
/// flagged when below α²/4 − ENERGY_BUDGET_FACTOR · d·δ′/δ.
pub const ENERGY_BUDGET_FACTOR: f64 = 8.0;

/// Frozen constant for the k-th power spectral bound ‖P̂_k‖_{6k} ≤ c₁·N^{1/k−1},
/// fitted once over k ∈ {2,3,4}, N ∈ {1009, 10007} (max measured 0.787 at
/// k=4, N=1009) and regression-checked.
pub const WARING_C1: f64 = 1.0;

/// Exhaustive longest-AP search cap; beyond this the step-sieved variant runs.
pub const LONGEST_AP_EXHAUSTIVE_CAP: usize = 200_000;

/// Cap on the modulus for materialized Bohr set operations.
pub const BOHR_MATERIALIZE_CAP: usize = 1 << 22;

/// Relative + absolute composite check: |a − b| ≤ tol · (1 + max(|a|,|b|)).
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}
