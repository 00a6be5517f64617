//! Bohr sets in Z_N: materialization, regularity testing, and regular-radius
//! selection on a deterministic grid.
//!
//! A Bohr set B(Λ, δ) is {x : |e^{2πixξ/N} − 1| ≤ δ for all ξ ∈ Λ}, shifted
//! by b. Membership is decided by direct evaluation of
//! |e^{2πixξ/N} − 1| = 2|sin(πxξ/N)| per (x, ξ), with the product xξ reduced
//! mod N in integers before entering sin.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::tol;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum BohrError {
    #[error("radius {0} outside (0, 2)")]
    RadiusOutOfRange(f64),
    #[error("outer radius {0} (= (1+c0²)δ) must stay below 2")]
    OuterRadiusTooLarge(f64),
    #[error("c0 = {0} outside (0, 1)")]
    InvalidC0(f64),
    #[error("rank {rank} exceeds sqrt(c0)·N = {limit}")]
    RankTooLarge { rank: usize, limit: f64 },
    #[error("modulus {n} exceeds the materialization cap {cap}")]
    ModulusTooLarge { n: usize, cap: usize },
    #[error(
        "no regular radius on the {grid}-point grid below {delta0}; smallest defect {min_defect}"
    )]
    NoRegularRadius {
        grid: usize,
        delta0: f64,
        min_defect: f64,
        defects: Vec<f64>,
    },
}

/// Regularity test record for B(Λ, δ): the (1±c0²)δ annulus measure against
/// c0 · |B(Λ, δ)|.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub c0: f64,
    pub outer_count: usize,
    pub inner_count: usize,
    pub base_count: usize,
    pub defect: f64,
    pub regular: bool,
}

/// A materialized Bohr set b + B(Λ, δ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BohrSet {
    modulus: usize,
    shift: usize,
    frequencies: BTreeSet<usize>,
    radius: f64,
    elements: Vec<usize>,
    regularity: Option<RegularityReport>,
}

#[inline]
fn char_distance(x: usize, xi: usize, n: usize) -> f64 {
    // |e^{2πixξ/N} − 1| = 2 sin(π·m/N) with m = xξ mod N and the sine
    // argument kept in [0, π).
    let m = ((x as u128 * xi as u128) % n as u128) as f64;
    2.0 * (std::f64::consts::PI * m / n as f64).sin()
}

#[inline]
fn is_member(x: usize, freqs: &[usize], n: usize, delta: f64) -> bool {
    freqs.iter().all(|&xi| char_distance(x, xi, n) <= delta)
}

fn check_radius(delta: f64) -> Result<(), BohrError> {
    if !(delta > 0.0 && delta < 2.0) {
        return Err(BohrError::RadiusOutOfRange(delta));
    }
    Ok(())
}

fn check_modulus(n: usize) -> Result<(), BohrError> {
    if n > tol::BOHR_MATERIALIZE_CAP {
        return Err(BohrError::ModulusTooLarge {
            n,
            cap: tol::BOHR_MATERIALIZE_CAP,
        });
    }
    Ok(())
}

/// |B(Λ, δ)| without materializing the element list.
pub fn count_elements(n: usize, freqs: &[usize], delta: f64) -> usize {
    (0..n).filter(|&x| is_member(x, freqs, n, delta)).count()
}

/// Materialize b + B(Λ, δ).
pub fn bohr_elements(
    n: usize,
    frequencies: &BTreeSet<usize>,
    delta: f64,
    shift: usize,
) -> Result<BohrSet, BohrError> {
    check_radius(delta)?;
    check_modulus(n)?;
    let freqs: Vec<usize> = frequencies.iter().map(|&xi| xi % n).collect();
    let shift = shift % n;
    let mut elements: Vec<usize> = (0..n)
        .filter(|&x| is_member(x, &freqs, n, delta))
        .map(|x| (x + shift) % n)
        .collect();
    elements.sort_unstable();
    Ok(BohrSet {
        modulus: n,
        shift,
        frequencies: frequencies.iter().map(|&xi| xi % n).collect(),
        radius: delta,
        elements,
        regularity: None,
    })
}

/// Regularity test for B(Λ, δ) per the annulus definition.
pub fn regularity_report(
    n: usize,
    frequencies: &BTreeSet<usize>,
    delta: f64,
    c0: f64,
) -> Result<RegularityReport, BohrError> {
    check_radius(delta)?;
    check_modulus(n)?;
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(BohrError::InvalidC0(c0));
    }
    let outer_radius = (1.0 + c0 * c0) * delta;
    if outer_radius >= 2.0 {
        return Err(BohrError::OuterRadiusTooLarge(outer_radius));
    }
    let freqs: Vec<usize> = frequencies.iter().map(|&xi| xi % n).collect();
    let outer_count = count_elements(n, &freqs, outer_radius);
    let inner_count = count_elements(n, &freqs, (1.0 - c0 * c0) * delta);
    let base_count = count_elements(n, &freqs, delta);
    debug_assert!(outer_count >= inner_count && base_count >= 1);
    let defect = (outer_count - inner_count) as f64 / base_count as f64;
    Ok(RegularityReport {
        c0,
        outer_count,
        inner_count,
        base_count,
        defect,
        regular: defect <= c0,
    })
}

/// Largest radius on a fixed 256-point descending grid strictly inside
/// (δ0/2, δ0) whose regularity verdict is positive.
///
/// Candidates whose outer radius (1+c0²)δ would reach 2 are recorded with an
/// infinite defect and skipped. The error carries every candidate's defect.
pub fn find_regular_radius(
    n: usize,
    frequencies: &BTreeSet<usize>,
    delta0: f64,
    c0: f64,
) -> Result<f64, BohrError> {
    check_radius(delta0)?;
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(BohrError::InvalidC0(c0));
    }
    let limit = c0.sqrt() * n as f64;
    if frequencies.len() as f64 > limit {
        return Err(BohrError::RankTooLarge {
            rank: frequencies.len(),
            limit,
        });
    }
    let grid = tol::REGULAR_RADIUS_GRID;
    let step = (delta0 / 2.0) / (grid + 1) as f64;
    let mut defects = Vec::with_capacity(grid);
    for j in 1..=grid {
        let delta = delta0 - j as f64 * step;
        match regularity_report(n, frequencies, delta, c0) {
            Ok(report) if report.regular => {
                monitor_size_bound(n, frequencies, delta, c0, report.base_count);
                return Ok(delta);
            }
            Ok(report) => defects.push(report.defect),
            Err(_) => defects.push(f64::INFINITY),
        }
    }
    let min_defect = defects.iter().copied().fold(f64::INFINITY, f64::min);
    Err(BohrError::NoRegularRadius {
        grid,
        delta0,
        min_defect,
        defects,
    })
}

/// Monitored size bound P(B) ≥ (c·c0²·δ)^|Λ| for regular sets; a violation
/// points at a regularity-verdict bug, so it warns rather than fails.
fn monitor_size_bound(n: usize, frequencies: &BTreeSet<usize>, delta: f64, c0: f64, count: usize) {
    let rank = frequencies.iter().filter(|&&xi| xi % n != 0).count();
    let bound = (tol::BOHR_SIZE_C * c0 * c0 * delta).powi(rank as i32);
    let measure = count as f64 / n as f64;
    if measure < bound {
        log::warn!(
            "regular Bohr set size bound violated: P(B) = {measure:.3e} < {bound:.3e} \
             (N={n}, |Λ|={rank}, δ={delta:.4}, c0={c0})"
        );
    }
}

impl BohrSet {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn frequencies(&self) -> &BTreeSet<usize> {
        &self.frequencies
    }

    /// Rank d = |Λ|.
    pub fn rank(&self) -> usize {
        self.frequencies.len()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Sorted members of b + B(Λ, δ).
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// |B| / N.
    pub fn measure(&self) -> f64 {
        self.elements.len() as f64 / self.modulus as f64
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn regularity(&self) -> Option<&RegularityReport> {
        self.regularity.as_ref()
    }

    /// Run (and cache) the regularity test for this set's (Λ, δ).
    pub fn test_regularity(&mut self, c0: f64) -> Result<&RegularityReport, BohrError> {
        if self.regularity.as_ref().map(|r| r.c0) != Some(c0) {
            self.regularity = Some(regularity_report(
                self.modulus,
                &self.frequencies,
                self.radius,
                c0,
            )?);
        }
        Ok(self.regularity.as_ref().unwrap())
    }

    /// Same (Λ, δ) re-centred at a different shift.
    pub fn with_shift(&self, shift: usize) -> BohrSet {
        let n = self.modulus;
        let shift = shift % n;
        let old = self.shift;
        let mut elements: Vec<usize> = self
            .elements
            .iter()
            .map(|&e| (e + n - old + shift) % n)
            .collect();
        elements.sort_unstable();
        BohrSet {
            modulus: n,
            shift,
            frequencies: self.frequencies.clone(),
            radius: self.radius,
            elements,
            regularity: self.regularity.clone(),
        }
    }

    /// The unshifted kernel B(Λ, δ) as an indicator-ready element list.
    pub fn kernel_elements(&self) -> Vec<usize> {
        let n = self.modulus;
        let old = self.shift;
        let mut v: Vec<usize> = self.elements.iter().map(|&e| (e + n - old) % n).collect();
        v.sort_unstable();
        v
    }
}
