//! The six computable nonlocal-correlation measures and their exact
//! normalization factors.
//!
//! Correlance gauges the squared Hilbert-Schmidt distance between a state and
//! its own reduction product; the discordance family sifts that value by
//! coherence, and strong discordance measures the excess over the most
//! correlated diagonal state. Normalization factors are closed-form and exact
//! for every discrete mode structure.

use serde::{Deserialize, Serialize};

use crate::error::{CorrkitError, Result};
use crate::state::{DensityMatrix, ModeStructure, Tolerances};

/// Exact normalization data for one mode structure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationReport {
    pub structure: ModeStructure,
    /// Equal-probability level count minimizing the combined reduction purity.
    pub l_star: usize,
    /// Minimum physical reduction purity of each mode at `l_star`.
    pub per_mode_purity: Vec<f64>,
    pub n_correlance: f64,
    pub n_diag_correlance: f64,
    pub n_strong_discordance: f64,
}

/// Named raw/normalized value pair produced by the measure bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Correlance,
    DiagCorrelance,
    Discordance,
    DiagonalDiscordance,
    StrongDiscordance,
    RawStrongDiscordance,
    RawDiagonalStrongDiscordance,
    Nondiagonality,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub kind: MeasureKind,
    pub raw: f64,
    /// Raw value divided by the matching normalization factor; equals `raw`
    /// for the kinds that are defined unnormalized.
    pub normalized: f64,
}

fn require_multimode(structure: &ModeStructure) -> Result<()> {
    if structure.mode_count() < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "nonlocal correlation requires at least two modes".into(),
        });
    }
    Ok(())
}

/// Exact integer numerator of the minimum physical reduction purity; the
/// purity itself is `numerator / L^2`.
fn mp_numerator(n_m: u128, levels: u128) -> u128 {
    let rem = levels % n_m;
    let q = levels / n_m;
    rem * (1 + q) * (1 + q) + (n_m - rem) * q * q
}

/// Minimum physical reduction purity of an `n_m`-level mode whose pure
/// maximally entangled parent state has `levels` equal nonzero probabilities.
pub fn p_mp(n_m: usize, levels: usize) -> f64 {
    assert!(n_m >= 1 && levels >= 1, "p_mp arguments must be >= 1");
    mp_numerator(n_m as u128, levels as u128) as f64 / (levels * levels) as f64
}

/// Exact rational comparison key for the combined-mixedness objective at a
/// given level count: returns (numerator, denominator) of `1 - M(L)` scaled
/// by the mode count.
fn objective_fraction(dims: &[usize], levels: u128) -> (u128, u128) {
    // Each nontrivial mode contributes (n_m * num_m - L^2) / (L^2 (n_m - 1));
    // trivial modes (n_m = 1) contribute the limit value 1.
    let nontrivial: Vec<u128> = dims
        .iter()
        .filter(|&&d| d > 1)
        .map(|&d| d as u128)
        .collect();
    let l2 = levels * levels;
    let denom_prod: u128 = nontrivial.iter().map(|&d| d - 1).product();
    let denom = l2 * denom_prod;
    let trivial_count = (dims.len() - nontrivial.len()) as u128;
    let mut numer = trivial_count * denom;
    for (i, &d) in nontrivial.iter().enumerate() {
        let term = d * mp_numerator(d, levels) - l2;
        let mut others = 1u128;
        for (j, &e) in nontrivial.iter().enumerate() {
            if j != i {
                others *= e - 1;
            }
        }
        numer += term * others;
    }
    (numer, denom)
}

/// Smallest level count minimizing the combined reduction mixedness over
/// `L in 2..=n/n_max`. Exact rational comparisons make the tie-break precise.
pub fn l_star(structure: &ModeStructure) -> Result<usize> {
    require_multimode(structure)?;
    let top = structure.nmaxnot();
    if top < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: format!(
                "structure {structure} has no entangled-pair capacity (n/n_max = {top})"
            ),
        });
    }
    let dims = structure.dims();
    let mut best_l = 2usize;
    let mut best = objective_fraction(dims, 2);
    for l in 3..=top {
        let cand = objective_fraction(dims, l as u128);
        // cand < best  <=>  cand.0 * best.1 < best.0 * cand.1
        if cand.0 * best.1 < best.0 * cand.1 {
            best = cand;
            best_l = l;
        }
    }
    Ok(best_l)
}

/// Correlance normalization from the per-mode minimum reduction purities.
pub fn correlance_norm_from_purities(structure: &ModeStructure) -> Result<(usize, Vec<f64>, f64)> {
    let ls = l_star(structure)?;
    let l2 = (ls * ls) as u128;
    let mut purity_num = 1u128;
    let mut denom = 1u128;
    let mut purities = Vec::with_capacity(structure.mode_count());
    for &d in structure.dims() {
        let num = mp_numerator(d as u128, ls as u128);
        purities.push(num as f64 / l2 as f64);
        purity_num *= num;
        denom *= l2;
    }
    let norm = 1.0 - purity_num as f64 / denom as f64;
    Ok((ls, purities, norm))
}

/// Exact correlance normalization as a reduced fraction; the f64 routes are
/// roundings of this value.
pub fn correlance_norm_fraction(structure: &ModeStructure) -> Result<(u128, u128)> {
    let ls = l_star(structure)? as u128;
    let mut purity_num = 1u128;
    let mut denom = 1u128;
    for &d in structure.dims() {
        purity_num *= mp_numerator(d as u128, ls);
        denom *= ls * ls;
    }
    let num = denom - purity_num;
    let g = gcd(num, denom);
    Ok((num / g, denom / g))
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Correlance normalization for structures with at least two largest modes,
/// where all reductions of a maximally entangled state are maximally mixed.
pub fn correlance_norm_multimax(structure: &ModeStructure) -> Result<f64> {
    require_multimode(structure)?;
    if structure.largest_mode_count() < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: format!("structure {structure} has a single largest mode"),
        });
    }
    Ok(1.0 - 1.0 / structure.total_dim() as f64)
}

/// Correlance normalization via the largest-mode shortcut: only the
/// nominally largest mode has a non-maximally-mixed reduction.
pub fn correlance_norm_largest_mode(structure: &ModeStructure) -> Result<f64> {
    let ls = l_star(structure)?;
    let n_max = structure.n_max() as u128;
    let num = mp_numerator(n_max, ls as u128);
    let denom = (ls * ls) as u128 * structure.nmaxnot() as u128;
    Ok(1.0 - num as f64 / denom as f64)
}

/// Exact correlance normalization factor for the structure.
pub fn correlance_norm(structure: &ModeStructure) -> Result<f64> {
    if structure.mode_count() >= 2 && structure.largest_mode_count() >= 2 {
        correlance_norm_multimax(structure)
    } else {
        correlance_norm_from_purities(structure).map(|(_, _, norm)| norm)
    }
}

/// Diagonal-correlance normalization, `1/2 - 1/2^N`, for N nontrivial modes.
pub fn diag_correlance_norm(mode_count: usize) -> f64 {
    0.5 - 0.5f64.powi(mode_count as i32)
}

fn effective_mode_count(structure: &ModeStructure) -> Result<usize> {
    let n = structure.nontrivial_mode_count();
    if n < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: format!("structure {structure} has fewer than two nontrivial modes"),
        });
    }
    Ok(n)
}

/// Correlance of the most correlated diagonal state; the strong-discordance
/// threshold. Size-1 modes do not count toward N: their reductions are pure,
/// so the extremal diagonal state's raw correlance is the effective-N value.
pub fn diag_max_correlance(structure: &ModeStructure) -> Result<f64> {
    let nc = correlance_norm(structure)?;
    let n = effective_mode_count(structure)? as i32;
    Ok((2.0f64.powi(n - 1) - 1.0) / (2.0f64.powi(n) * nc))
}

/// Strong-discordance normalization factor.
pub fn strong_discordance_norm(structure: &ModeStructure) -> Result<f64> {
    Ok(1.0 - diag_max_correlance(structure)?)
}

/// Computes all normalization factors for a structure at once.
pub fn normalization_report(structure: &ModeStructure) -> Result<NormalizationReport> {
    let (ls, purities, eq13) = correlance_norm_from_purities(structure)?;
    let n_correlance = if structure.largest_mode_count() >= 2 {
        correlance_norm_multimax(structure)?
    } else {
        eq13
    };
    Ok(NormalizationReport {
        structure: structure.clone(),
        l_star: ls,
        per_mode_purity: purities,
        n_correlance,
        n_diag_correlance: diag_correlance_norm(effective_mode_count(structure)?),
        n_strong_discordance: strong_discordance_norm(structure)?,
    })
}

fn validated(rho: &DensityMatrix, tol: &Tolerances) -> Result<()> {
    rho.validate(tol)
}

/// Squared Hilbert-Schmidt distance between the state and its reduction
/// product.
pub fn raw_correlance(rho: &DensityMatrix) -> Result<f64> {
    raw_correlance_with(rho, &Tolerances::default())
}

pub fn raw_correlance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    validated(rho, tol)?;
    let sigma = rho.reduction_product();
    Ok(hs_distance_sq(rho, &sigma))
}

/// Frobenius-squared distance; equals tr[(a-b)^2] for Hermitian inputs.
pub(crate) fn hs_distance_sq(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    a.matrix()
        .iter()
        .zip(b.matrix().iter())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum()
}

/// Normalized measure of all N-mode nonlocal correlation: zero exactly for
/// product-form states, one exactly for maximally entangled states.
pub fn correlance(rho: &DensityMatrix) -> Result<f64> {
    correlance_with(rho, &Tolerances::default())
}

pub fn correlance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let norm = correlance_norm(rho.structure())?;
    Ok(raw_correlance_with(rho, tol)? / norm)
}

/// Correlance renormalized over diagonal states only. Non-diagonal inputs
/// are rejected rather than silently dephased.
pub fn diag_correlance(rho: &DensityMatrix) -> Result<f64> {
    diag_correlance_with(rho, &Tolerances::default())
}

pub fn diag_correlance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let effective = effective_mode_count(rho.structure())?;
    let offdiag = rho.max_offdiagonal();
    if offdiag > tol.diagonal {
        return Err(CorrkitError::NotDiagonal { magnitude: offdiag });
    }
    let raw = raw_correlance_with(rho, tol)?;
    Ok(raw / diag_correlance_norm(effective))
}

/// Squared Hilbert-Schmidt distance to the maximally dephased state; zero iff
/// the state is diagonal.
pub fn raw_nondiagonality(rho: &DensityMatrix) -> Result<f64> {
    raw_nondiagonality_with(rho, &Tolerances::default())
}

pub fn raw_nondiagonality_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    validated(rho, tol)?;
    let n = rho.total_dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += rho.matrix()[(i, j)].norm_sqr();
            }
        }
    }
    Ok(sum)
}

/// Sifting sign of the raw nondiagonality; off-diagonal dust below the
/// threshold does not count as coherence.
fn nondiagonality_sign(raw_nd: f64, tol: &Tolerances) -> f64 {
    if raw_nd > tol.offdiagonal {
        1.0
    } else {
        0.0
    }
}

/// Correlance sifted to nondiagonal (distinguishably quantum) states.
pub fn discordance(rho: &DensityMatrix) -> Result<f64> {
    discordance_with(rho, &Tolerances::default())
}

pub fn discordance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let s = nondiagonality_sign(raw_nondiagonality_with(rho, tol)?, tol);
    Ok(s * correlance_with(rho, tol)?)
}

/// Correlance sifted to diagonal states; the complement of discordance.
pub fn diagonal_discordance(rho: &DensityMatrix) -> Result<f64> {
    diagonal_discordance_with(rho, &Tolerances::default())
}

pub fn diagonal_discordance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let s = nondiagonality_sign(raw_nondiagonality_with(rho, tol)?, tol);
    Ok((1.0 - s) * correlance_with(rho, tol)?)
}

/// Nonlocal correlation beyond what any diagonal state can reach, normalized
/// to [0, 1].
pub fn strong_discordance(rho: &DensityMatrix) -> Result<f64> {
    strong_discordance_with(rho, &Tolerances::default())
}

pub fn strong_discordance_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<f64> {
    let c = correlance_with(rho, tol)?;
    let threshold = diag_max_correlance(rho.structure())?;
    let norm = 1.0 - threshold;
    Ok((c - threshold).max(0.0) / norm)
}

/// Raw strong discordance and its diagonal complement; they sum to the
/// correlance exactly.
pub fn raw_strong_discordance_pair(rho: &DensityMatrix) -> Result<(f64, f64)> {
    raw_strong_discordance_pair_with(rho, &Tolerances::default())
}

pub fn raw_strong_discordance_pair_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let c = correlance_with(rho, tol)?;
    let threshold = diag_max_correlance(rho.structure())?;
    Ok(((c - threshold).max(0.0), c.min(threshold)))
}

/// Evaluates the whole measure bundle on one state.
pub fn measure_set(rho: &DensityMatrix) -> Result<Vec<MeasureResult>> {
    measure_set_with(rho, &Tolerances::default())
}

pub fn measure_set_with(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<MeasureResult>> {
    let structure = rho.structure();
    let raw_c = raw_correlance_with(rho, tol)?;
    let nc = correlance_norm(structure)?;
    let c = raw_c / nc;
    let raw_nd = raw_nondiagonality_with(rho, tol)?;
    let s = nondiagonality_sign(raw_nd, tol);
    let threshold = diag_max_correlance(structure)?;
    let n_theta = 1.0 - threshold;
    let raw_theta = (c - threshold).max(0.0);
    let mut out = vec![
        MeasureResult {
            kind: MeasureKind::Correlance,
            raw: raw_c,
            normalized: c,
        },
        MeasureResult {
            kind: MeasureKind::Discordance,
            raw: s * raw_c,
            normalized: s * c,
        },
        MeasureResult {
            kind: MeasureKind::DiagonalDiscordance,
            raw: (1.0 - s) * raw_c,
            normalized: (1.0 - s) * c,
        },
        MeasureResult {
            kind: MeasureKind::StrongDiscordance,
            raw: raw_theta,
            normalized: raw_theta / n_theta,
        },
        MeasureResult {
            kind: MeasureKind::RawStrongDiscordance,
            raw: raw_theta,
            normalized: raw_theta,
        },
        MeasureResult {
            kind: MeasureKind::RawDiagonalStrongDiscordance,
            raw: c.min(threshold),
            normalized: c.min(threshold),
        },
        MeasureResult {
            kind: MeasureKind::Nondiagonality,
            raw: raw_nd,
            normalized: raw_nd,
        },
    ];
    if s == 0.0 {
        out.push(MeasureResult {
            kind: MeasureKind::DiagCorrelance,
            raw: raw_c,
            normalized: raw_c / diag_correlance_norm(effective_mode_count(structure)?),
        });
    }
    Ok(out)
}
