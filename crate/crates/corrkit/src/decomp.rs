//! Pure-state decompositions and the decomposition-level correlation
//! machinery: unoptimized statance and probablance for a caller-supplied
//! decomposition, and exact minimization over the permutation-unitary
//! decompositions of strictly classical (diagonal) states.
//!
//! The global minimizations over continuous decomposition unitaries are not
//! implemented; only unoptimized values and the finite strictly-classical
//! search are computable.

use num_complex::Complex64;

use crate::error::{CorrkitError, Result};
use crate::state::{mixed_radix_iter, CMatrix, DensityMatrix, ModeStructure, Tolerances};

/// A pure-state decomposition `{p_j, rho_j}` of a parent state, with the
/// decomposition-shape vector governing the mode-specific index arithmetic.
#[derive(Debug, Clone)]
pub struct Decomposition {
    parent_structure: ModeStructure,
    shape: Vec<usize>,
    probabilities: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Decomposition {
    pub fn new(
        parent_structure: ModeStructure,
        shape: Vec<usize>,
        probabilities: Vec<f64>,
        states: Vec<DensityMatrix>,
    ) -> Result<Self> {
        let d: usize = shape.iter().product();
        if shape.len() != parent_structure.mode_count() {
            return Err(CorrkitError::InvalidDecomposition {
                reason: "shape vector must have one entry per mode".into(),
            });
        }
        if probabilities.len() != d || states.len() != d {
            return Err(CorrkitError::InvalidDecomposition {
                reason: format!(
                    "shape product {d} does not match {} probabilities / {} states",
                    probabilities.len(),
                    states.len()
                ),
            });
        }
        if probabilities.iter().any(|&p| p <= 0.0) {
            return Err(CorrkitError::InvalidDecomposition {
                reason: "probabilities must be positive".into(),
            });
        }
        Ok(Self {
            parent_structure,
            shape,
            probabilities,
            states,
        })
    }

    pub fn parent_structure(&self) -> &ModeStructure {
        &self.parent_structure
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// Rebuilds the parent state as the probability mixture of the members.
    pub fn reconstruct(&self) -> DensityMatrix {
        let n = self.parent_structure.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (p, s) in self.probabilities.iter().zip(&self.states) {
            m += s.matrix() * Complex64::new(*p, 0.0);
        }
        DensityMatrix::from_parts_unchecked(self.parent_structure.clone(), m)
    }

    /// Checks the reconstruction against `parent` and the purity of every
    /// member.
    pub fn validate_against(&self, parent: &DensityMatrix, tol: f64) -> Result<()> {
        let rebuilt = self.reconstruct();
        let mut err = 0.0f64;
        for (a, b) in rebuilt.matrix().iter().zip(parent.matrix().iter()) {
            err = err.max((a - b).norm());
        }
        if err > tol {
            return Err(CorrkitError::InvalidDecomposition {
                reason: format!("reconstruction error {err:.3e} exceeds {tol:.1e}"),
            });
        }
        for (j, s) in self.states.iter().enumerate() {
            if s.purity() < 1.0 - 1e-9 {
                return Err(CorrkitError::InvalidDecomposition {
                    reason: format!("member {j} is not pure (purity {})", s.purity()),
                });
            }
        }
        Ok(())
    }
}

/// A decomposition unitary, validated to 1e-10.
#[derive(Debug, Clone)]
pub struct DecompUnitary {
    matrix: CMatrix,
}

impl DecompUnitary {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(CorrkitError::InvalidDecomposition {
                reason: "decomposition unitary must be square".into(),
            });
        }
        let d = matrix.nrows();
        let prod = matrix.adjoint() * &matrix;
        let mut err = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let want = if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                };
                err = err.max((prod[(i, j)] - want).norm());
            }
        }
        if err > 1e-10 {
            return Err(CorrkitError::InvalidDecomposition {
                reason: format!("matrix is not unitary (residual {err:.3e})"),
            });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// D-level discrete Fourier unitary.
pub fn fourier_unitary(d: usize) -> DecompUnitary {
    let mut m = CMatrix::zeros(d, d);
    let scale = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        for k in 0..d {
            let phase = 2.0 * std::f64::consts::PI * (j * k) as f64 / d as f64;
            m[(j, k)] = Complex64::from_polar(scale, phase);
        }
    }
    DecompUnitary { matrix: m }
}

/// Permutation unitary sending row j to column `perm[j]` (0-based).
pub fn permutation_unitary(perm: &[usize]) -> DecompUnitary {
    let d = perm.len();
    let mut m = CMatrix::zeros(d, d);
    for (j, &k) in perm.iter().enumerate() {
        m[(j, k)] = Complex64::ONE;
    }
    DecompUnitary { matrix: m }
}

/// Upper bound used for the admissible member counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberBound {
    /// `D <= r^2` (the Caratheodory bound on mode-independent members).
    RankSquared,
    /// `D <= n^2`, the looser fallback.
    TotalDimSquared,
}

/// Admissible member counts and shape vectors for one rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeEntry {
    pub d: usize,
    pub shapes: Vec<Vec<usize>>,
}

/// All member counts `D` in `r..=r^2` expressible as a product of per-mode
/// limits `D_m <= n_m^2`, with their shape vectors (lexicographic order).
pub fn enumerate_shapes(structure: &ModeStructure, rank: usize) -> Result<Vec<ShapeEntry>> {
    enumerate_shapes_with(structure, rank, MemberBound::RankSquared)
}

pub fn enumerate_shapes_with(
    structure: &ModeStructure,
    rank: usize,
    bound: MemberBound,
) -> Result<Vec<ShapeEntry>> {
    if rank == 0 {
        return Err(CorrkitError::InvalidParameter {
            reason: "rank must be at least 1".into(),
        });
    }
    let n = structure.total_dim();
    let max_d = match bound {
        MemberBound::RankSquared => rank * rank,
        MemberBound::TotalDimSquared => n * n,
    };
    let caps: Vec<usize> = structure.dims().iter().map(|&d| d * d).collect();
    let mut out = Vec::new();
    for d in rank..=max_d {
        let shapes = shapes_for_member_count(&caps, d);
        if !shapes.is_empty() {
            out.push(ShapeEntry { d, shapes });
        }
    }
    Ok(out)
}

/// All factorizations of `d` into per-mode counts within the caps,
/// lexicographic.
fn shapes_for_member_count(caps: &[usize], d: usize) -> Vec<Vec<usize>> {
    fn rec(caps: &[usize], target: usize, current: &mut Vec<usize>, shapes: &mut Vec<Vec<usize>>) {
        if caps.len() == current.len() {
            if target == 1 {
                shapes.push(current.clone());
            }
            return;
        }
        let cap = caps[current.len()];
        for f in 1..=cap.min(target) {
            if target.is_multiple_of(f) {
                current.push(f);
                rec(caps, target / f, current, shapes);
                current.pop();
            }
        }
    }
    let mut shapes = Vec::new();
    rec(caps, d, &mut Vec::with_capacity(caps.len()), &mut shapes);
    shapes
}

fn fallback_shape(mode_count: usize, d: usize) -> Vec<usize> {
    let mut shape = vec![1usize; mode_count];
    shape[mode_count - 1] = d;
    shape
}

/// Shape vector for a member count: the lexicographically smallest admissible
/// one, or `(1, ..., 1, D)` when the per-mode limits admit none.
fn shape_for(structure: &ModeStructure, d: usize) -> Vec<usize> {
    let caps: Vec<usize> = structure.dims().iter().map(|&x| x * x).collect();
    let shapes = shapes_for_member_count(&caps, d);
    shapes
        .into_iter()
        .next()
        .unwrap_or_else(|| fallback_shape(structure.mode_count(), d))
}

/// The eigen-decomposition as a Decomposition with descending eigenvalues.
pub fn spectral_decomposition(rho: &DensityMatrix) -> Result<Decomposition> {
    let tol = Tolerances::default();
    let spec = rho.hermitian_eig(&tol)?;
    let r = spec.rank.max(1);
    let structure = rho.structure().clone();
    let mut probabilities = Vec::with_capacity(r);
    let mut states = Vec::with_capacity(r);
    for k in 0..r {
        probabilities.push(spec.eigenvalues[k]);
        let col = spec.eigenvectors.column(k);
        let ket: Vec<Complex64> = col.iter().copied().collect();
        states.push(DensityMatrix::pure(structure.clone(), &ket)?);
    }
    let shape = shape_for(&structure, r);
    Decomposition::new(structure, shape, probabilities, states)
}

/// Decomposition generated by a unitary acting on the spectral one:
/// `|v_j> = sum_k U_jk sqrt(lambda_k) |e_k>`, `p_j = |v_j|^2`.
pub fn unitary_decomposition(
    rho: &DensityMatrix,
    unitary: &DecompUnitary,
    shape: &[usize],
) -> Result<Decomposition> {
    let tol = Tolerances::default();
    let spec = rho.hermitian_eig(&tol)?;
    let r = spec.rank.max(1);
    let d: usize = shape.iter().product();
    if d != unitary.dim() {
        return Err(CorrkitError::InvalidDecomposition {
            reason: format!(
                "shape product {d} does not match unitary dimension {}",
                unitary.dim()
            ),
        });
    }
    if d < r {
        return Err(CorrkitError::InvalidDecomposition {
            reason: format!("member count {d} is below the rank {r}"),
        });
    }
    let n = rho.total_dim();
    let structure = rho.structure().clone();
    let mut probabilities = Vec::with_capacity(d);
    let mut states = Vec::with_capacity(d);
    for j in 0..d {
        let row_weight: f64 = (0..r).map(|k| unitary.matrix()[(j, k)].norm_sqr()).sum();
        if row_weight == 0.0 {
            return Err(CorrkitError::InvalidDecomposition {
                reason: format!(
                    "row {} of the unitary is zero over the first {r} columns",
                    j + 1
                ),
            });
        }
        let mut ket = vec![Complex64::ZERO; n];
        for k in 0..r {
            let coeff = unitary.matrix()[(j, k)] * Complex64::new(spec.eigenvalues[k].sqrt(), 0.0);
            for (i, k_amp) in ket.iter_mut().enumerate() {
                *k_amp += coeff * spec.eigenvectors[(i, k)];
            }
        }
        let p: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        probabilities.push(p);
        states.push(DensityMatrix::pure(structure.clone(), &ket)?);
    }
    Decomposition::new(structure, shape.to_vec(), probabilities, states)
}

/// The mode-independent comparison states: member j gets the tensor product
/// over modes of the mode-m reduction of the equal-weight average of all
/// members sharing its mode-m index.
pub fn mu_states(decomposition: &Decomposition) -> Vec<DensityMatrix> {
    let shape = decomposition.shape();
    let n_modes = shape.len();
    let d: usize = shape.iter().product();
    // factors[m][j_m]: the mode-m reduction of the class average
    let mut factors: Vec<Vec<DensityMatrix>> = Vec::with_capacity(n_modes);
    for m in 0..n_modes {
        let class_size = d / shape[m];
        let mut mode_factors = Vec::with_capacity(shape[m]);
        for jm in 0..shape[m] {
            let n = decomposition.parent_structure().total_dim();
            let mut avg = CMatrix::zeros(n, n);
            for (j, idx) in mixed_radix_iter(shape).enumerate() {
                if idx[m] == jm {
                    avg += decomposition.states()[j].matrix();
                }
            }
            avg /= Complex64::new(class_size as f64, 0.0);
            let avg_state =
                DensityMatrix::from_parts_unchecked(decomposition.parent_structure().clone(), avg);
            mode_factors.push(
                avg_state
                    .partial_trace(&[m + 1])
                    .expect("mode label in range"),
            );
        }
        factors.push(mode_factors);
    }
    mixed_radix_iter(shape)
        .map(|idx| {
            let mut out: Option<DensityMatrix> = None;
            for (m, &jm) in idx.iter().enumerate() {
                let f = factors[m][jm].clone();
                out = Some(match out {
                    None => f,
                    Some(acc) => acc.kron(&f),
                });
            }
            out.expect("at least one mode")
        })
        .collect()
}

/// Unoptimized statance: the summed squared distances between each member and
/// its mode-independent comparison state.
pub fn unoptimized_statance(decomposition: &Decomposition) -> f64 {
    let mus = mu_states(decomposition);
    decomposition
        .states()
        .iter()
        .zip(&mus)
        .map(|(rho_j, mu_j)| {
            rho_j
                .matrix()
                .iter()
                .zip(mu_j.matrix().iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
        })
        .sum()
}

/// Products of mode-marginal probability sums: the mode-independent
/// comparison probabilities.
pub fn q_products(probabilities: &[f64], shape: &[usize]) -> Result<Vec<f64>> {
    let d: usize = shape.iter().product();
    if probabilities.len() != d {
        return Err(CorrkitError::InvalidParameter {
            reason: format!(
                "{} probabilities do not fill shape of product {d}",
                probabilities.len()
            ),
        });
    }
    // marginals[m][j_m] = sum of p over members with mode-m index j_m
    let marginals: Vec<Vec<f64>> = (0..shape.len())
        .map(|m| {
            let mut marg = vec![0.0; shape[m]];
            for (j, idx) in mixed_radix_iter(shape).enumerate() {
                marg[idx[m]] += probabilities[j];
            }
            marg
        })
        .collect();
    Ok(mixed_radix_iter(shape)
        .map(|idx| {
            idx.iter()
                .enumerate()
                .map(|(m, &jm)| marginals[m][jm])
                .product()
        })
        .collect())
}

/// Unoptimized probablance: squared distance between the decomposition
/// probabilities and their mode-independent comparison products.
pub fn unoptimized_probablance(decomposition: &Decomposition) -> f64 {
    let q = q_products(decomposition.probabilities(), decomposition.shape())
        .expect("decomposition invariant: probabilities fill the shape");
    decomposition
        .probabilities()
        .iter()
        .zip(&q)
        .map(|(p, q)| (p - q) * (p - q))
        .sum()
}

/// Result of the exhaustive strictly classical search: the minimizing value,
/// the basis assignment (1-based scalar basis indices in member order), and
/// the shape that attained it.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOptimum {
    pub value: f64,
    pub assignment: Vec<usize>,
    pub shape: Vec<usize>,
}

/// Default cap on the exhaustive r! search.
pub const DEFAULT_RANK_CAP: usize = 8;

fn lexicographic_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..k).collect();
    fn rec(items: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if items.is_empty() {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            let v = items.remove(i);
            current.push(v);
            rec(items, current, out);
            current.pop();
            items.insert(i, v);
        }
    }
    rec(&mut items, &mut Vec::with_capacity(k), &mut out);
    out
}

struct ClassicalContext {
    dims: Vec<usize>,
    shape_entries: Vec<Vec<usize>>,
    support: Vec<usize>,
    support_probs: Vec<f64>,
    support_digits: Vec<Vec<usize>>,
    permutations: Vec<Vec<usize>>,
}

fn classical_context(
    rho: &DensityMatrix,
    tol: &Tolerances,
    cap: usize,
) -> Result<ClassicalContext> {
    let offdiag = rho.max_offdiagonal();
    if offdiag > tol.diagonal {
        return Err(CorrkitError::NotDiagonal { magnitude: offdiag });
    }
    rho.validate(tol)?;
    let probs = rho.diagonal_probs();
    let support: Vec<usize> = probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > tol.rank)
        .map(|(i, _)| i)
        .collect();
    let r = support.len();
    if r > cap {
        return Err(CorrkitError::RankTooLarge { rank: r, cap });
    }
    let structure = rho.structure();
    let mut shape_entries: Vec<Vec<usize>> =
        match enumerate_shapes_with(structure, r, MemberBound::RankSquared) {
            Ok(entries) => entries
                .into_iter()
                .filter(|e| e.d == r)
                .flat_map(|e| e.shapes)
                .collect(),
            Err(_) => Vec::new(),
        };
    if shape_entries.is_empty() {
        shape_entries.push(fallback_shape(structure.mode_count(), r));
    }
    let support_digits: Vec<Vec<usize>> = support
        .iter()
        .map(|&b| {
            structure
                .inverse_register(b + 1)
                .expect("support index in range")
                .iter()
                .map(|&x| x - 1)
                .collect()
        })
        .collect();
    Ok(ClassicalContext {
        dims: structure.dims().to_vec(),
        shape_entries,
        support_probs: support.iter().map(|&b| probs[b]).collect(),
        support,
        support_digits,
        permutations: lexicographic_permutations(r),
    })
}

/// Statance of one permutation assignment at one shape, using the diagonal
/// fast path: all members and comparison states are diagonal.
fn classical_statance_value(ctx: &ClassicalContext, shape: &[usize], perm: &[usize]) -> f64 {
    let n_modes = shape.len();
    let member_digits: Vec<Vec<usize>> = mixed_radix_iter(shape).collect();
    let d = member_digits.len();
    // per-mode class distributions over that mode's levels
    let mut factors: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n_modes);
    for m in 0..n_modes {
        let class_size = (d / shape[m]) as f64;
        let mut mode_factors = vec![vec![0.0; ctx.dims[m]]; shape[m]];
        for (j, digits) in member_digits.iter().enumerate() {
            let basis_digits = &ctx.support_digits[perm[j]];
            mode_factors[digits[m]][basis_digits[m]] += 1.0 / class_size;
        }
        factors.push(mode_factors);
    }
    let mut total = 0.0;
    for (j, digits) in member_digits.iter().enumerate() {
        let basis_digits = &ctx.support_digits[perm[j]];
        let mut mu_sq_sum = 1.0;
        let mut mu_at_basis = 1.0;
        for m in 0..n_modes {
            let f = &factors[m][digits[m]];
            mu_sq_sum *= f.iter().map(|x| x * x).sum::<f64>();
            mu_at_basis *= f[basis_digits[m]];
        }
        total += 1.0 - 2.0 * mu_at_basis + mu_sq_sum;
    }
    total
}

fn classical_probablance_value(ctx: &ClassicalContext, shape: &[usize], perm: &[usize]) -> f64 {
    let probs: Vec<f64> = perm.iter().map(|&s| ctx.support_probs[s]).collect();
    let q = q_products(&probs, shape).expect("permutation fills the shape");
    probs.iter().zip(&q).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Minimum unoptimized statance of a diagonal state over all permutation
/// unitaries on its support and all admissible shape vectors.
pub fn classical_statance(rho: &DensityMatrix) -> Result<ClassicalOptimum> {
    classical_statance_with(rho, &Tolerances::default(), DEFAULT_RANK_CAP)
}

pub fn classical_statance_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
    rank_cap: usize,
) -> Result<ClassicalOptimum> {
    let ctx = classical_context(rho, tol, rank_cap)?;
    let mut best: Option<ClassicalOptimum> = None;
    for shape in &ctx.shape_entries {
        for perm in &ctx.permutations {
            let value = classical_statance_value(&ctx, shape, perm);
            let candidate_better = match &best {
                None => true,
                Some(b) => value < b.value - 1e-12,
            };
            if candidate_better {
                best = Some(ClassicalOptimum {
                    value,
                    assignment: perm.iter().map(|&s| ctx.support[s] + 1).collect(),
                    shape: shape.clone(),
                });
            }
        }
    }
    Ok(best.expect("at least one shape and permutation"))
}

/// Minimum unoptimized probablance of a diagonal state over the
/// statance-minimizing permutation decompositions.
pub fn classical_probablance(rho: &DensityMatrix) -> Result<f64> {
    classical_probablance_with(rho, &Tolerances::default(), DEFAULT_RANK_CAP)
}

pub fn classical_probablance_with(
    rho: &DensityMatrix,
    tol: &Tolerances,
    rank_cap: usize,
) -> Result<f64> {
    let ctx = classical_context(rho, tol, rank_cap)?;
    let mut min_statance = f64::INFINITY;
    let mut values: Vec<(f64, f64)> = Vec::new();
    for shape in &ctx.shape_entries {
        for perm in &ctx.permutations {
            let s = classical_statance_value(&ctx, shape, perm);
            min_statance = min_statance.min(s);
            values.push((s, classical_probablance_value(&ctx, shape, perm)));
        }
    }
    Ok(values
        .into_iter()
        .filter(|(s, _)| *s <= min_statance + 1e-12)
        .map(|(_, p)| p)
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen;
    use approx::assert_relative_eq;

    fn two_qubit() -> ModeStructure {
        ModeStructure::new(&[2, 2]).unwrap()
    }

    #[test]
    fn spectral_decomposition_cases() {
        let bell = randgen::bell_phi_plus();
        let d = spectral_decomposition(&bell).unwrap();
        assert_eq!(d.len(), 1);
        assert_relative_eq!(d.probabilities()[0], 1.0, epsilon = 1e-10);

        let diag = DensityMatrix::diagonal(ModeStructure::new(&[2]).unwrap(), &[0.7, 0.3]).unwrap();
        let d = spectral_decomposition(&diag).unwrap();
        assert_eq!(d.probabilities(), &[0.7, 0.3]);
        assert_relative_eq!(d.states()[0].matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);

        for seed in 0..4u64 {
            let rho = randgen::hs_mixed(&two_qubit(), seed);
            let d = spectral_decomposition(&rho).unwrap();
            d.validate_against(&rho, 1e-10).unwrap();
        }
    }

    #[test]
    fn identity_unitary_reproduces_spectral() {
        let rho = randgen::hs_mixed(&two_qubit(), 5);
        let u = DecompUnitary::new(CMatrix::identity(4, 4)).unwrap();
        let via_unitary = unitary_decomposition(&rho, &u, &[2, 2]).unwrap();
        let spectral = spectral_decomposition(&rho).unwrap();
        for (a, b) in via_unitary
            .probabilities()
            .iter()
            .zip(spectral.probabilities())
        {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn fourier_unitary_gives_uniform_probabilities() {
        let rho = randgen::hs_mixed(&two_qubit(), 6);
        let u = fourier_unitary(4);
        let d = unitary_decomposition(&rho, &u, &[2, 2]).unwrap();
        for &p in d.probabilities() {
            assert_relative_eq!(p, 0.25, epsilon = 1e-12);
        }
        d.validate_against(&rho, 1e-9).unwrap();
    }

    #[test]
    fn random_unitary_decompositions_reconstruct() {
        // Haar unitary from the QR of a Gaussian matrix
        use rand::SeedableRng;
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut sample = || -> f64 { StandardNormal.sample(&mut rng) };
        let g = CMatrix::from_fn(4, 4, |_, _| Complex64::new(sample(), sample()));
        let qr = g.qr();
        let u = DecompUnitary::new(qr.q()).unwrap();
        let rho = randgen::hs_mixed(&two_qubit(), 7);
        let d = unitary_decomposition(&rho, &u, &[2, 2]).unwrap();
        d.validate_against(&rho, 1e-9).unwrap();
    }

    #[test]
    fn unitary_decomposition_rejects_bad_inputs() {
        let rho = randgen::hs_mixed(&two_qubit(), 8);
        let u = fourier_unitary(4);
        assert!(unitary_decomposition(&rho, &u, &[2, 3]).is_err());
        let mut m = CMatrix::identity(4, 4);
        m[(0, 0)] = Complex64::new(2.0, 0.0);
        assert!(DecompUnitary::new(m).is_err());

        // permutation pushing all rank weight out of the first r columns
        let pure = randgen::haar_pure(&two_qubit(), 3);
        let swap = permutation_unitary(&[1, 0]);
        let err = unitary_decomposition(&pure, &swap, &[1, 2]);
        assert!(err.is_err());
    }

    #[test]
    fn shape_enumeration_matches_known_tables() {
        let s = two_qubit();
        let r2 = enumerate_shapes(&s, 2).unwrap();
        let ds: Vec<usize> = r2.iter().map(|e| e.d).collect();
        assert_eq!(ds, vec![2, 3, 4]);
        let shapes4: &Vec<Vec<usize>> = &r2.iter().find(|e| e.d == 4).unwrap().shapes;
        assert!(shapes4.contains(&vec![2, 2]));
        assert!(shapes4.contains(&vec![1, 4]));
        assert!(shapes4.contains(&vec![4, 1]));

        let r3 = enumerate_shapes(&s, 3).unwrap();
        let ds: Vec<usize> = r3.iter().map(|e| e.d).collect();
        assert_eq!(ds, vec![3, 4, 6, 8, 9]);

        let r1 = enumerate_shapes(&s, 1).unwrap();
        assert_eq!(r1.len(), 1);
        assert_eq!(r1[0].d, 1);
        assert_eq!(r1[0].shapes, vec![vec![1, 1]]);

        let r4 = enumerate_shapes(&s, 4).unwrap();
        let ds: Vec<usize> = r4.iter().map(|e| e.d).collect();
        assert_eq!(ds, vec![4, 6, 8, 9, 12, 16]);
    }

    #[test]
    fn mu_states_of_mode_independent_members_equal_members() {
        // family-5 style decomposition: per-mode states indexed by the shape
        let s2 = ModeStructure::new(&[2]).unwrap();
        let a1 = randgen::haar_pure(&s2, 1);
        let a2 = randgen::haar_pure(&s2, 2);
        let b1 = randgen::haar_pure(&s2, 3);
        let b2 = randgen::haar_pure(&s2, 4);
        let states = vec![a1.kron(&b1), a1.kron(&b2), a2.kron(&b1), a2.kron(&b2)];
        let d = Decomposition::new(
            two_qubit(),
            vec![2, 2],
            vec![0.4, 0.3, 0.2, 0.1],
            states.clone(),
        )
        .unwrap();
        let mus = mu_states(&d);
        for (rho_j, mu_j) in states.iter().zip(&mus) {
            let err: f64 = (rho_j.matrix() - mu_j.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
        assert!(unoptimized_statance(&d) < 1e-24);
    }

    #[test]
    fn single_member_comparison_state_is_the_reduction_product() {
        let s2 = ModeStructure::new(&[2]).unwrap();
        let pure_product = randgen::haar_pure(&s2, 31).kron(&randgen::haar_pure(&s2, 32));
        let d = Decomposition::new(
            two_qubit(),
            vec![1, 1],
            vec![1.0],
            vec![pure_product.clone()],
        )
        .unwrap();
        let mus = mu_states(&d);
        let want = pure_product.reduction_product();
        let err: f64 = (mus[0].matrix() - want.matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13);
        // a pure product state is its own reduction product: statance 0
        assert!(unoptimized_statance(&d) < 1e-20);

        // an entangled single member differs from its comparison state
        let bell = randgen::bell_phi_plus();
        let d = Decomposition::new(two_qubit(), vec![1, 1], vec![1.0], vec![bell]).unwrap();
        assert!(unoptimized_statance(&d) > 0.5);
    }

    #[test]
    fn three_member_classical_fixture() {
        // members |1,1>, |1,2>, |2,1> on shape (1,3); the comparison states
        // mix the mode-1 factor to (2/3, 1/3)
        let s = two_qubit();
        let states = vec![
            DensityMatrix::basis_projector(s.clone(), 1).unwrap(),
            DensityMatrix::basis_projector(s.clone(), 2).unwrap(),
            DensityMatrix::basis_projector(s.clone(), 3).unwrap(),
        ];
        let d = Decomposition::new(s, vec![1, 3], vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], states)
            .unwrap();
        let mus = mu_states(&d);
        // mu_1 = (2/3 |1><1| + 1/3 |2><2|) (x) |1><1|
        assert_relative_eq!(mus[0].matrix()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(mus[0].matrix()[(2, 2)].re, 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(mus[1].matrix()[(1, 1)].re, 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(mus[1].matrix()[(3, 3)].re, 1.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(unoptimized_statance(&d), 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn q_products_cases() {
        // mode-independent probabilities reproduce themselves
        let p = vec![0.2 * 0.3, 0.2 * 0.7, 0.8 * 0.3, 0.8 * 0.7];
        let q = q_products(&p, &[2, 2]).unwrap();
        for (a, b) in p.iter().zip(&q) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }

        // uniform probabilities are mode independent for any shape
        let p = vec![0.25; 4];
        for q in q_products(&p, &[2, 2]).unwrap() {
            assert_relative_eq!(q, 0.25, epsilon = 1e-12);
        }

        // hand-marginal oracle
        let p = vec![0.5, 0.3, 0.2, 0.0];
        let q = q_products(&p, &[2, 2]).unwrap();
        assert_relative_eq!(q[0], 0.8 * 0.7, epsilon = 1e-12);
        assert_relative_eq!(q[1], 0.8 * 0.3, epsilon = 1e-12);
        assert_relative_eq!(q[2], 0.2 * 0.7, epsilon = 1e-12);
        assert_relative_eq!(q[3], 0.2 * 0.3, epsilon = 1e-12);
    }

    #[test]
    fn probablance_cases() {
        let s = two_qubit();
        let states: Vec<DensityMatrix> = (1..=4)
            .map(|i| DensityMatrix::basis_projector(s.clone(), i).unwrap())
            .collect();

        let mi = Decomposition::new(
            s.clone(),
            vec![2, 2],
            vec![0.2 * 0.3, 0.2 * 0.7, 0.8 * 0.3, 0.8 * 0.7],
            states.clone(),
        )
        .unwrap();
        assert!(unoptimized_probablance(&mi) < 1e-24);

        let correlated =
            Decomposition::new(s, vec![2, 2], vec![0.5, 1e-15, 1e-15, 0.5], states).unwrap();
        assert_relative_eq!(unoptimized_probablance(&correlated), 0.25, epsilon = 1e-10);
    }

    #[test]
    fn fourier_decompositions_always_have_zero_probablance() {
        // the degeneracy that forces the statance restriction
        for seed in 0..6u64 {
            let rho = randgen::hs_mixed(&two_qubit(), seed + 20);
            let spec_rank = spectral_decomposition(&rho).unwrap().len();
            let u = fourier_unitary(spec_rank);
            let shape = super::shape_for(rho.structure(), spec_rank);
            let d = unitary_decomposition(&rho, &u, &shape).unwrap();
            assert!(unoptimized_probablance(&d) < 1e-24);
        }
    }

    #[test]
    fn classical_statance_common_factor_vs_antidiagonal() {
        let s = two_qubit();
        // common mode-1 factor: |1,1>, |1,2|
        let common = DensityMatrix::diagonal(s.clone(), &[0.6, 0.4, 0.0, 0.0]).unwrap();
        let opt = classical_statance(&common).unwrap();
        assert!(opt.value < 1e-12, "common-factor statance {}", opt.value);

        // anti-diagonal support: |1,1>, |2,2>
        let anti = DensityMatrix::diagonal(s, &[0.6, 0.0, 0.0, 0.4]).unwrap();
        let opt = classical_statance(&anti).unwrap();
        assert!(opt.value > 0.1, "anti-diagonal statance {}", opt.value);
    }

    #[test]
    fn classical_statance_rank3_fixture() {
        // support |1,1>, |1,2>, |2,1>: every 3-level permutation gives 4/3
        let s = two_qubit();
        let rho = DensityMatrix::diagonal(s, &[0.5, 0.3, 0.2, 0.0]).unwrap();
        let opt = classical_statance(&rho).unwrap();
        assert_relative_eq!(opt.value, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn classical_statance_full_rank_vanishes() {
        let s = two_qubit();
        let rho = DensityMatrix::diagonal(s, &[0.4, 0.3, 0.2, 0.1]).unwrap();
        let opt = classical_statance(&rho).unwrap();
        assert!(opt.value < 1e-12);
        assert_eq!(opt.shape, vec![2, 2]);
    }

    #[test]
    fn classical_probablance_low_rank_always_zero() {
        let s = two_qubit();
        for seed in 0..10u64 {
            let full = randgen::random_diagonal(&s, seed);
            let probs = full.diagonal_probs();
            // rank-2 and rank-3 truncations renormalized
            for keep in [2usize, 3] {
                let mut trunc: Vec<f64> = probs.iter().take(keep).copied().collect();
                trunc.resize(4, 0.0);
                let total: f64 = trunc.iter().sum();
                for p in &mut trunc {
                    *p /= total;
                }
                let rho = DensityMatrix::diagonal(s.clone(), &trunc).unwrap();
                let p = classical_probablance(&rho).unwrap();
                assert!(p < 1e-20, "rank {keep} probablance {p}");
            }
        }
    }

    #[test]
    fn classical_probablance_rank4_matches_hand_value() {
        // register-consistent assignments minimize statance; their
        // probablance is 2(0.4 - 0.25)^2 + 2(0.1 - 0.25)^2 = 0.09
        let s = two_qubit();
        let rho = DensityMatrix::diagonal(s, &[0.4, 0.1, 0.1, 0.4]).unwrap();
        let p = classical_probablance(&rho).unwrap();
        assert_relative_eq!(p, 0.09, epsilon = 1e-12);
    }

    #[test]
    fn classical_fast_path_agrees_with_generic_statance() {
        // rebuild the reported optimum as an explicit decomposition and
        // recompute its statance through the dense-matrix path
        let s = two_qubit();
        for seed in 0..12u64 {
            let full = randgen::random_diagonal(&s, 300 + seed);
            let probs = full.diagonal_probs();
            let rank = 2 + (seed % 3) as usize;
            let mut trunc = vec![0.0; 4];
            let total: f64 = probs.iter().take(rank).sum();
            for i in 0..rank {
                trunc[i] = probs[i] / total;
            }
            let rho = DensityMatrix::diagonal(s.clone(), &trunc).unwrap();
            let opt = classical_statance(&rho).unwrap();
            let states: Vec<DensityMatrix> = opt
                .assignment
                .iter()
                .map(|&b| DensityMatrix::basis_projector(s.clone(), b).unwrap())
                .collect();
            let member_probs: Vec<f64> = opt.assignment.iter().map(|&b| trunc[b - 1]).collect();
            let d = Decomposition::new(s.clone(), opt.shape.clone(), member_probs, states).unwrap();
            let generic = unoptimized_statance(&d);
            assert!(
                (generic - opt.value).abs() < 1e-12,
                "seed {seed}: fast path {} vs generic {generic}",
                opt.value
            );
            d.validate_against(&rho, 1e-12).unwrap();
        }
    }

    #[test]
    fn classical_search_rejects_bad_inputs() {
        let bell = randgen::bell_phi_plus();
        assert!(matches!(
            classical_statance(&bell),
            Err(CorrkitError::NotDiagonal { .. })
        ));

        let s = ModeStructure::new(&[3, 3]).unwrap();
        let rho = DensityMatrix::maximally_mixed(s);
        assert!(matches!(
            classical_statance(&rho),
            Err(CorrkitError::RankTooLarge { .. })
        ));
    }

    #[test]
    fn pure_state_probablance_is_zero() {
        let s = two_qubit();
        let rho = DensityMatrix::basis_projector(s, 2).unwrap();
        assert_eq!(classical_probablance(&rho).unwrap(), 0.0);
    }
}
