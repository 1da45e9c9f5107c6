//! Mode-structured density matrices and the tensor operations every measure
//! is built on: register indexing, Kronecker products, partial traces,
//! reduction products, dephasing, and Hermitian eigendecomposition.
//!
//! Mode labels are 1-based with mode 1 leftmost in tensor products, matching
//! register counting. Scalar basis indices are likewise 1-based in the public
//! API.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CorrkitError, Result, Violation};

/// Dense complex matrix used for all operators.
pub type CMatrix = DMatrix<Complex64>;

/// Numerical tolerances for state validation and measure thresholds.
///
/// Defaults give double-precision headroom for system sizes up to a few
/// hundred levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Largest allowed entry of |rho - rho^dagger|.
    pub hermiticity: f64,
    /// Allowed deviation of the trace from 1.
    pub trace: f64,
    /// Allowed magnitude of negative eigenvalues.
    pub psd: f64,
    /// Eigenvalues above this count toward the rank.
    pub rank: f64,
    /// Allowed eigendecomposition reconstruction error.
    pub eig: f64,
    /// Largest off-diagonal magnitude still considered diagonal.
    pub diagonal: f64,
    /// Raw nondiagonality above this flips the sifting sign to 1.
    pub offdiagonal: f64,
    /// Slack on the normalized-measure upper bound of 1.
    pub norm_bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-9,
            trace: 1e-9,
            psd: 1e-9,
            rank: 1e-10,
            eig: 1e-10,
            diagonal: 1e-10,
            offdiagonal: 1e-12,
            norm_bound: 1e-9,
        }
    }
}

/// Ordered list of mode dimensions `(n_1, ..., n_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeStructure {
    dims: Vec<usize>,
}

impl ModeStructure {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(CorrkitError::InvalidStructure {
                reason: "at least one mode required".into(),
            });
        }
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(CorrkitError::InvalidStructure {
                reason: format!("mode dimension must be >= 1, got {d}"),
            });
        }
        Ok(Self {
            dims: dims.to_vec(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of modes N.
    pub fn mode_count(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension n = n_1 ... n_N.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Dimension of mode `label` (1-based).
    pub fn mode_dim(&self, label: usize) -> Result<usize> {
        self.check_label(label)?;
        Ok(self.dims[label - 1])
    }

    pub fn n_max(&self) -> usize {
        *self.dims.iter().max().expect("nonempty")
    }

    /// n / n_max.
    pub fn nmaxnot(&self) -> usize {
        self.total_dim() / self.n_max()
    }

    /// Number of modes with more than one level; size-1 modes factor out of
    /// every state exactly and carry no correlation capacity.
    pub fn nontrivial_mode_count(&self) -> usize {
        self.dims.iter().filter(|&&d| d > 1).count()
    }

    /// Number of modes attaining the largest dimension.
    pub fn largest_mode_count(&self) -> usize {
        let nm = self.n_max();
        self.dims.iter().filter(|&&d| d == nm).count()
    }

    pub fn concat(&self, other: &ModeStructure) -> ModeStructure {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        ModeStructure { dims }
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label == 0 || label > self.mode_count() {
            return Err(CorrkitError::ModeLabelOutOfRange {
                label,
                max: self.mode_count(),
            });
        }
        Ok(())
    }

    /// Validates that `labels` are distinct and within `1..=N`.
    pub fn check_labels(&self, labels: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.mode_count()];
        for &m in labels {
            self.check_label(m)?;
            if seen[m - 1] {
                return Err(CorrkitError::DuplicateModeLabel { label: m });
            }
            seen[m - 1] = true;
        }
        Ok(())
    }

    /// Indical register function: maps a 1-based vector index to the 1-based
    /// scalar index, with the last mode cycling fastest.
    pub fn register_index(&self, a: &[usize]) -> Result<usize> {
        if a.len() != self.mode_count() {
            return Err(CorrkitError::IndexOutOfRange {
                reason: format!(
                    "vector index has {} components, structure has {} modes",
                    a.len(),
                    self.mode_count()
                ),
            });
        }
        for (m, (&am, &nm)) in a.iter().zip(&self.dims).enumerate() {
            if am == 0 || am > nm {
                return Err(CorrkitError::IndexOutOfRange {
                    reason: format!(
                        "component {} of vector index is {am}, mode size {nm}",
                        m + 1
                    ),
                });
            }
        }
        let mut scalar = 1usize;
        for (m, &am) in a.iter().enumerate() {
            let tail: usize = self.dims[m + 1..].iter().product();
            scalar += (am - 1) * tail;
        }
        Ok(scalar)
    }

    /// Inverse indical register function: maps the 1-based scalar index back
    /// to its 1-based vector index.
    pub fn inverse_register(&self, a: usize) -> Result<Vec<usize>> {
        let n = self.total_dim();
        if a == 0 || a > n {
            return Err(CorrkitError::IndexOutOfRange {
                reason: format!("scalar index {a} outside 1..={n}"),
            });
        }
        let mut out = Vec::with_capacity(self.mode_count());
        let mut v = a;
        for m in 0..self.mode_count() {
            let tail: usize = self.dims[m + 1..].iter().product();
            let am = (v - 1) / tail + 1;
            v -= (am - 1) * tail;
            out.push(am);
        }
        Ok(out)
    }
}

impl std::fmt::Display for ModeStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Mixed-radix counter over 0-based digit vectors; yields all tuples with
/// digit m in `0..radices[m]`, last digit fastest.
pub(crate) fn mixed_radix_iter(radices: &[usize]) -> MixedRadixIter {
    MixedRadixIter {
        radices: radices.to_vec(),
        current: vec![0; radices.len()],
        done: radices.contains(&0),
        started: false,
    }
}

pub(crate) struct MixedRadixIter {
    radices: Vec<usize>,
    current: Vec<usize>,
    done: bool,
    started: bool,
}

impl Iterator for MixedRadixIter {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        for i in (0..self.current.len()).rev() {
            self.current[i] += 1;
            if self.current[i] < self.radices[i] {
                return Some(self.current.clone());
            }
            self.current[i] = 0;
        }
        self.done = true;
        None
    }
}

/// 0-based scalar offset of a 0-based digit vector under `dims`.
pub(crate) fn offset_of(digits: &[usize], dims: &[usize]) -> usize {
    let mut s = 0usize;
    for (m, &d) in digits.iter().enumerate() {
        let tail: usize = dims[m + 1..].iter().product();
        s += d * tail;
    }
    s
}

/// Eigenvalues (descending), orthonormal eigenvector columns, and rank.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
    pub rank: usize,
}

/// A density matrix with an attached mode structure.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    structure: ModeStructure,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Builds a state and validates it against the given tolerances.
    pub fn new(structure: ModeStructure, matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        validate_state(&structure, &matrix, tol)?;
        Ok(Self { structure, matrix })
    }

    /// Builds a state without validation. Callers must uphold the state
    /// invariants themselves.
    pub fn from_parts_unchecked(structure: ModeStructure, matrix: CMatrix) -> Self {
        Self { structure, matrix }
    }

    /// Diagonal state from a probability list.
    pub fn diagonal(structure: ModeStructure, probs: &[f64]) -> Result<Self> {
        let n = structure.total_dim();
        if probs.len() != n {
            return Err(CorrkitError::InvalidState {
                violations: vec![Violation::Dimensions {
                    expected: n,
                    actual: probs.len(),
                }],
            });
        }
        let mut m = CMatrix::zeros(n, n);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = Complex64::new(p, 0.0);
        }
        Self::new(structure, m, &Tolerances::default())
    }

    /// Rank-1 projector of a (normalized) ket.
    pub fn pure(structure: ModeStructure, amplitudes: &[Complex64]) -> Result<Self> {
        let n = structure.total_dim();
        if amplitudes.len() != n {
            return Err(CorrkitError::InvalidState {
                violations: vec![Violation::Dimensions {
                    expected: n,
                    actual: amplitudes.len(),
                }],
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(CorrkitError::InvalidParameter {
                reason: "zero ket cannot be normalized".into(),
            });
        }
        let scale = norm_sq.sqrt();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (amplitudes[i] / scale) * (amplitudes[j] / scale).conj();
            }
        }
        Ok(Self::from_parts_unchecked(structure, m))
    }

    /// Projector onto the computational basis state with 1-based scalar index.
    pub fn basis_projector(structure: ModeStructure, scalar_index: usize) -> Result<Self> {
        let n = structure.total_dim();
        if scalar_index == 0 || scalar_index > n {
            return Err(CorrkitError::IndexOutOfRange {
                reason: format!("basis index {scalar_index} outside 1..={n}"),
            });
        }
        let mut m = CMatrix::zeros(n, n);
        m[(scalar_index - 1, scalar_index - 1)] = Complex64::ONE;
        Ok(Self::from_parts_unchecked(structure, m))
    }

    pub fn maximally_mixed(structure: ModeStructure) -> Self {
        let n = structure.total_dim();
        let m = CMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0);
        Self::from_parts_unchecked(structure, m)
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.structure.total_dim()
    }

    /// Kronecker product; the result's structure is the concatenation of the
    /// input structures.
    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            structure: self.structure.concat(&other.structure),
            matrix: self.matrix.kronecker(&other.matrix),
        }
    }

    /// Partial trace keeping the (distinct, 1-based) modes in `keep`, in the
    /// order given; all other modes are traced out. A reordered keep-list
    /// permutes the retained subsystems accordingly.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.structure.check_labels(keep)?;
        let dims = self.structure.dims();
        let n_modes = self.structure.mode_count();
        let keep0: Vec<usize> = keep.iter().map(|&m| m - 1).collect();
        let traced0: Vec<usize> = (0..n_modes).filter(|m| !keep0.contains(m)).collect();
        let keep_dims: Vec<usize> = keep0.iter().map(|&m| dims[m]).collect();
        let traced_dims: Vec<usize> = traced0.iter().map(|&m| dims[m]).collect();
        let out_n: usize = keep_dims.iter().product();

        let mut out = CMatrix::zeros(out_n, out_n);
        let mut row_full = vec![0usize; n_modes];
        let mut col_full = vec![0usize; n_modes];
        for row_kept in mixed_radix_iter(&keep_dims) {
            let i = offset_of(&row_kept, &keep_dims);
            for col_kept in mixed_radix_iter(&keep_dims) {
                let j = offset_of(&col_kept, &keep_dims);
                let mut acc = Complex64::ZERO;
                for t in mixed_radix_iter(&traced_dims) {
                    for (s, &m) in keep0.iter().enumerate() {
                        row_full[m] = row_kept[s];
                        col_full[m] = col_kept[s];
                    }
                    for (q, &m) in traced0.iter().enumerate() {
                        row_full[m] = t[q];
                        col_full[m] = t[q];
                    }
                    acc += self.matrix[(offset_of(&row_full, dims), offset_of(&col_full, dims))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(DensityMatrix {
            structure: ModeStructure::new(&keep_dims)?,
            matrix: out,
        })
    }

    /// Tensor product of all single-mode reductions.
    pub fn reduction_product(&self) -> DensityMatrix {
        let mut out: Option<DensityMatrix> = None;
        for m in 1..=self.structure.mode_count() {
            let red = self
                .partial_trace(&[m])
                .expect("single valid label cannot fail");
            out = Some(match out {
                None => red,
                Some(acc) => acc.kron(&red),
            });
        }
        out.expect("structure has at least one mode")
    }

    /// tr(rho^2); real by Hermiticity.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn trace(&self) -> Complex64 {
        let mut t = Complex64::ZERO;
        for i in 0..self.matrix.nrows() {
            t += self.matrix[(i, i)];
        }
        t
    }

    /// Maximally dephased state: diagonal kept, off-diagonals zeroed.
    pub fn dephase(&self) -> DensityMatrix {
        let n = self.matrix.nrows();
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.matrix[(i, i)];
        }
        DensityMatrix {
            structure: self.structure.clone(),
            matrix: m,
        }
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiagonal(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut m = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.max_offdiagonal() <= tol
    }

    pub fn diagonal_probs(&self) -> Vec<f64> {
        (0..self.matrix.nrows())
            .map(|i| self.matrix[(i, i)].re)
            .collect()
    }

    /// Eigendecomposition of the (Hermitian) state, eigenvalues descending.
    pub fn hermitian_eig(&self, tol: &Tolerances) -> Result<Spectrum> {
        let residual = hermiticity_residual(&self.matrix);
        if residual > tol.hermiticity {
            return Err(CorrkitError::NotHermitian { residual });
        }
        Ok(eig_descending(&self.matrix, tol.rank))
    }

    /// Relabels the tensor factors: entry i of `perm` (1-based) names the old
    /// mode that becomes new mode i.
    pub fn permute_modes(&self, perm: &[usize]) -> Result<DensityMatrix> {
        if perm.len() != self.structure.mode_count() {
            return Err(CorrkitError::InvalidParameter {
                reason: "permutation length must equal mode count".into(),
            });
        }
        self.structure.check_labels(perm)?;
        let dims = self.structure.dims();
        let new_dims: Vec<usize> = perm.iter().map(|&m| dims[m - 1]).collect();
        let n = self.total_dim();
        let mut out = CMatrix::zeros(n, n);
        let mut row_old = vec![0usize; perm.len()];
        let mut col_old = vec![0usize; perm.len()];
        for row_new in mixed_radix_iter(&new_dims) {
            for col_new in mixed_radix_iter(&new_dims) {
                for (i, &m) in perm.iter().enumerate() {
                    row_old[m - 1] = row_new[i];
                    col_old[m - 1] = col_new[i];
                }
                out[(
                    offset_of(&row_new, &new_dims),
                    offset_of(&col_new, &new_dims),
                )] = self.matrix[(offset_of(&row_old, dims), offset_of(&col_old, dims))];
            }
        }
        Ok(DensityMatrix {
            structure: ModeStructure::new(&new_dims)?,
            matrix: out,
        })
    }

    /// Reinterprets the state under a different mode structure of the same
    /// total dimension (e.g. after grouping adjacent modes).
    pub fn with_structure(&self, structure: ModeStructure) -> Result<DensityMatrix> {
        if structure.total_dim() != self.total_dim() {
            return Err(CorrkitError::InvalidStructure {
                reason: format!(
                    "structure {structure} has total dimension {}, state has {}",
                    structure.total_dim(),
                    self.total_dim()
                ),
            });
        }
        Ok(DensityMatrix {
            structure,
            matrix: self.matrix.clone(),
        })
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        validate_state(&self.structure, &self.matrix, tol)
    }
}

/// Kronecker product of raw matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub(crate) fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut r = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            r = r.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    r
}

pub(crate) fn eig_descending(m: &CMatrix, rank_tol: f64) -> Spectrum {
    let eig = m.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        eigenvectors.set_column(new, &eig.eigenvectors.column(old));
    }
    let rank = eigenvalues.iter().filter(|&&l| l > rank_tol).count();
    Spectrum {
        eigenvalues,
        eigenvectors,
        rank,
    }
}

/// Checks Hermiticity, unit trace, positive semidefiniteness, and the
/// dims/matrix-size agreement; every violation is reported with its measured
/// residual.
pub fn validate_state(structure: &ModeStructure, matrix: &CMatrix, tol: &Tolerances) -> Result<()> {
    let mut violations = Vec::new();
    let n = structure.total_dim();
    if matrix.nrows() != n || matrix.ncols() != n || matrix.nrows() != matrix.ncols() {
        violations.push(Violation::Dimensions {
            expected: n,
            actual: matrix.nrows().max(matrix.ncols()),
        });
        return Err(CorrkitError::InvalidState { violations });
    }
    let herm = hermiticity_residual(matrix);
    if herm > tol.hermiticity {
        violations.push(Violation::Hermiticity { residual: herm });
    }
    let mut tr = Complex64::ZERO;
    for i in 0..n {
        tr += matrix[(i, i)];
    }
    let trace_residual = (tr - Complex64::ONE).norm();
    if trace_residual > tol.trace {
        violations.push(Violation::Trace {
            residual: trace_residual,
        });
    }
    // Only check the spectrum when the matrix is Hermitian enough for a
    // symmetric eigensolve to be meaningful.
    if herm <= tol.hermiticity {
        let spec = eig_descending(matrix, tol.rank);
        let min_eig = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min_eig < -tol.psd {
            violations.push(Violation::PositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CorrkitError::InvalidState { violations })
    }
}
