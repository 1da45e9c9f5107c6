//! Multipartite Bloch vectors over a uniform standard basis built from
//! scaled generalized Gell-Mann matrices.
//!
//! The basis is uniformly orthogonal, `tr(nu_j^dag nu_k) = n_m delta_jk`,
//! which keeps every multipartite orthogonality relation down to a single
//! case. Bloch vectors are stored sparsely by vector index, since most
//! benchmark states have few nonzero components.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{CorrkitError, Result};
use crate::state::{mixed_radix_iter, CMatrix, DensityMatrix, ModeStructure, Tolerances};

/// Generalized Gell-Mann matrices for an `n_m`-level mode, in conventional
/// label order: for each `alpha in 2..=n_m` and `beta < alpha`, the symmetric
/// and antisymmetric pair, then the diagonal matrix at `alpha^2 - 1`.
pub fn gm_basis(n_m: usize) -> Vec<CMatrix> {
    if n_m < 2 {
        return Vec::new();
    }
    let mut out = vec![CMatrix::zeros(n_m, n_m); n_m * n_m - 1];
    for alpha in 2..=n_m {
        for beta in 1..alpha {
            let sym_label = alpha * alpha - 2 * (alpha - beta) - 1;
            let asym_label = sym_label + 1;
            let mut sym = CMatrix::zeros(n_m, n_m);
            sym[(alpha - 1, beta - 1)] = Complex64::ONE;
            sym[(beta - 1, alpha - 1)] = Complex64::ONE;
            out[sym_label - 1] = sym;
            let mut asym = CMatrix::zeros(n_m, n_m);
            asym[(alpha - 1, beta - 1)] = Complex64::I;
            asym[(beta - 1, alpha - 1)] = -Complex64::I;
            out[asym_label - 1] = asym;
        }
        let diag_label = alpha * alpha - 1;
        let scale = (2.0 / (alpha * (alpha - 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(n_m, n_m);
        for q in 1..alpha {
            diag[(q - 1, q - 1)] = Complex64::new(scale, 0.0);
        }
        diag[(alpha - 1, alpha - 1)] = Complex64::new(-scale * (alpha - 1) as f64, 0.0);
        out[diag_label - 1] = diag;
    }
    out
}

/// Per-mode operator lists `nu_k` (index 0 the identity, then the scaled GM
/// matrices) for one mode structure.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    structure: ModeStructure,
    ops: Vec<Vec<CMatrix>>,
}

impl OperatorBasis {
    pub fn new(structure: &ModeStructure) -> Self {
        let ops = structure
            .dims()
            .iter()
            .map(|&d| {
                let mut mode_ops = vec![CMatrix::identity(d, d)];
                let scale = Complex64::new((d as f64 / 2.0).sqrt(), 0.0);
                for gm in gm_basis(d) {
                    mode_ops.push(gm * scale);
                }
                mode_ops
            })
            .collect();
        Self {
            structure: structure.clone(),
            ops,
        }
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    /// Scaled mode operator `nu_k` for 0-based label `k` of mode `m`
    /// (1-based).
    pub fn mode_op(&self, mode: usize, k: usize) -> &CMatrix {
        &self.ops[mode - 1][k]
    }

    /// Number of operator labels per mode (`n_m^2`).
    pub fn labels_per_mode(&self) -> Vec<usize> {
        self.ops.iter().map(|o| o.len()).collect()
    }

    /// Composite operator `nu_k = nu_{k_1} (x) ... (x) nu_{k_N}` for a
    /// 0-based vector label.
    pub fn composite_op(&self, k: &[usize]) -> CMatrix {
        let mut out: Option<CMatrix> = None;
        for (m, &km) in k.iter().enumerate() {
            let op = &self.ops[m][km];
            out = Some(match out {
                None => op.clone(),
                Some(acc) => acc.kronecker(op),
            });
        }
        out.expect("at least one mode")
    }

    /// Unit-normalized uniform-standard-basis element `b_k = nu_k / sqrt(n)`.
    pub fn usb_element(&self, k: &[usize]) -> CMatrix {
        let n = self.structure.total_dim() as f64;
        self.composite_op(k) / Complex64::new(n.sqrt(), 0.0)
    }
}

/// Sparse real Bloch vector over the uniform standard basis: a map from the
/// 0-based vector label `k != 0` to the component value.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    structure: ModeStructure,
    components: BTreeMap<Vec<usize>, f64>,
}

impl BlochVector {
    pub fn new(structure: ModeStructure) -> Self {
        Self {
            structure,
            components: BTreeMap::new(),
        }
    }

    pub fn structure(&self) -> &ModeStructure {
        &self.structure
    }

    pub fn set(&mut self, k: Vec<usize>, value: f64) {
        if value != 0.0 {
            self.components.insert(k, value);
        }
    }

    pub fn component(&self, k: &[usize]) -> f64 {
        self.components.get(k).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.components.iter()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Bloch purity `|Gamma|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.components.values().map(|v| v * v).sum()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .components
            .iter()
            .map(|(k, v)| v * large.component(k))
            .sum()
    }

    pub fn sub(&self, other: &BlochVector) -> BlochVector {
        let mut out = self.clone();
        for (k, v) in &other.components {
            let cur = out.component(k) - v;
            if cur == 0.0 {
                out.components.remove(k);
            } else {
                out.components.insert(k.clone(), cur);
            }
        }
        out
    }
}

fn require_nontrivial(structure: &ModeStructure) -> Result<()> {
    if structure.total_dim() < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "Bloch vectors need a total dimension of at least 2".into(),
        });
    }
    Ok(())
}

/// Bloch vector of a state: components `sqrt(n/(n-1)) tr(rho b_k)` over all
/// nonzero vector labels.
pub fn bloch_of(rho: &DensityMatrix) -> Result<BlochVector> {
    let structure = rho.structure();
    require_nontrivial(structure)?;
    let basis = OperatorBasis::new(structure);
    let n = structure.total_dim() as f64;
    let scale = (n / (n - 1.0)).sqrt() / n.sqrt();
    let mut out = BlochVector::new(structure.clone());
    for k in mixed_radix_iter(&basis.labels_per_mode()) {
        if k.iter().all(|&x| x == 0) {
            continue;
        }
        // tr(rho nu_k) is real for Hermitian rho and Hermitian basis ops
        let op = basis.composite_op(&k);
        let mut tr = 0.0;
        for i in 0..op.nrows() {
            for j in 0..op.ncols() {
                tr += (rho.matrix()[(i, j)] * op[(j, i)]).re;
            }
        }
        out.set(k, scale * tr);
    }
    Ok(out)
}

/// Reassembles the density matrix `(I + sqrt(n(n-1)) Gamma) / n`; returns a
/// PSD diagnostic when the Bloch vector is unphysical.
pub fn state_of(gamma: &BlochVector) -> Result<DensityMatrix> {
    let structure = gamma.structure();
    require_nontrivial(structure)?;
    let basis = OperatorBasis::new(structure);
    let n = structure.total_dim();
    let nf = n as f64;
    let mut m = CMatrix::identity(n, n);
    let coeff = Complex64::new((nf * (nf - 1.0)).sqrt() / nf.sqrt(), 0.0);
    for (k, &v) in gamma.iter() {
        m += basis.composite_op(k) * (coeff * Complex64::new(v, 0.0));
    }
    m /= Complex64::new(nf, 0.0);
    DensityMatrix::new(structure.clone(), m, &Tolerances::default())
}

/// Single-mode reduced Bloch vector, read off the full components with the
/// rescaling that keeps reductions unitized.
pub fn reduced_bloch(gamma: &BlochVector, mode: usize) -> Result<BlochVector> {
    let structure = gamma.structure();
    let n_m = structure.mode_dim(mode)?;
    let reduced_structure = ModeStructure::new(&[n_m])?;
    let mut out = BlochVector::new(reduced_structure);
    if n_m < 2 {
        return Ok(out);
    }
    let n = structure.total_dim() as f64;
    let factor = ((n - 1.0) / (n_m as f64 - 1.0)).sqrt();
    for km in 1..n_m * n_m {
        let mut k = vec![0usize; structure.mode_count()];
        k[mode - 1] = km;
        let v = gamma.component(&k);
        out.set(vec![km], factor * v);
    }
    Ok(out)
}

/// Correlation vector over a mode group: the full-space components whose
/// nonzero label positions are exactly the given modes.
pub fn correlation_vector(gamma: &BlochVector, modes: &[usize]) -> Result<BlochVector> {
    let structure = gamma.structure();
    if modes.is_empty() {
        return Err(CorrkitError::InvalidParameter {
            reason: "correlation vector needs a nonempty mode set".into(),
        });
    }
    structure.check_labels(modes)?;
    let mut want = vec![false; structure.mode_count()];
    for &m in modes {
        want[m - 1] = true;
    }
    let mut out = BlochVector::new(structure.clone());
    for (k, &v) in gamma.iter() {
        let support: Vec<bool> = k.iter().map(|&x| x != 0).collect();
        if support == want {
            out.set(k.clone(), v);
        }
    }
    Ok(out)
}

/// Liaison vector: the strictly multimode part of the Bloch vector,
/// `Gamma - sum_m X^(m)`.
pub fn liaison_vector(gamma: &BlochVector) -> BlochVector {
    let mut out = BlochVector::new(gamma.structure().clone());
    for (k, &v) in gamma.iter() {
        let nonzero = k.iter().filter(|&&x| x != 0).count();
        if nonzero >= 2 {
            out.set(k.clone(), v);
        }
    }
    out
}
