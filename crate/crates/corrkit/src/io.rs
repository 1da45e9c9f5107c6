//! State file format: JSON with a dims list and either a full complex matrix
//! (`[[re, im], ...]` entries, row-major) or a `diag` probability list for
//! diagonal states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CorrkitError, Result};
use crate::state::{CMatrix, DensityMatrix, ModeStructure, Tolerances};

#[derive(Debug, Serialize, Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diag: Option<Vec<f64>>,
}

/// Parses a state from its JSON representation and validates it.
pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    state_from_json_with(text, &Tolerances::default())
}

pub fn state_from_json_with(text: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| CorrkitError::ParseError {
        reason: e.to_string(),
    })?;
    let structure = ModeStructure::new(&file.dims)?;
    let n = structure.total_dim();
    match (file.matrix, file.diag) {
        (Some(rows), None) => {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(CorrkitError::ParseError {
                    reason: format!("matrix must be {n}x{n} for dims {structure}"),
                });
            }
            let mut m = CMatrix::zeros(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (j, &[re, im]) in row.iter().enumerate() {
                    m[(i, j)] = Complex64::new(re, im);
                }
            }
            DensityMatrix::new(structure, m, tol)
        }
        (None, Some(diag)) => {
            if diag.len() != n {
                return Err(CorrkitError::ParseError {
                    reason: format!("diag must have {n} entries for dims {structure}"),
                });
            }
            let mut m = CMatrix::zeros(n, n);
            for (i, &p) in diag.iter().enumerate() {
                m[(i, i)] = Complex64::new(p, 0.0);
            }
            DensityMatrix::new(structure, m, tol)
        }
        (Some(_), Some(_)) => Err(CorrkitError::ParseError {
            reason: "state file must have either 'matrix' or 'diag', not both".into(),
        }),
        (None, None) => Err(CorrkitError::ParseError {
            reason: "state file needs a 'matrix' or 'diag' field".into(),
        }),
    }
}

/// Serializes a state; diagonal states use the compact `diag` form.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let n = rho.total_dim();
    let file = if rho.is_diagonal(0.0) {
        StateFile {
            dims: rho.structure().dims().to_vec(),
            matrix: None,
            diag: Some(rho.diagonal_probs()),
        }
    } else {
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let z = rho.matrix()[(i, j)];
                row.push([z.re, z.im]);
            }
            rows.push(row);
        }
        StateFile {
            dims: rho.structure().dims().to_vec(),
            matrix: Some(rows),
            diag: None,
        }
    };
    serde_json::to_string(&file).expect("state file serializes")
}

pub fn state_from_file(path: &std::path::Path) -> Result<DensityMatrix> {
    state_from_json(&std::fs::read_to_string(path)?)
}

pub fn state_to_file(rho: &DensityMatrix, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, state_to_json(rho))?;
    Ok(())
}
