//! Classical-data ingestion: quantize N-variable data, build the diagonal
//! multipartite histogram density matrix, and compute the Pearson
//! correlation coefficient for comparison.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CorrkitError, Result};
use crate::state::{DensityMatrix, ModeStructure};

/// N-variable sample data: one row per sample, one column per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
    bounds: Option<Vec<(f64, f64)>>,
}

impl DataSet {
    pub fn new(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(CorrkitError::EmptyDataSet);
        }
        let width = names.len();
        if width == 0 {
            return Err(CorrkitError::DataError {
                reason: "at least one variable required".into(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(CorrkitError::DataError {
                    reason: format!("row {} has {} values, expected {width}", i + 1, row.len()),
                });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(CorrkitError::DataError {
                    reason: format!("row {} contains non-finite value {v}", i + 1),
                });
            }
        }
        Ok(Self {
            names,
            rows,
            bounds: None,
        })
    }

    /// Declares per-variable domains `[x_min, x_max]` used by
    /// [`BoundsMode::Declared`].
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.len() != self.n_vars() {
            return Err(CorrkitError::DataError {
                reason: "one bounds pair per variable required".into(),
            });
        }
        for (m, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
                return Err(CorrkitError::DataError {
                    reason: format!("bounds for variable {} must satisfy min < max", m + 1),
                });
            }
        }
        self.bounds = Some(bounds);
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn bounds(&self) -> Option<&[(f64, f64)]> {
        self.bounds.as_deref()
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn n_samples(&self) -> usize {
        self.rows.len()
    }

    pub fn column(&self, var: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[var - 1]).collect()
    }
}

/// Where the quantization domain comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsMode {
    /// Use the data set's declared bounds; the technically more correct
    /// method, since each variable's domain is what could happen rather than
    /// what did.
    Declared,
    /// Use the per-column data extremes.
    DataExtremes,
}

/// Bin edges and representative values (edge midpoints) for each variable.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizationPlan {
    bins: Vec<usize>,
    edges: Vec<Vec<f64>>,
    representatives: Vec<Vec<f64>>,
}

impl QuantizationPlan {
    pub fn bins(&self) -> &[usize] {
        &self.bins
    }

    pub fn edges(&self, var: usize) -> &[f64] {
        &self.edges[var - 1]
    }

    pub fn representatives(&self, var: usize) -> &[f64] {
        &self.representatives[var - 1]
    }

    pub fn structure(&self) -> Result<ModeStructure> {
        ModeStructure::new(&self.bins)
    }

    /// Bin index (0-based) for a value of variable `var`, with end-bin
    /// clamping: interior bins are left-closed/right-open, the last bin is
    /// closed, and out-of-domain values land in the nearest end bin.
    fn bin_of(&self, var: usize, value: f64) -> usize {
        let edges = &self.edges[var - 1];
        let n_bins = self.bins[var - 1];
        if n_bins == 1 || value < edges[1] {
            return 0;
        }
        if value >= edges[n_bins - 1] {
            return n_bins - 1;
        }
        for q in 1..n_bins - 1 {
            if value >= edges[q] && value < edges[q + 1] {
                return q;
            }
        }
        n_bins - 1
    }
}

/// Builds bin-edge and representative lists with `bins[m]` uniform bins per
/// variable, domains drawn from declared bounds or data extremes.
pub fn make_plan(data: &DataSet, bins: &[usize], mode: BoundsMode) -> Result<QuantizationPlan> {
    if bins.len() != data.n_vars() {
        return Err(CorrkitError::DataError {
            reason: "one bin count per variable required".into(),
        });
    }
    if bins.contains(&0) {
        return Err(CorrkitError::InvalidParameter {
            reason: "bin counts must be at least 1".into(),
        });
    }
    let domains: Vec<(f64, f64)> = match mode {
        BoundsMode::Declared => data
            .bounds()
            .ok_or_else(|| CorrkitError::DataError {
                reason: "declared-bounds mode requires declared bounds".into(),
            })?
            .to_vec(),
        BoundsMode::DataExtremes => (1..=data.n_vars())
            .map(|m| {
                let col = data.column(m);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            })
            .collect(),
    };
    let mut edges = Vec::with_capacity(bins.len());
    let mut reps = Vec::with_capacity(bins.len());
    for (m, (&n_m, &(lo, hi))) in bins.iter().zip(&domains).enumerate() {
        if lo == hi && n_m > 1 {
            return Err(CorrkitError::DataError {
                reason: format!(
                    "variable {} is constant at {lo}; more than one bin is undefined",
                    m + 1
                ),
            });
        }
        let width = if lo == hi { 1.0 } else { hi - lo };
        let e: Vec<f64> = (0..=n_m)
            .map(|k| lo + width / n_m as f64 * k as f64)
            .collect();
        let r: Vec<f64> = (0..n_m).map(|q| (e[q] + e[q + 1]) / 2.0).collect();
        edges.push(e);
        reps.push(r);
    }
    Ok(QuantizationPlan {
        bins: bins.to_vec(),
        edges,
        representatives: reps,
    })
}

/// Replaces every entry by its bin's representative value.
pub fn quantize(data: &DataSet, plan: &QuantizationPlan) -> Result<Vec<Vec<f64>>> {
    if plan.bins.len() != data.n_vars() {
        return Err(CorrkitError::DataError {
            reason: "plan width does not match data width".into(),
        });
    }
    Ok(data
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(m, &x)| plan.representatives[m][plan.bin_of(m + 1, x)])
                .collect()
        })
        .collect())
}

/// Builds the diagonal multipartite histogram density matrix: the diagonal
/// entry at each scalar index is the relative frequency of the corresponding
/// representative tuple.
pub fn build_density(data: &DataSet, plan: &QuantizationPlan) -> Result<DensityMatrix> {
    if plan.bins.len() != data.n_vars() {
        return Err(CorrkitError::DataError {
            reason: "plan width does not match data width".into(),
        });
    }
    let structure = plan.structure()?;
    let n = structure.total_dim();
    let mut counts = vec![0u64; n];
    for row in data.rows() {
        let digits: Vec<usize> = row
            .iter()
            .enumerate()
            .map(|(m, &x)| plan.bin_of(m + 1, x) + 1)
            .collect();
        let a = structure.register_index(&digits)?;
        counts[a - 1] += 1;
    }
    let total = data.n_samples() as f64;
    let probs: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    DensityMatrix::diagonal(structure, &probs)
}

/// Sample Pearson correlation coefficient between two (1-based) variables,
/// with the unbiased covariance.
pub fn pearson(data: &DataSet, a: usize, b: usize) -> Result<f64> {
    let n_s = data.n_samples();
    if n_s < 2 {
        return Err(CorrkitError::UndefinedCorrelation {
            reason: "at least two samples required".into(),
        });
    }
    for &v in &[a, b] {
        if v == 0 || v > data.n_vars() {
            return Err(CorrkitError::IndexOutOfRange {
                reason: format!("variable {v} outside 1..={}", data.n_vars()),
            });
        }
    }
    let xa = data.column(a);
    let xb = data.column(b);
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    let ma = mean(&xa);
    let mb = mean(&xb);
    let denom = (n_s - 1) as f64;
    let cov: f64 = xa
        .iter()
        .zip(&xb)
        .map(|(&x, &y)| (x - ma) * (y - mb))
        .sum::<f64>()
        / denom;
    let var = |x: &[f64], m: f64| x.iter().map(|&v| (v - m) * (v - m)).sum::<f64>() / denom;
    let sa = var(&xa, ma).sqrt();
    let sb = var(&xb, mb).sqrt();
    if sa == 0.0 || sb == 0.0 {
        return Err(CorrkitError::UndefinedCorrelation {
            reason: format!(
                "variable {} has zero standard deviation",
                if sa == 0.0 { a } else { b }
            ),
        });
    }
    Ok(cov / (sa * sb))
}

/// The four bivariate benchmark scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Independent uniforms.
    A,
    /// Raised cosine `y = (1 + cos 2 pi t) / 2` over `x = t`.
    B,
    /// The line `y = x`.
    C,
    /// Step function `(round t, round t)`.
    D,
}

impl std::str::FromStr for ScenarioKind {
    type Err = CorrkitError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(ScenarioKind::A),
            "b" => Ok(ScenarioKind::B),
            "c" => Ok(ScenarioKind::C),
            "d" => Ok(ScenarioKind::D),
            other => Err(CorrkitError::InvalidParameter {
                reason: format!("unknown scenario kind '{other}' (expected a..d)"),
            }),
        }
    }
}

/// Generates a seeded bivariate scenario data set: `n_points` samples with a
/// uniform deviation of `+-noise` added to each coordinate of the ideal
/// curve. The parameter grid is evenly spaced on [0, 1].
pub fn scenario(kind: ScenarioKind, n_points: usize, noise: f64, seed: u64) -> Result<DataSet> {
    if n_points == 0 {
        return Err(CorrkitError::EmptyDataSet);
    }
    if noise < 0.0 {
        return Err(CorrkitError::InvalidParameter {
            reason: "noise must be nonnegative".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(match kind {
        ScenarioKind::A => 21,
        ScenarioKind::B => 22,
        ScenarioKind::C => 23,
        ScenarioKind::D => 24,
    });
    let deviate = |rng: &mut ChaCha8Rng| -> f64 {
        if noise == 0.0 {
            0.0
        } else {
            rng.random_range(-noise..=noise)
        }
    };
    let mut rows = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let t = (j as f64 + 0.5) / n_points as f64;
        let (x0, y0) = match kind {
            ScenarioKind::A => (rng.random::<f64>(), rng.random::<f64>()),
            ScenarioKind::B => (t, 0.5 * (1.0 + (2.0 * std::f64::consts::PI * t).cos())),
            ScenarioKind::C => (t, t),
            ScenarioKind::D => (t.round(), t.round()),
        };
        rows.push(vec![x0 + deviate(&mut rng), y0 + deviate(&mut rng)]);
    }
    DataSet::new(vec!["x".into(), "y".into()], rows)
}
