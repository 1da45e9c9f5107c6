//! Set-partition combinatorics and the multipartite generalizations:
//! partitional correlances, multicorrelances, partitional vectors, the
//! multicorrelance array, and absolute multicorrelance.
//!
//! Partitions are kept in canonical form: blocks sorted ascending internally,
//! blocks ordered by first element, partition lists ordered lexicographically
//! on that form. This makes the h-indexing reproducible across runs and
//! languages.

use serde::{Deserialize, Serialize};

use crate::error::{CorrkitError, Result};
use crate::measures;
use crate::state::{DensityMatrix, ModeStructure};

/// A grouping of mode labels into disjoint, nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PartitionSpec {
    blocks: Vec<Vec<usize>>,
}

impl PartitionSpec {
    /// Builds a partition, canonicalizing block order; rejects empty,
    /// overlapping, or zero-label blocks.
    pub fn new(blocks: &[Vec<usize>]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(CorrkitError::InvalidPartition {
                reason: "at least one block required".into(),
            });
        }
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(blocks.len());
        let mut seen = std::collections::BTreeSet::new();
        for b in blocks {
            if b.is_empty() {
                return Err(CorrkitError::InvalidPartition {
                    reason: "blocks must be nonempty".into(),
                });
            }
            let mut sorted = b.clone();
            sorted.sort_unstable();
            for &m in &sorted {
                if m == 0 {
                    return Err(CorrkitError::InvalidPartition {
                        reason: "mode labels are 1-based".into(),
                    });
                }
                if !seen.insert(m) {
                    return Err(CorrkitError::InvalidPartition {
                        reason: format!("mode {m} appears in more than one block"),
                    });
                }
            }
            canon.push(sorted);
        }
        canon.sort();
        Ok(Self { blocks: canon })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks T.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// All covered mode labels, ascending.
    pub fn mode_set(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }
}

impl std::fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// Stirling number of the second kind: partitions of N items into k nonempty
/// blocks.
pub fn stirling2(n: usize, k: usize) -> Result<u64> {
    if k == 0 || k > n {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("stirling2 needs 1 <= k <= N, got N={n}, k={k}"),
        });
    }
    // standard recurrence; well inside u64 for the mode counts used here
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for _ in 1..=n {
        for j in (1..=k).rev() {
            row[j] = (j as u64) * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    Ok(row[k])
}

/// All partitions of `modes` into exactly `k` blocks, canonical, in
/// lexicographic order.
pub fn enumerate_partitions(modes: &[usize], k: usize) -> Result<Vec<PartitionSpec>> {
    if modes.is_empty() || k == 0 || k > modes.len() {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("cannot partition {} modes into {k} blocks", modes.len()),
        });
    }
    let mut sorted = modes.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(CorrkitError::InvalidParameter {
            reason: "mode labels must be distinct".into(),
        });
    }
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    // assigning elements in ascending order to existing blocks or one new
    // block yields each partition exactly once, already block-canonical
    fn assign(
        rest: &[usize],
        k: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<PartitionSpec>,
    ) {
        if rest.is_empty() {
            if blocks.len() == k {
                out.push(PartitionSpec {
                    blocks: blocks.clone(),
                });
            }
            return;
        }
        // not enough elements left to open the remaining blocks
        if blocks.len() + rest.len() < k {
            return;
        }
        let (first, tail) = rest.split_first().expect("nonempty");
        for i in 0..blocks.len() {
            blocks[i].push(*first);
            assign(tail, k, blocks, out);
            blocks[i].pop();
        }
        if blocks.len() < k {
            blocks.push(vec![*first]);
            assign(tail, k, blocks, out);
            blocks.pop();
        }
    }
    assign(&sorted, k, &mut blocks, &mut out);
    out.sort();
    Ok(out)
}

/// Structure of a state whose modes have been grouped by a partition: one
/// mode per block, with the block's dimension product.
pub fn grouped_structure(
    structure: &ModeStructure,
    partition: &PartitionSpec,
) -> Result<ModeStructure> {
    let modes = partition.mode_set();
    structure.check_labels(&modes)?;
    let dims: Vec<usize> = partition
        .blocks
        .iter()
        .map(|b| {
            b.iter()
                .map(|&m| structure.dims()[m - 1])
                .product::<usize>()
        })
        .collect();
    ModeStructure::new(&dims)
}

/// Reduces `rho` to the partition's modes and regroups them into one mode
/// per block (blocks in canonical order).
pub fn grouped_reduction(rho: &DensityMatrix, partition: &PartitionSpec) -> Result<DensityMatrix> {
    let flat: Vec<usize> = partition.blocks.iter().flatten().copied().collect();
    let reduced = rho.partial_trace(&flat)?;
    let grouped = grouped_structure(rho.structure(), partition)?;
    reduced.with_structure(grouped)
}

/// Correlance of the reduction to mode group `modes` viewed under the given
/// partition of those modes, normalized for the grouped structure.
pub fn partitional_correlance(
    rho: &DensityMatrix,
    modes: &[usize],
    partition: &PartitionSpec,
) -> Result<f64> {
    let mut wanted = modes.to_vec();
    wanted.sort_unstable();
    if partition.mode_set() != wanted {
        return Err(CorrkitError::InvalidPartition {
            reason: format!("partition {partition} does not cover the mode group {wanted:?}"),
        });
    }
    if partition.block_count() < 2 {
        return Err(CorrkitError::InvalidPartition {
            reason: "a single block has no nonlocal correlation".into(),
        });
    }
    let grouped = grouped_reduction(rho, partition)?;
    measures::correlance(&grouped)
}

/// Square root of the partitional correlance.
pub fn root_correlance(
    rho: &DensityMatrix,
    modes: &[usize],
    partition: &PartitionSpec,
) -> Result<f64> {
    Ok(partitional_correlance(rho, modes, partition)?.sqrt())
}

/// Normalization choices for the aggregated multipartite measures. The
/// defaults are count-based upper bounds (each root-correlance is at most 1);
/// raw values are always reported alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct MultiNorm {
    /// Denominator for a k-partitional multicorrelance; `None` uses the
    /// partition count `stirling2(N, k)`.
    pub k_partitional: Option<f64>,
    /// Denominator for the multicorrelance; `None` uses `N - 1`.
    pub multicorrelance: Option<f64>,
    /// Denominator for the absolute multicorrelance; `None` uses the total
    /// scalar count of the array.
    pub absolute: Option<f64>,
}

/// Raw and normalized value pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawNormalized {
    pub raw: f64,
    pub normalized: f64,
}

/// Sum of all N-mode k-partitional root-correlances, with its normalized
/// value.
pub fn k_partitional_multicorrelance(rho: &DensityMatrix, k: usize) -> Result<RawNormalized> {
    k_partitional_multicorrelance_with(rho, k, &MultiNorm::default())
}

pub fn k_partitional_multicorrelance_with(
    rho: &DensityMatrix,
    k: usize,
    norm: &MultiNorm,
) -> Result<RawNormalized> {
    let n_modes = rho.structure().mode_count();
    if k < 2 || k > n_modes {
        return Err(CorrkitError::InvalidParameter {
            reason: format!("k-partitional multicorrelance needs 2 <= k <= N, got k={k}"),
        });
    }
    let all_modes: Vec<usize> = (1..=n_modes).collect();
    let mut raw = 0.0;
    for p in enumerate_partitions(&all_modes, k)? {
        raw += root_correlance(rho, &all_modes, &p)?;
    }
    let denom = norm.k_partitional.unwrap_or(stirling2(n_modes, k)? as f64);
    Ok(RawNormalized {
        raw,
        normalized: raw / denom,
    })
}

/// Sum of the k-partitional multicorrelances over k = 2..N, with its
/// normalized value.
pub fn multicorrelance(rho: &DensityMatrix) -> Result<RawNormalized> {
    multicorrelance_with(rho, &MultiNorm::default())
}

pub fn multicorrelance_with(rho: &DensityMatrix, norm: &MultiNorm) -> Result<RawNormalized> {
    let n_modes = rho.structure().mode_count();
    if n_modes < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "multicorrelance requires at least two modes".into(),
        });
    }
    let mut raw = 0.0;
    for k in 2..=n_modes {
        raw += k_partitional_multicorrelance_with(rho, k, norm)?.normalized;
    }
    let denom = norm.multicorrelance.unwrap_or((n_modes - 1) as f64);
    Ok(RawNormalized {
        raw,
        normalized: raw / denom,
    })
}

/// Partitional multicorrelance vector of one reduction mode group: row T-1
/// lists all T-partitional root-correlances in enumeration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionalVector {
    pub modes: Vec<usize>,
    pub rows: Vec<Vec<f64>>,
}

impl PartitionalVector {
    pub fn scalar_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }
}

/// Builds the partitional vector for a mode group of size >= 2.
pub fn partitional_vector(rho: &DensityMatrix, modes: &[usize]) -> Result<PartitionalVector> {
    if modes.len() < 2 {
        return Err(CorrkitError::InvalidParameter {
            reason: "partitional vector needs at least two modes".into(),
        });
    }
    rho.structure().check_labels(modes)?;
    let mut sorted = modes.to_vec();
    sorted.sort_unstable();
    let mut rows = Vec::with_capacity(sorted.len() - 1);
    for t in 2..=sorted.len() {
        let mut row = Vec::new();
        for p in enumerate_partitions(&sorted, t)? {
            row.push(root_correlance(rho, &sorted, &p)?);
        }
        rows.push(row);
    }
    Ok(PartitionalVector {
        modes: sorted,
        rows,
    })
}

/// All partitional vectors of all reduction mode groups of size 2..=N,
/// ordered by group size then lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticorrelanceArray {
    pub groups: Vec<PartitionalVector>,
}

impl MulticorrelanceArray {
    pub fn scalar_count(&self) -> usize {
        self.groups.iter().map(|g| g.scalar_count()).sum()
    }

    /// 1-norm over the smallest scalar elements.
    pub fn one_norm(&self) -> f64 {
        self.groups
            .iter()
            .flat_map(|g| g.rows.iter())
            .flat_map(|r| r.iter())
            .map(|v| v.abs())
            .sum()
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(
        items: &[usize],
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Builds the multicorrelance array of all reductions.
pub fn multicorrelance_array(rho: &DensityMatrix) -> Result<MulticorrelanceArray> {
    let n_modes = rho.structure().mode_count();
    if n_modes < 2 {
        return Err(CorrkitError::UnsupportedStructure {
            reason: "multicorrelance array requires at least two modes".into(),
        });
    }
    let all_modes: Vec<usize> = (1..=n_modes).collect();
    let mut groups = Vec::new();
    for size in 2..=n_modes {
        for combo in combinations(&all_modes, size) {
            groups.push(partitional_vector(rho, &combo)?);
        }
    }
    Ok(MulticorrelanceArray { groups })
}

/// 1-norm of the multicorrelance array with its normalized value.
pub fn absolute_multicorrelance(rho: &DensityMatrix) -> Result<RawNormalized> {
    absolute_multicorrelance_with(rho, &MultiNorm::default())
}

pub fn absolute_multicorrelance_with(
    rho: &DensityMatrix,
    norm: &MultiNorm,
) -> Result<RawNormalized> {
    let array = multicorrelance_array(rho)?;
    let raw = array.one_norm();
    let denom = norm.absolute.unwrap_or(array.scalar_count() as f64);
    Ok(RawNormalized {
        raw,
        normalized: raw / denom,
    })
}
