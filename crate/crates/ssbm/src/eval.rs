//! Partition scoring: confusion matrices, normalized mutual information,
//! and block-count recovery reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Partition;
use crate::learner::FitResult;

/// Cross-tabulation of two partitions over the same nodes: `count(i, j)` is
/// the number of nodes in block `i` of the first and block `j` of the
/// second.
#[derive(Clone, Debug)]
pub struct ConfusionMatrix {
    counts: Vec<usize>,
    rows: usize,
    cols: usize,
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
    total: usize,
}

impl ConfusionMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn count(&self, i: usize, j: usize) -> usize {
        self.counts[i * self.cols + j]
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

/// Builds the confusion matrix of two partitions of the same node set.
pub fn confusion(a: &Partition, b: &Partition) -> Result<ConfusionMatrix> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let rows = a.k();
    let cols = b.k();
    let mut counts = vec![0usize; rows * cols];
    for (&ba, &bb) in a.assignment().iter().zip(b.assignment()) {
        counts[ba * cols + bb] += 1;
    }
    let row_sums: Vec<usize> = (0..rows)
        .map(|i| counts[i * cols..(i + 1) * cols].iter().sum())
        .collect();
    let col_sums: Vec<usize> = (0..cols)
        .map(|j| (0..rows).map(|i| counts[i * cols + j]).sum())
        .collect();
    Ok(ConfusionMatrix {
        counts,
        rows,
        cols,
        row_sums,
        col_sums,
        total: a.len(),
    })
}

/// Normalized mutual information between two partitions, in `[0, 1]`.
///
/// Computed from the confusion matrix as
/// `-2 * sum m_ij * ln(m_ij * M / (m_i. * m_.j))` over
/// `sum m_i. * ln(m_i. / M) + sum m_.j * ln(m_.j / M)`, with the convention
/// `0 * ln(.) = 0`. Equal partitions (up to relabeling) score 1; when both
/// partitions are a single block the ratio degenerates and the result is 1
/// since they are then identical, while a single block against a finer
/// partition scores 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    let m = confusion(a, b)?;
    let total = m.total() as f64;
    let mut numerator = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let joint = m.count(i, j);
            if joint > 0 {
                let joint = joint as f64;
                numerator -= 2.0
                    * joint
                    * (joint * total / (m.row_sums()[i] as f64 * m.col_sums()[j] as f64)).ln();
            }
        }
    }
    let mut denominator = 0.0;
    for &r in m.row_sums() {
        denominator += r as f64 * (r as f64 / total).ln();
    }
    for &c in m.col_sums() {
        denominator += c as f64 * (c as f64 / total).ln();
    }
    if denominator == 0.0 {
        // Both partitions are a single block covering every node.
        return Ok(1.0);
    }
    Ok(numerator / denominator)
}

/// Block-count recovery report in the `NMI / K` style.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct KRecovery {
    pub k_true: usize,
    pub k_found: usize,
    pub nmi: f64,
}

/// Bundles the NMI between a fit's hard partition and the ground truth with
/// both block counts.
pub fn k_recovery(result: &FitResult, truth: &Partition) -> Result<KRecovery> {
    Ok(KRecovery {
        k_true: truth.k(),
        k_found: result.k_found(),
        nmi: nmi(truth, &result.best_partition)?,
    })
}
