use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::triangulation::Triangulation;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PivotError {
    #[error("requested {h} pivots from a {rows}x{cols} matrix")]
    TooMany { h: usize, rows: usize, cols: usize },
    #[error("zero pivot after {found} of {h} rounds")]
    RankDeficient { found: usize, h: usize },
}

/// Picks `h` rows and columns by full-pivot elimination.
///
/// Each round takes the entry of largest absolute value outside the chosen
/// rows and columns, the first one in `(row, col)` order on ties, and then
/// eliminates its row and column. The elimination is applied as a Schur
/// complement update `a_rc −= (a_r,col · a_row,c) / p`, which is symmetric in
/// rows and columns, so transposing the input transposes every intermediate
/// matrix bit for bit. Returns sorted index sets.
pub fn select_submatrix(m: &DMatrix<f64>, h: usize) -> Result<(Vec<usize>, Vec<usize>), PivotError> {
    let (rows, cols) = m.shape();
    if h > rows || h > cols {
        return Err(PivotError::TooMany { h, rows, cols });
    }
    let mut a = m.clone();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];
    let mut r_set = Vec::with_capacity(h);
    let mut c_set = Vec::with_capacity(h);
    for round in 0..h {
        let mut best = (0.0, usize::MAX, usize::MAX);
        for r in (0..rows).filter(|&r| !row_used[r]) {
            for c in (0..cols).filter(|&c| !col_used[c]) {
                let v = a[(r, c)].abs();
                if v > best.0 {
                    best = (v, r, c);
                }
            }
        }
        let (v, pr, pc) = best;
        if !(v > 0.0) {
            return Err(PivotError::RankDeficient { found: round, h });
        }
        let p = a[(pr, pc)];
        for r in (0..rows).filter(|&r| !row_used[r] && r != pr) {
            for c in (0..cols).filter(|&c| !col_used[c] && c != pc) {
                a[(r, c)] -= (a[(r, pc)] * a[(pr, c)]) / p;
            }
        }
        for r in 0..rows {
            if r != pr {
                a[(r, pc)] = 0.0;
            }
        }
        for c in 0..cols {
            if c != pc {
                a[(pr, c)] = 0.0;
            }
        }
        row_used[pr] = true;
        col_used[pc] = true;
        r_set.push(pr);
        c_set.push(pc);
    }
    r_set.sort_unstable();
    c_set.sort_unstable();
    Ok((r_set, c_set))
}

/// The two edge partitions of the certification: equations kept exactly
/// (`eq`) versus approximately (`sim`), and parameters varied (`var`) versus
/// held at their input values (`fixed`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub sim: Vec<usize>,
    pub eq: Vec<usize>,
    pub fixed: Vec<usize>,
    pub var: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("edge index {0} out of range")]
    OutOfRange(usize),
    #[error("duplicate edge index {0}")]
    Duplicate(usize),
    #[error("|eq| = {eq} and |var| = {var} differ")]
    SizeMismatch { eq: usize, var: usize },
}

fn complement(m: usize, set: &[usize]) -> Result<Vec<usize>, PartitionError> {
    let mut member = vec![false; m];
    for &i in set {
        if i >= m {
            return Err(PartitionError::OutOfRange(i));
        }
        if member[i] {
            return Err(PartitionError::Duplicate(i));
        }
        member[i] = true;
    }
    Ok((0..m).filter(|&i| !member[i]).collect())
}

impl Partition {
    /// Builds the partition with `eq` and `var` given over `m` edges.
    pub fn new(m: usize, eq: &[usize], var: &[usize]) -> Result<Self, PartitionError> {
        if eq.len() != var.len() {
            return Err(PartitionError::SizeMismatch {
                eq: eq.len(),
                var: var.len(),
            });
        }
        let sim = complement(m, eq)?;
        let fixed = complement(m, var)?;
        let mut eq = eq.to_vec();
        let mut var = var.to_vec();
        eq.sort_unstable();
        var.sort_unstable();
        Ok(Partition { sim, eq, fixed, var })
    }
}

/// Partition from the rows `r` (kept equations) and columns `c` (varied
/// parameters) returned by [`select_submatrix`].
pub fn make_partition(t: &Triangulation, r: &[usize], c: &[usize]) -> Result<Partition, PartitionError> {
    Partition::new(t.num_edges(), r, c)
}
