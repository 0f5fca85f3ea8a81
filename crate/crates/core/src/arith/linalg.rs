//! Exact Gauss-Jordan elimination over the rationals for small dense systems.
//!
//! Systems here are tall (hundreds of q-coefficients, a handful of unknowns),
//! so every row takes part in the elimination; consistency of the rows that
//! do not carry a pivot is what certifies a decomposition.

use super::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    /// Row `row` reduces to `0 = residual` with a nonzero residual.
    Inconsistent { row: usize, residual: Rat },
    DimensionMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub x: Vec<Rat>,
    pub rank: usize,
    /// Columns without a pivot; their unknowns are fixed to zero.
    pub free: Vec<usize>,
}

impl Solution {
    pub fn is_unique(&self) -> bool {
        self.free.is_empty()
    }
}

/// Solves `rows * x = rhs` exactly. `rows[i]` holds one equation's coefficients.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Result<Solution, SolveError> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.len() != rhs.len() || rows.iter().any(|r| r.len() != ncols) {
        return Err(SolveError::DimensionMismatch);
    }
    let mut m: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prow = 0;
    for col in 0..ncols {
        let Some(p) = (prow..m.len()).find(|&i| m[i][col].cmp0().is_ne()) else {
            continue;
        };
        m.swap(prow, p);
        let inv = Rat::from(m[prow][col].recip_ref());
        for v in m[prow].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = m[prow].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == prow || row[col].cmp0().is_eq() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(col) {
                if pv.cmp0().is_ne() {
                    *v -= Rat::from(&factor * pv);
                }
            }
        }
        pivots.push((prow, col));
        prow += 1;
        if prow == m.len() {
            break;
        }
    }

    if let Some(row) = (prow..m.len()).find(|&i| m[i][ncols].cmp0().is_ne()) {
        return Err(SolveError::Inconsistent {
            row,
            residual: m[row][ncols].clone(),
        });
    }

    let mut x = vec![Rat::new(); ncols];
    for &(r, c) in &pivots {
        x[c] = m[r][ncols].clone();
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..ncols).filter(|c| !pivot_cols.contains(c)).collect();
    Ok(Solution {
        x,
        rank: pivots.len(),
        free,
    })
}
