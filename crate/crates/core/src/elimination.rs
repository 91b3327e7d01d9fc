//! Gauss–Jordan elimination to reduced row echelon form, shared by the linear
//! solver and the eigenvector search.

use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::trace::{Draft, StepKind, Tracer};

pub(crate) struct Rref {
    pub matrix: Matrix,
    /// Pivot column of each nonzero row, in row order.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns below `limit` without a pivot.
    pub fn free_columns(&self, limit: usize) -> Vec<usize> {
        (0..limit).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Null space basis of the first `limit` columns, one vector per free
    /// column with that variable set to 1 and the other free variables to 0.
    pub fn nullspace(&self, limit: usize) -> Vec<Matrix> {
        self.free_columns(limit)
            .into_iter()
            .map(|f| self.nullspace_vector(f, limit))
            .collect()
    }

    pub fn nullspace_vector(&self, free: usize, limit: usize) -> Matrix {
        let mut v = vec![Rational::zero(); limit];
        v[free] = Rational::one();
        for (row, &p) in self.pivots.iter().enumerate() {
            v[p] = -self.matrix.get(row, free);
        }
        Matrix::column(v).expect("limit ≥ 1")
    }
}

/// Reduces `m` to RREF, choosing pivots only among the first `pivot_cols`
/// columns. The pivot is the first nonzero entry on or below the current row.
pub(crate) fn rref_into(t: &mut Tracer, m: &Matrix, pivot_cols: usize, label: &str) -> Rref {
    let mut m = m.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let prefix = if label.is_empty() { String::new() } else { format!("[{label}] ") };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            m.swap_rows(r, p);
            t.emit(StepKind::PivotSwap, || {
                Draft::new(format!("{prefix}Swap R{} and R{} to bring a nonzero pivot into column {}", r + 1, p + 1, c + 1), m.clone())
            });
        }
        let pivot = m.get(r, c).clone();
        if !pivot.is_one() {
            let width = cols - c - 1;
            t.mults(width as u64);
            let inv = pivot.recip().expect("pivot is nonzero");
            for j in c + 1..cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            m.set(r, c, Rational::one());
            t.emit(StepKind::RowScale, || {
                Draft::new(format!("{prefix}R{} ← R{} / ({pivot})", r + 1, r + 1), m.clone()).operand("pivot", pivot.clone())
            });
        }
        for i in (0..rows).filter(|&i| i != r) {
            if m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            let width = (cols - c - 1) as u64;
            t.mults(width);
            t.subs(width);
            for j in c + 1..cols {
                let v = m.get(i, j) - &(&factor * m.get(r, j));
                m.set(i, j, v);
            }
            m.set(i, c, Rational::zero());
            t.emit(StepKind::RowEliminate, || {
                Draft::new(format!("{prefix}R{} ← R{} - ({factor})·R{}", i + 1, i + 1, r + 1), m.clone())
                    .operand("factor", factor.clone())
            });
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: m, pivots }
}
