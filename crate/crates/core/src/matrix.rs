//! Dense row-major matrices over [`Rational`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "MatrixRepr", try_from = "MatrixRepr")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

/// Wire form: `{"rows": r, "cols": c, "entries": [["1","1/2"],["-3","0.25"]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Rational>>,
}

impl From<Matrix> for MatrixRepr {
    fn from(m: Matrix) -> Self {
        let entries = m.entries.chunks(m.cols).map(<[Rational]>::to_vec).collect();
        MatrixRepr { rows: m.rows, cols: m.cols, entries }
    }
}

impl TryFrom<MatrixRepr> for Matrix {
    type Error = Error;

    fn try_from(repr: MatrixRepr) -> Result<Self> {
        if repr.entries.len() != repr.rows || repr.entries.iter().any(|r| r.len() != repr.cols) {
            return Err(Error::InvalidMatrix(format!(
                "declared {}x{} but entries do not match that shape",
                repr.rows, repr.cols
            )));
        }
        Matrix::new(repr.rows, repr.cols, repr.entries.into_iter().flatten().collect())
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!("dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidMatrix("rows have different lengths".into()));
        }
        Matrix::new(rows.len(), cols, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for integer matrices, mostly for tests and demos.
    ///
    /// Panics on an empty or ragged input.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        let entries = rows.iter().flatten().map(|&v| Rational::from(v)).collect();
        Matrix::new(rows.len(), C, entries).expect("non-empty integer matrix")
    }

    /// Parses a grid of string cells such as `[["1", "1/2"], ["0.25", "-3"]]`.
    pub fn parse_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|c| c.as_ref().parse()).collect::<Result<Vec<Rational>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(parsed)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let entries = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Matrix { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { Rational::one() } else { Rational::zero() })
    }

    /// Column vector built from `values`.
    pub fn column(values: Vec<Rational>) -> Result<Self> {
        Matrix::new(values.len(), 1, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn same_shape(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_matrix(&self, i: usize) -> Matrix {
        Matrix { rows: 1, cols: self.cols, entries: self.row(i).to_vec() }
    }

    pub fn col_matrix(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    fn check_same_shape(&self, other: &Matrix, op: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "cannot {op} {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "add")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other, "subtract")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub(crate) fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Matrix {
        debug_assert!(self.same_shape(other));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        self.map(|x| c * x)
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    /// Keeps the rows in `row_set` and the columns in `col_set`, in the given order.
    pub fn submatrix(&self, row_set: &[usize], col_set: &[usize]) -> Result<Matrix> {
        if let Some(&bad) = row_set.iter().find(|&&i| i >= self.rows) {
            return Err(Error::DimensionMismatch(format!("row {bad} out of range for {} rows", self.rows)));
        }
        if let Some(&bad) = col_set.iter().find(|&&j| j >= self.cols) {
            return Err(Error::DimensionMismatch(format!("column {bad} out of range for {} columns", self.cols)));
        }
        let entries = row_set
            .iter()
            .flat_map(|&i| col_set.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        Matrix::new(row_set.len(), col_set.len(), entries)
    }

    /// The matrix with row `i` and column `j` removed. Requires at least 2 rows and columns.
    pub fn minor(&self, i: usize, j: usize) -> Result<Matrix> {
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        self.submatrix(&rows, &cols)
    }

    /// `[self | other]`.
    pub fn augment(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot augment {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Copy of `self` with column `j` replaced by the single column of `col`.
    pub fn with_column(&self, j: usize, col: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            if c == j {
                col.get(r, 0).clone()
            } else {
                self.get(r, c).clone()
            }
        })
    }

    /// Zero-pads to `rows x cols` (never shrinks).
    pub fn pad(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// Top-left `rows x cols` block.
    pub fn crop(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(i, j).clone())
    }

    pub(crate) fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self.get(row0 + i, col0 + j).clone())
    }

    /// Reassembles a square matrix from four equally sized square quadrants.
    pub(crate) fn from_quadrants(q11: &Matrix, q12: &Matrix, q21: &Matrix, q22: &Matrix) -> Matrix {
        let h = q11.rows;
        Matrix::from_fn(2 * h, 2 * h, |i, j| {
            let q = match (i < h, j < h) {
                (true, true) => q11,
                (true, false) => q12,
                (false, true) => q21,
                (false, false) => q22,
            };
            q.get(i % h, j % h).clone()
        })
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> Rational {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Rational::abs).sum::<Rational>())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
