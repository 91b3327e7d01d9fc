//! Linear systems `A·x = b` by Gauss–Jordan elimination and by Cramer's rule.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::determinant::{det_lu_into, require_square};
use crate::elimination::rref_into;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::trace::{inputs, Draft, StepKind, Task, Trace, Tracer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Unique,
    Infinite,
    Inconsistent,
}

/// Every solution is `particular_solution + Σ tᵢ·nullspace_basis[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub classification: Classification,
    pub particular_solution: Option<Matrix>,
    pub nullspace_basis: Vec<Matrix>,
}

impl SolveResult {
    fn inconsistent() -> Self {
        SolveResult { classification: Classification::Inconsistent, particular_solution: None, nullspace_basis: vec![] }
    }
}

impl fmt::Display for SolveResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let column = |m: &Matrix| {
            let cells: Vec<String> = m.entries().iter().map(ToString::to_string).collect();
            format!("({})ᵀ", cells.join(", "))
        };
        match (self.classification, &self.particular_solution) {
            (Classification::Inconsistent, _) | (_, None) => write!(f, "no solution (inconsistent)"),
            (Classification::Unique, Some(x)) => write!(f, "unique solution x = {}", column(x)),
            (Classification::Infinite, Some(x)) => {
                write!(f, "infinitely many solutions x = {}", column(x))?;
                for (i, v) in self.nullspace_basis.iter().enumerate() {
                    write!(f, " + t{}·{}", i + 1, column(v))?;
                }
                Ok(())
            }
        }
    }
}

fn check_rhs(a: &Matrix, b: &Matrix) -> Result<()> {
    if b.cols() != 1 || b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side must be a {}x1 column, got {}x{}",
            a.rows(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Reduces `[A | b]` to RREF and reads off the solution set.
pub fn solve_gauss(a: &Matrix, b: &Matrix) -> Result<(SolveResult, Trace)> {
    check_rhs(a, b)?;
    let mut t = Tracer::recording(Task::Solve, "gauss", inputs([("A", a), ("b", b)]));
    let n = a.cols();
    let augmented = a.augment(b)?;
    let rref = rref_into(&mut t, &augmented, n, "");
    let m = &rref.matrix;
    let rank = rref.rank();
    let inconsistent = (rank..m.rows()).any(|i| !m.get(i, n).is_zero());
    let free = rref.free_columns(n);
    let classification = match (inconsistent, free.is_empty()) {
        (true, _) => Classification::Inconsistent,
        (false, true) => Classification::Unique,
        (false, false) => Classification::Infinite,
    };
    t.emit(StepKind::Classify, || {
        let aug_rank = rank + usize::from(inconsistent);
        let verdict = match classification {
            Classification::Inconsistent => "a row reads 0 = nonzero, so the system is inconsistent".to_string(),
            Classification::Unique => format!("rank equals the {n} unknowns, so the solution is unique"),
            Classification::Infinite => format!("{} free variable(s), so there are infinitely many solutions", free.len()),
        };
        Draft::new(format!("rank(A) = {rank}, rank([A|b]) = {aug_rank}: {verdict}"), Rational::from(rank as i64))
            .operand("rref", m.clone())
    });

    let result = if inconsistent {
        SolveResult::inconsistent()
    } else {
        let mut x = vec![Rational::zero(); n];
        for (row, &p) in rref.pivots.iter().enumerate() {
            x[p] = m.get(row, n).clone();
            t.emit(StepKind::BackSubstitute, || {
                let tail = if free.is_empty() { String::new() } else { " (free variables set to 0)".to_string() };
                Draft::new(format!("Row {}: x{} = {}{tail}", row + 1, p + 1, x[p]), x[p].clone())
            });
        }
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let v = rref.nullspace_vector(f, n);
            t.emit(StepKind::NullspaceVector, || {
                Draft::new(format!("Set free variable x{} = 1, the other free variables to 0: null space direction", f + 1), v.clone())
            });
            basis.push(v);
        }
        SolveResult {
            classification,
            particular_solution: Some(Matrix::column(x).expect("n ≥ 1")),
            nullspace_basis: basis,
        }
    };
    t.emit(StepKind::Assemble, || Draft::new(format!("Solution set: {result}"), result.clone()));
    let trace = t.finish(result.clone())?;
    Ok((result, trace))
}

/// `xᵢ = det(Aᵢ) / det(A)` where `Aᵢ` is `A` with column `i` replaced by `b`.
pub fn solve_cramer(a: &Matrix, b: &Matrix) -> Result<(SolveResult, Trace)> {
    require_square(a)?;
    check_rhs(a, b)?;
    let mut t = Tracer::recording(Task::Solve, "cramer", inputs([("A", a), ("b", b)]));
    let det = det_lu_into(&mut t, a);
    if det.is_zero() {
        return Err(Error::SingularMatrix(
            "det(A) = 0, so Cramer's rule does not apply; use gauss to classify the system".into(),
        ));
    }
    let n = a.cols();
    let mut column_dets = Vec::with_capacity(n);
    for i in 0..n {
        let replaced = a.with_column(i, b);
        let d = det_lu_into(&mut t, &replaced);
        t.emit(StepKind::ColumnDeterminant, || {
            Draft::new(format!("det(A{}) = {d} (column {} replaced by b)", i + 1, i + 1), d.clone())
                .operand(format!("A{}", i + 1), replaced.clone())
        });
        column_dets.push(d);
    }
    t.mults(n as u64);
    let x: Vec<Rational> = column_dets.iter().map(|d| d.checked_div(&det).expect("det is nonzero")).collect();
    let result = SolveResult {
        classification: Classification::Unique,
        particular_solution: Some(Matrix::column(x.clone()).expect("n ≥ 1")),
        nullspace_basis: vec![],
    };
    t.emit(StepKind::Assemble, || {
        let parts: Vec<String> = x
            .iter()
            .enumerate()
            .map(|(i, v)| format!("x{} = {}/{} = {v}", i + 1, column_dets[i], det))
            .collect();
        Draft::new(parts.join("; "), result.clone()).operand("det", det.clone())
    });
    let trace = t.finish(result.clone())?;
    Ok((result, trace))
}
