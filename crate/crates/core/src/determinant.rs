//! Determinants by cofactor expansion, Sarrus' rule and LU elimination.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::trace::{inputs, Draft, StepKind, Task, Trace, Tracer};

/// Largest matrix Laplace expansion accepts (n! terms).
pub const LAPLACE_MAX_DIM: usize = 8;

pub(crate) fn require_square(a: &Matrix) -> Result<()> {
    if a.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare { rows: a.rows(), cols: a.cols() })
    }
}

/// Cofactor expansion along the first row, recursively.
pub fn det_laplace(a: &Matrix) -> Result<(Rational, Trace)> {
    require_square(a)?;
    if a.rows() > LAPLACE_MAX_DIM {
        return Err(Error::MethodInapplicable {
            method: "laplace".into(),
            reason: format!("cofactor expansion is limited to n ≤ {LAPLACE_MAX_DIM}, got n = {}", a.rows()),
            alternative: Some("lu".into()),
        });
    }
    let mut t = Tracer::recording(Task::Determinant, "laplace", inputs([("A", a)]));
    let det = if a.rows() == 1 {
        let d = a.get(0, 0).clone();
        t.emit(StepKind::Combine, || Draft::new(format!("A 1x1 determinant is its single entry: det = {d}"), d.clone()));
        d
    } else {
        laplace_into(&mut t, a, "")
    };
    let trace = t.finish(det.clone())?;
    Ok((det, trace))
}

fn laplace_into(t: &mut Tracer, a: &Matrix, path: &str) -> Rational {
    let n = a.rows();
    let prefix = if path.is_empty() { String::new() } else { format!("[{path}] ") };
    let mut terms = Vec::with_capacity(n);
    for j in 0..n {
        let minor = a.minor(0, j).expect("n ≥ 2");
        let minor_det = if minor.rows() == 1 {
            minor.get(0, 0).clone()
        } else {
            let child = if path.is_empty() { format!("M1,{}", j + 1) } else { format!("{path} › M1,{}", j + 1) };
            laplace_into(t, &minor, &child)
        };
        t.mults(1);
        let product = a.get(0, j) * &minor_det;
        let term = if j % 2 == 0 { product } else { -product };
        t.emit(StepKind::CofactorExpand, || {
            let sign = if j % 2 == 0 { "+" } else { "-" };
            Draft::new(
                format!(
                    "{prefix}Term {}: {sign}a[1,{}] · det(M1,{}) = {sign}({})·({}) = {term}",
                    j + 1,
                    j + 1,
                    j + 1,
                    a.get(0, j),
                    minor_det
                ),
                term.clone(),
            )
            .operand("entry", a.get(0, j).clone())
            .operand("minor", minor.clone())
            .operand("minor_det", minor_det.clone())
        });
        terms.push(term);
    }
    t.adds(((n - 1) / 2) as u64);
    t.subs((n / 2) as u64);
    let det: Rational = terms.iter().sum();
    t.emit(StepKind::Combine, || {
        let listed: Vec<String> = terms.iter().map(|v| format!("({v})")).collect();
        Draft::new(format!("{prefix}Sum the {n} signed terms: det = {} = {det}", listed.join(" + ")), det.clone())
            .operand("A", a.clone())
    });
    det
}

/// Sarrus' rule; 3x3 only.
pub fn det_sarrus(a: &Matrix) -> Result<(Rational, Trace)> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::NotThreeByThree { rows: a.rows(), cols: a.cols() });
    }
    let mut t = Tracer::recording(Task::Determinant, "sarrus", inputs([("A", a)]));
    let e = |i: usize, j: usize| a.get(i, j);
    let diagonal = |t: &mut Tracer, cells: [[(usize, usize); 3]; 3]| -> (Rational, Vec<String>) {
        t.mults(6);
        t.adds(2);
        let mut total = Rational::zero();
        let mut shown = Vec::new();
        for [p, q, r] in cells {
            let product = e(p.0, p.1) * e(q.0, q.1) * e(r.0, r.1);
            shown.push(format!("({})({})({})", e(p.0, p.1), e(q.0, q.1), e(r.0, r.1)));
            total = total + product;
        }
        (total, shown)
    };

    let (down, down_terms) = diagonal(&mut t, [[(0, 0), (1, 1), (2, 2)], [(0, 1), (1, 2), (2, 0)], [(0, 2), (1, 0), (2, 1)]]);
    t.emit(StepKind::DiagonalSum, || {
        Draft::new(format!("Down-diagonal products: {} = {down}", down_terms.join(" + ")), down.clone())
    });
    let (up, up_terms) = diagonal(&mut t, [[(0, 2), (1, 1), (2, 0)], [(0, 0), (1, 2), (2, 1)], [(0, 1), (1, 0), (2, 2)]]);
    t.emit(StepKind::DiagonalSum, || {
        Draft::new(format!("Up-diagonal products: {} = {up}", up_terms.join(" + ")), up.clone())
    });
    t.subs(1);
    let det = &down - &up;
    t.emit(StepKind::Combine, || {
        Draft::new(format!("det = ({down}) - ({up}) = {det}"), det.clone())
            .operand("down", down.clone())
            .operand("up", up.clone())
    });
    let trace = t.finish(det.clone())?;
    Ok((det, trace))
}

/// Doolittle elimination, swapping rows only when a pivot is exactly zero.
pub fn det_lu(a: &Matrix) -> Result<(Rational, Trace)> {
    require_square(a)?;
    let mut t = Tracer::recording(Task::Determinant, "lu", inputs([("A", a)]));
    let det = det_lu_into(&mut t, a);
    let trace = t.finish(det.clone())?;
    Ok((det, trace))
}

pub(crate) fn det_lu_into(t: &mut Tracer, a: &Matrix) -> Rational {
    let n = a.rows();
    let mut u = a.clone();
    let mut negated = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !u.get(r, k).is_zero()) else {
            let zero = Rational::zero();
            t.emit(StepKind::Singular, || {
                Draft::new(
                    format!("Column {} has no nonzero pivot on or below row {}: the matrix is singular, det = 0", k + 1, k + 1),
                    zero.clone(),
                )
                .operand("U", u.clone())
            });
            return zero;
        };
        if p != k {
            u.swap_rows(k, p);
            negated = !negated;
            t.emit(StepKind::PivotSwap, || {
                Draft::new(
                    format!("Pivot U[{},{}] is 0: swap rows {} and {} (determinant changes sign)", k + 1, k + 1, k + 1, p + 1),
                    u.clone(),
                )
            });
        }
        for i in k + 1..n {
            if u.get(i, k).is_zero() {
                continue;
            }
            let factor = u.get(i, k).checked_div(u.get(k, k)).expect("pivot is nonzero");
            let width = (n - k - 1) as u64;
            t.mults(1 + width);
            t.subs(width);
            for j in k..n {
                let v = if j == k { Rational::zero() } else { u.get(i, j) - &(&factor * u.get(k, j)) };
                u.set(i, j, v);
            }
            t.emit(StepKind::RowEliminate, || {
                Draft::new(
                    format!("R{} ← R{} - ({factor})·R{} (multiplier L[{},{}] = {factor})", i + 1, i + 1, k + 1, i + 1, k + 1),
                    u.clone(),
                )
                .operand("multiplier", factor.clone())
            });
        }
    }
    t.mults(n as u64 - 1);
    let product: Rational = (1..n).fold(u.get(0, 0).clone(), |acc, i| acc * u.get(i, i));
    let det = if negated { -product } else { product };
    t.emit(StepKind::DiagonalProduct, || {
        let diag: Vec<String> = (0..n).map(|i| format!("({})", u.get(i, i))).collect();
        let sign = if negated { "-" } else { "" };
        Draft::new(format!("det = {sign}{} = {det}", diag.join("·")), det.clone()).operand("U", u.clone())
    });
    det
}

/// Untraced determinant with operation counting.
pub(crate) fn det_counted(t: &mut Tracer, a: &Matrix) -> Rational {
    t.muted(|t| det_lu_into(t, a))
}
