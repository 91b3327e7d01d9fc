//! Characteristic polynomial (Faddeev–LeVerrier) and matrix inverses by the
//! adjugate (Cramer) and by the Cayley–Hamilton theorem.

use crate::determinant::{det_counted, det_lu_into, require_square};
use crate::error::{Error, Result};
use crate::matmul::product;
use crate::matrix::Matrix;
use crate::polynomial::CharPoly;
use crate::rational::Rational;
use crate::trace::{inputs, Draft, StepKind, Task, Trace, Tracer};

/// Monic characteristic polynomial `det(λI - A)`.
pub fn charpoly(a: &Matrix) -> Result<(CharPoly, Trace)> {
    require_square(a)?;
    let mut t = Tracer::recording(Task::Eigen, "charpoly", inputs([("A", a)]));
    let p = charpoly_into(&mut t, a);
    t.emit(StepKind::Assemble, || Draft::new(format!("p(λ) = {p}"), p.clone()));
    let trace = t.finish(p.clone())?;
    Ok((p, trace))
}

/// Faddeev–LeVerrier:
/// `M1 = I`, `c[n-k] = -tr(A·Mk)/k`, `M(k+1) = A·Mk + c[n-k]·I`.
pub(crate) fn charpoly_into(t: &mut Tracer, a: &Matrix) -> CharPoly {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Matrix::identity(n);
    for k in 1..=n {
        let am = product(t, a, &m);
        t.adds(n as u64 - 1);
        t.mults(1);
        let c = -(am.trace().checked_div(&Rational::from(k as i64)).expect("k ≥ 1"));
        coeffs[n - k] = c.clone();
        t.emit(StepKind::FaddeevIteration, || {
            Draft::new(
                format!("Iteration {k}: c{} = -tr(A·M{k})/{k} = -({})/{k} = {c}", n - k, am.trace()),
                c.clone(),
            )
            .operand(format!("M{k}"), m.clone())
            .operand(format!("A·M{k}"), am.clone())
        });
        if k < n {
            t.adds(n as u64);
            m = add_scalar_identity(&am, &c);
        }
    }
    CharPoly::new(coeffs)
}

fn add_scalar_identity(m: &Matrix, c: &Rational) -> Matrix {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| if i == j { m.get(i, j) + c } else { m.get(i, j).clone() })
}

/// `A⁻¹ = adj(A) / det(A)`.
pub fn inverse_cramer(a: &Matrix) -> Result<(Matrix, Trace)> {
    require_square(a)?;
    let mut t = Tracer::recording(Task::Inverse, "cramer", inputs([("A", a)]));
    let det = det_lu_into(&mut t, a);
    if det.is_zero() {
        return Err(Error::SingularMatrix("det(A) = 0, so A has no inverse".into()));
    }
    let n = a.rows();
    let mut adjugate = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let (minor, minor_det) = if n == 1 {
                (None, Rational::one())
            } else {
                let minor = a.minor(i, j).expect("n ≥ 2");
                let d = det_counted(&mut t, &minor);
                (Some(minor), d)
            };
            let cofactor = if (i + j) % 2 == 0 { minor_det.clone() } else { -minor_det.clone() };
            adjugate.set(j, i, cofactor.clone());
            t.emit(StepKind::Cofactor, || {
                let sign = if (i + j) % 2 == 0 { "+" } else { "-" };
                let draft = Draft::new(
                    format!(
                        "Cofactor C[{},{}] = {sign}det(M{},{}) = {cofactor}; it goes to adj(A)[{},{}]",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    ),
                    cofactor.clone(),
                );
                match &minor {
                    Some(m) => draft.operand("minor", m.clone()).operand("minor_det", minor_det.clone()),
                    None => draft,
                }
            });
        }
    }
    t.mults((n * n) as u64);
    let inv_det = det.recip().expect("nonzero determinant");
    let inverse = adjugate.scale(&inv_det);
    t.emit(StepKind::Scale, || {
        Draft::new(format!("A⁻¹ = adj(A) / det(A) = adj(A) / ({det})"), inverse.clone())
            .operand("adjugate", adjugate.clone())
            .operand("det", det.clone())
    });
    let trace = t.finish(inverse.clone())?;
    Ok((inverse, trace))
}

/// From `p(A) = 0`: `A⁻¹ = -(1/c0)(A^(n-1) + c(n-1)·A^(n-2) + … + c1·I)`,
/// accumulated in Horner form with dot-product multiplication.
pub fn inverse_cayley_hamilton(a: &Matrix) -> Result<(Matrix, Trace)> {
    require_square(a)?;
    let mut t = Tracer::recording(Task::Inverse, "cayley_hamilton", inputs([("A", a)]));
    let p = charpoly_into(&mut t, a);
    let c0 = p.coeff(0).clone();
    if c0.is_zero() {
        return Err(Error::SingularMatrix("the characteristic polynomial has c0 = 0, so A has no inverse".into()));
    }
    let n = a.rows();
    let mut acc = Matrix::identity(n);
    for j in 1..n {
        let coeff = p.coeff(n - j).clone();
        let prev = acc;
        let am = product(&mut t, a, &prev);
        t.adds(n as u64);
        acc = add_scalar_identity(&am, &coeff);
        t.emit(StepKind::PowerAccumulate, || {
            Draft::new(
                format!("B{j} = A·B{} + ({coeff})·I", j - 1),
                acc.clone(),
            )
            .operand(format!("B{}", j - 1), prev.clone())
            .operand(format!("c{}", n - j), coeff.clone())
        });
    }
    t.mults((n * n) as u64 + 1);
    let factor = -(c0.recip().expect("c0 is nonzero"));
    let inverse = acc.scale(&factor);
    t.emit(StepKind::Scale, || {
        Draft::new(format!("A⁻¹ = -(1/c0)·B{} with c0 = {c0}", n - 1), inverse.clone())
            .operand(format!("B{}", n - 1), acc.clone())
            .operand("c0", c0.clone())
    });
    let trace = t.finish(inverse.clone())?;
    Ok((inverse, trace))
}
