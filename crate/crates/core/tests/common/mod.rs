//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's algorithms; only its data types are shared.

#![allow(dead_code)]

use indexmap::IndexMap;
use steplinalg::eigen::{EigenResult, Eigenvalue};
use steplinalg::linsolve::{Classification, SolveResult};
use steplinalg::random::{seeded, small_matrix};
use steplinalg::{CharPoly, Matrix, Rational};

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| (0..a.cols()).map(|k| a.get(i, k) * b.get(k, j)).sum())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut next = p.clone();
            next.insert(pos, n - 1);
            out.push(next);
        }
    }
    out
}

fn sign(p: &[usize]) -> i64 {
    let inversions = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// det(A) = Σ_σ sgn(σ) Π A[i, σ(i)].
pub fn det_perm(a: &Matrix) -> Rational {
    assert!(a.is_square());
    let n = a.rows();
    permutations(n)
        .iter()
        .map(|p| {
            let prod = (0..n).fold(Rational::one(), |acc, i| acc * a.get(i, p[i]));
            prod * r(sign(p))
        })
        .sum()
}

/// Reduced row echelon form with the list of pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..m.cols() {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(top, p);
        let inv = rows[top][c].recip().unwrap();
        rows[top] = rows[top].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != top && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[top].clone();
                rows[i] = rows[i].iter().zip(&pivot_row).map(|(x, y)| x - &(&f * y)).collect();
            }
        }
        pivots.push(c);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    (Matrix::from_rows(rows).unwrap(), pivots)
}

/// Free-variable basis of the null space of the first `n` columns of `reduced`.
fn nullspace_of(reduced: &Matrix, pivots: &[usize], n: usize) -> Vec<Matrix> {
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -reduced.get(row, free);
            }
            Matrix::column(v).unwrap()
        })
        .collect()
}

pub fn nullspace(m: &Matrix) -> Vec<Matrix> {
    let (reduced, pivots) = rref(m);
    nullspace_of(&reduced, &pivots, m.cols())
}

/// Inverse by row-reducing `[A | I]`.
pub fn inverse_gj(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| if j < n { a.get(i, j).clone() } else if j - n == i { r(1) } else { r(0) });
    let (reduced, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| reduced.get(i, j + n).clone()))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Largest k with a nonzero k x k minor.
pub fn rank_minor(m: &Matrix) -> usize {
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rs in combinations(m.rows(), k) {
            for cs in combinations(m.cols(), k) {
                let sub = Matrix::from_fn(k, k, |i, j| m.get(rs[i], cs[j]).clone());
                if !det_perm(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub fn classify(a: &Matrix, b: &Matrix) -> Classification {
    let ra = rank_minor(a);
    let rab = rank_minor(&a.augment(b).unwrap());
    if ra < rab {
        Classification::Inconsistent
    } else if ra == a.cols() {
        Classification::Unique
    } else {
        Classification::Infinite
    }
}

/// Solution set with free variables parameterized in column order and the
/// particular solution taking all free variables as 0.
pub fn solve_oracle(a: &Matrix, b: &Matrix) -> SolveResult {
    let classification = classify(a, b);
    if classification == Classification::Inconsistent {
        return SolveResult { classification, particular_solution: None, nullspace_basis: vec![] };
    }
    let n = a.cols();
    let (reduced, pivots) = rref(&a.augment(b).unwrap());
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = reduced.get(row, n).clone();
    }
    SolveResult {
        classification,
        particular_solution: Some(Matrix::column(x).unwrap()),
        nullspace_basis: nullspace_of(&reduced, &pivots, n),
    }
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// det(λI - A) by Lagrange interpolation through λ = 0..=n.
pub fn charpoly_oracle(a: &Matrix) -> CharPoly {
    let n = a.rows();
    let xs: Vec<Rational> = (0..=n as i64).map(r).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|x| det_perm(&Matrix::from_fn(n, n, |i, j| if i == j { x - a.get(i, j) } else { -a.get(i, j) })))
        .collect();
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (k, yk) in ys.iter().enumerate() {
        let mut basis = vec![r(1)];
        let mut denom = r(1);
        for (m, xm) in xs.iter().enumerate() {
            if m != k {
                basis = poly_mul(&basis, &[-xm, r(1)]);
                denom = denom * (&xs[k] - xm);
            }
        }
        let scale = yk.checked_div(&denom).unwrap();
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c = &*c + &(b * &scale);
        }
    }
    CharPoly::new(coeffs)
}

fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by (λ - root); the caller guarantees a zero remainder.
fn deflate(p: &[Rational], root: &Rational) -> Vec<Rational> {
    let d = p.len() - 1;
    let mut out = vec![Rational::zero(); d];
    let mut carry = Rational::zero();
    for i in (0..d).rev() {
        carry = &p[i + 1] + &(carry * root);
        out[i] = carry.clone();
    }
    out
}

fn to_f64(x: &Rational) -> f64 {
    use std::str::FromStr;
    f64::from_str(&x.numer().to_string()).unwrap() / f64::from_str(&x.denom().to_string()).unwrap()
}

/// Approximate complex roots of a monic polynomial (Durand–Kerner).
fn approx_roots(p: &[Rational]) -> Vec<(f64, f64)> {
    let d = p.len() - 1;
    let c: Vec<f64> = p.iter().map(to_f64).collect();
    let eval_c = |z: (f64, f64)| {
        c.iter().rev().fold((0.0, 0.0), |(ar, ai), &k| (ar * z.0 - ai * z.1 + k, ar * z.1 + ai * z.0))
    };
    let bound = 1.0 + c[..d].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..d)
        .map(|k| {
            let angle = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64;
            (bound * 0.9 * angle.cos(), bound * 0.9 * angle.sin())
        })
        .collect();
    for _ in 0..2000 {
        for i in 0..d {
            let num = eval_c(z[i]);
            let mut den = (1.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = (z[i].0 - zj.0, z[i].1 - zj.1);
                    den = (den.0 * diff.0 - den.1 * diff.1, den.0 * diff.1 + den.1 * diff.0);
                }
            }
            let norm = den.0 * den.0 + den.1 * den.1;
            if norm == 0.0 {
                continue;
            }
            let step = ((num.0 * den.0 + num.1 * den.1) / norm, (num.1 * den.0 - num.0 * den.1) / norm);
            z[i] = (z[i].0 - step.0, z[i].1 - step.1);
        }
    }
    z
}

fn lcm_of_denominators(a: &Matrix) -> i64 {
    use num_integer::Integer;
    a.entries().iter().fold(1i64, |l, x| l.lcm(&x.denom().to_string().parse::<i64>().unwrap()))
}

fn order_key(x: &Rational) -> (Rational, bool) {
    (x.abs(), x.is_negative())
}

/// Rational eigenvalues, residual factor and eigenspaces, found by numeric
/// localization followed by exact confirmation. Every root of the
/// characteristic polynomial is an integer multiple of 1/L, L the lcm of the
/// entry denominators.
pub fn eigen_oracle(a: &Matrix) -> EigenResult {
    let n = a.rows();
    let l = lcm_of_denominators(a);
    let mut p = charpoly_oracle(a).coefficients;
    let mut found: Vec<(Rational, usize)> = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        match found.first_mut() {
            Some(z) => z.1 += 1,
            None => found.push((r(0), 1)),
        }
    }
    loop {
        if p.len() <= 1 {
            break;
        }
        let mut progress = false;
        for (re, im) in approx_roots(&p) {
            if im.abs() > 1e-3 * (1.0 + re.abs()) {
                continue;
            }
            let centre = (re * l as f64).round() as i64;
            for mu in centre - 2..=centre + 2 {
                let cand = q(mu, l);
                if cand.is_zero() || p.len() <= 1 || !eval(&p, &cand).is_zero() {
                    continue;
                }
                let mut mult = 0;
                while p.len() > 1 && eval(&p, &cand).is_zero() {
                    p = deflate(&p, &cand);
                    mult += 1;
                }
                found.push((cand, mult));
                progress = true;
            }
            if progress {
                break;
            }
        }
        if !progress {
            break;
        }
    }
    found.sort_by_key(|x| order_key(&x.0));
    let eigenvectors: IndexMap<Rational, Vec<Matrix>> = found
        .iter()
        .map(|(lambda, _)| {
            let shifted = Matrix::from_fn(n, n, |i, j| if i == j { a.get(i, j) - lambda } else { a.get(i, j).clone() });
            (lambda.clone(), nullspace(&shifted))
        })
        .collect();
    EigenResult {
        eigenvalues: found.into_iter().map(|(value, multiplicity)| Eigenvalue { value, multiplicity }).collect(),
        residual_factor: CharPoly::new(p),
        eigenvectors,
    }
}

/// A deterministic corpus of small square matrices for `n` in `dims`.
pub fn corpus(seed: u64, count: usize, dims: &[usize]) -> Vec<Matrix> {
    let mut rng = seeded(seed);
    (0..count).map(|i| {
        let n = dims[i % dims.len()];
        small_matrix(&mut rng, n, n, 9)
    }).collect()
}

/// Matrices with known rational eigenstructure: P·D·P⁻¹ for integer
/// unimodular-ish P and small integer or half-integer diagonal D.
pub fn diagonalizable(seed: u64, n: usize) -> Matrix {
    use rand::Rng;
    let mut rng = seeded(seed);
    let p = loop {
        let p = Matrix::from_fn(n, n, |_, _| r(rng.random_range(-2..=2)));
        if !det_perm(&p).is_zero() {
            break p;
        }
    };
    let d = Matrix::from_fn(n, n, |i, j| if i == j { q(rng.random_range(-6..=6), rng.random_range(1..=2)) } else { r(0) });
    mat_mul(&mat_mul(&p, &d), &inverse_gj(&p).unwrap())
}
