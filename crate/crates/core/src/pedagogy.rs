//! Checking the 2x2 Strassen-style schemes through linearity.
//!
//! `A × B` is linear in `B`, and so is every scheme in [`crate::matmul`]
//! (each product has one factor that is a fixed combination of `B` blocks).
//! Two linear maps agree everywhere once they agree on a basis, so it is
//! enough to check `A × Eij` for the four matrix units `E11, E12, E21, E22`
//! plus the linearity of the scheme itself. Symbolic entries `a, b, c, d` are
//! realized by random rational samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matmul::{mul_strassen_counted, product, strassen_into, StrassenConfig, Variant};
use crate::matrix::Matrix;
use crate::random::{seeded, small_matrix, small_rational};
use crate::rational::Rational;
use crate::trace::{inputs, Draft, StepKind, Task, Trace, Tracer};

const SYMBOLS: [[&str; 2]; 2] = [["a", "b"], ["c", "d"]];

/// The instance used for display: `a = 1, b = 2, c = 3, d = 4`.
pub fn display_instance() -> Matrix {
    Matrix::from_ints(&[[1, 2], [3, 4]])
}

/// The 2x2 matrix with 1 at `(i, j)` and 0 elsewhere.
pub fn unit(i: usize, j: usize) -> Matrix {
    Matrix::from_fn(2, 2, |r, c| if (r, c) == (i, j) { Rational::one() } else { Rational::zero() })
}

/// `A × E11` keeps the first column of `A` and zeroes the second.
fn e11_pattern<T: Clone>(a: [[T; 2]; 2], zero: T) -> [[T; 2]; 2] {
    [[a[0][0].clone(), zero.clone()], [a[1][0].clone(), zero]]
}

fn swap_columns<T: Clone>(m: [[T; 2]; 2], k: usize) -> [[T; 2]; 2] {
    if k == 0 {
        return m;
    }
    [[m[0][1].clone(), m[0][0].clone()], [m[1][1].clone(), m[1][0].clone()]]
}

/// Pattern of `A × Eij` obtained from the `E11` pattern by permutation:
/// `Eij = Pᵢ·E11·Pⱼ` with `Pₖ` swapping index 0 and `k`, so
/// `A × Eij = ((A·Pᵢ) × E11)·Pⱼ`.
pub fn expected_pattern<T: Clone>(a: [[T; 2]; 2], zero: T, i: usize, j: usize) -> [[T; 2]; 2] {
    swap_columns(e11_pattern(swap_columns(a, i), zero), j)
}

pub fn symbolic_pattern(i: usize, j: usize) -> Vec<Vec<String>> {
    let sym = SYMBOLS.map(|row| row.map(String::from));
    expected_pattern(sym, "0".to_string(), i, j).iter().map(|r| r.to_vec()).collect()
}

fn to_array(m: &Matrix) -> [[Rational; 2]; 2] {
    [[m.get(0, 0).clone(), m.get(0, 1).clone()], [m.get(1, 0).clone(), m.get(1, 1).clone()]]
}

fn expected_product(a: &Matrix, i: usize, j: usize) -> Matrix {
    let p = expected_pattern(to_array(a), Rational::zero(), i, j);
    Matrix::from_rows(p.iter().map(|r| r.to_vec()).collect()).expect("2x2")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCheck {
    pub basis: String,
    pub basis_matrix: Matrix,
    /// `A × Eij` in terms of `A = [[a, b], [c, d]]`.
    pub expected_pattern: Vec<Vec<String>>,
    pub instance: Matrix,
    pub computed: Matrix,
    pub samples: usize,
    pub failures: usize,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearityProperty {
    /// `S(A, B1 + B2) = S(A, B1) + S(A, B2)`
    Additivity,
    /// `S(A, c·B1) = c·S(A, B1)`
    Homogeneity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearityCheck {
    pub sample: usize,
    pub property: LinearityProperty,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCheckReport {
    pub variant: Variant,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<BasisCheck>,
    pub bilinearity_checks: Vec<LinearityCheck>,
    pub overall_pass: bool,
}

const SAMPLE_BOUND: i64 = 9;

fn scheme_product(a: &Matrix, b: &Matrix, variant: Variant) -> Matrix {
    let cfg = StrassenConfig::new(1, variant).expect("threshold 1 is valid");
    mul_strassen_counted(a, b, cfg).expect("2x2 operands").0
}

/// Runs the four basis checks and the linearity checks, deterministically
/// from `seed`.
pub fn verify_sw_basis(variant: Variant, samples: usize, seed: u64) -> Result<BasisCheckReport> {
    if samples == 0 {
        return Err(Error::ConfigInvalid("at least one sample is required".into()));
    }
    let mut rng = seeded(seed);
    let instance = display_instance();
    let sample_as: Vec<Matrix> = (0..samples).map(|_| small_matrix(&mut rng, 2, 2, SAMPLE_BOUND)).collect();

    let mut checks = Vec::with_capacity(4);
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        let e = unit(i, j);
        let computed = scheme_product(&instance, &e, variant);
        let mut failures = usize::from(computed != expected_product(&instance, i, j));
        failures += sample_as
            .iter()
            .filter(|a| scheme_product(a, &e, variant) != expected_product(a, i, j))
            .count();
        checks.push(BasisCheck {
            basis: format!("E{}{}", i + 1, j + 1),
            basis_matrix: e,
            expected_pattern: symbolic_pattern(i, j),
            instance: instance.clone(),
            computed,
            samples: samples + 1,
            failures,
            passed: failures == 0,
        });
    }

    let mut bilinearity_checks = Vec::with_capacity(2 * samples);
    for sample in 0..samples {
        let a = small_matrix(&mut rng, 2, 2, SAMPLE_BOUND);
        let b1 = small_matrix(&mut rng, 2, 2, SAMPLE_BOUND);
        let b2 = small_matrix(&mut rng, 2, 2, SAMPLE_BOUND);
        let c = small_rational(&mut rng, SAMPLE_BOUND);
        let s1 = scheme_product(&a, &b1, variant);
        let s2 = scheme_product(&a, &b2, variant);
        let sum = scheme_product(&a, &b1.add(&b2).expect("2x2"), variant);
        bilinearity_checks.push(LinearityCheck {
            sample,
            property: LinearityProperty::Additivity,
            passed: sum == s1.add(&s2).expect("2x2"),
        });
        let scaled = scheme_product(&a, &b1.scale(&c), variant);
        bilinearity_checks.push(LinearityCheck {
            sample,
            property: LinearityProperty::Homogeneity,
            passed: scaled == s1.scale(&c),
        });
    }

    let overall_pass = checks.iter().all(|c| c.passed) && bilinearity_checks.iter().all(|c| c.passed);
    Ok(BasisCheckReport { variant, samples, seed, checks, bilinearity_checks, overall_pass })
}

impl BasisCheckReport {
    /// Plain-text pass/fail table.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "Strassen-style 2x2 check, variant {}, {} random samples, seed {}\n\n",
            self.variant, self.samples, self.seed
        );
        out.push_str(&format!("{:<6} {:<18} {:<18} {:>8}  {}\n", "basis", "expected A×E", "computed (1,2,3,4)", "samples", "result"));
        for c in &self.checks {
            let pattern = format!(
                "[{} {}; {} {}]",
                c.expected_pattern[0][0], c.expected_pattern[0][1], c.expected_pattern[1][0], c.expected_pattern[1][1]
            );
            let computed = format!(
                "[{} {}; {} {}]",
                c.computed.get(0, 0),
                c.computed.get(0, 1),
                c.computed.get(1, 0),
                c.computed.get(1, 1)
            );
            out.push_str(&format!(
                "{:<6} {:<18} {:<18} {:>8}  {}\n",
                c.basis,
                pattern,
                computed,
                c.samples,
                if c.passed { "PASS".to_string() } else { format!("FAIL ({} mismatches)", c.failures) }
            ));
        }
        let count = |p: LinearityProperty| {
            let all = self.bilinearity_checks.iter().filter(|c| c.property == p);
            let total = all.clone().count();
            let ok = all.filter(|c| c.passed).count();
            (ok, total)
        };
        let (add_ok, add_total) = count(LinearityProperty::Additivity);
        let (hom_ok, hom_total) = count(LinearityProperty::Homogeneity);
        out.push_str(&format!("\nadditivity in B:  {add_ok}/{add_total}\nhomogeneity in B: {hom_ok}/{hom_total}\n"));
        out.push_str(&format!("\noverall: {}\n", if self.overall_pass { "PASS" } else { "FAIL" }));
        out
    }
}

/// Shows `A × B` rebuilt from the basis products for the display instance `A`.
pub fn basis_decomposition_demo(b: &Matrix) -> Result<Trace> {
    basis_decomposition_demo_for(&display_instance(), b)
}

/// Writes `B = Σ B[i][j]·Eij`, multiplies `A` by each unit with threshold-1
/// Winograd recursion, and recombines the scaled products.
pub fn basis_decomposition_demo_for(a: &Matrix, b: &Matrix) -> Result<Trace> {
    for m in [a, b] {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::NotTwoByTwo { rows: m.rows(), cols: m.cols() });
        }
    }
    let cfg = StrassenConfig::new(1, Variant::Winograd)?;
    let mut t = Tracer::recording(Task::Multiply, "basis_decomposition", inputs([("A", a), ("B", b)]));
    let units = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let nonzero: Vec<(usize, usize)> = units.into_iter().filter(|&(i, j)| !b.get(i, j).is_zero()).collect();

    for &(i, j) in &nonzero {
        let coeff = b.get(i, j).clone();
        t.mults(1);
        let term = unit(i, j).scale(&coeff);
        t.emit(StepKind::BasisTerm, || {
            Draft::new(format!("B[{},{}] = {coeff} contributes ({coeff})·E{}{}", i + 1, j + 1, i + 1, j + 1), term.clone())
                .operand(format!("E{}{}", i + 1, j + 1), unit(i, j))
        });
    }
    t.emit(StepKind::Combine, || {
        let full: Vec<String> = units.iter().map(|&(i, j)| format!("({})·E{}{}", b.get(i, j), i + 1, j + 1)).collect();
        Draft::new(format!("B = {}", full.join(" + ")), b.clone())
    });

    let mut total = Matrix::zero(2, 2);
    for (k, &(i, j)) in nonzero.iter().enumerate() {
        let coeff = b.get(i, j).clone();
        let e = unit(i, j);
        let basis_product = t.muted(|t| strassen_into(t, a, &e, cfg));
        t.mults(4);
        let scaled = basis_product.scale(&coeff);
        t.emit(StepKind::BasisProduct, || {
            Draft::new(
                format!(
                    "A × E{}{} by Winograd recursion moves column {} of A into column {}; scale by {coeff}",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                ),
                scaled.clone(),
            )
            .operand("A×E", basis_product.clone())
        });
        if k > 0 {
            t.adds(4);
        }
        total = total.add(&scaled).expect("2x2");
    }
    t.emit(StepKind::Reconstruct, || {
        let parts: Vec<String> = nonzero.iter().map(|&(i, j)| format!("({})·(A×E{}{})", b.get(i, j), i + 1, j + 1)).collect();
        let sum = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        Draft::new(format!("By linearity A × B = {sum}"), total.clone())
    });

    let direct = t.muted(|t| product(t, a, b));
    let agrees = direct == total;
    t.emit(StepKind::Verify, || {
        Draft::new(
            if agrees {
                "The reconstruction equals the dot-product result A × B".to_string()
            } else {
                "The reconstruction DIFFERS from the dot-product result A × B".to_string()
            },
            total.clone(),
        )
        .operand("dot_product", direct.clone())
    });
    t.finish(total)
}
