//! Exact rational eigenvalues and eigenspaces.
//!
//! The characteristic polynomial is rescaled so its rational roots become
//! integer roots of a monic integer polynomial. Those roots are searched in a
//! fixed order, each is deflated to full multiplicity, and anything left over
//! is reported as an unfactored residual instead of being approximated.

use std::fmt;

use indexmap::IndexMap;
use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::determinant::require_square;
use crate::elimination::rref_into;
use crate::error::Result;
use crate::inverse::charpoly_into;
use crate::matrix::Matrix;
use crate::polynomial::CharPoly;
use crate::rational::Rational;
use crate::trace::{inputs, Draft, StepKind, Task, Trace, Tracer};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: Rational,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenResult {
    pub eigenvalues: Vec<Eigenvalue>,
    /// Monic factor of the characteristic polynomial with no rational roots
    /// (the constant 1 when everything factored).
    #[serde(serialize_with = "coefficients_out", deserialize_with = "coefficients_in")]
    pub residual_factor: CharPoly,
    /// Eigenspace basis per eigenvalue: one column vector per free variable of
    /// RREF(A - λI), with that variable set to 1 and the other free ones to 0.
    pub eigenvectors: IndexMap<Rational, Vec<Matrix>>,
}

fn coefficients_out<S: Serializer>(p: &CharPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    p.coefficients.serialize(s)
}

fn coefficients_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CharPoly, D::Error> {
    Vec::<Rational>::deserialize(d).map(CharPoly::new)
}

impl EigenResult {
    pub fn is_fully_factored(&self) -> bool {
        self.residual_factor.degree() == 0
    }
}

impl fmt::Display for EigenResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.eigenvalues.is_empty() {
            write!(f, "no rational eigenvalues")?;
        } else {
            let listed: Vec<String> =
                self.eigenvalues.iter().map(|e| format!("{} (multiplicity {})", e.value, e.multiplicity)).collect();
            write!(f, "eigenvalues {}", listed.join(", "))?;
        }
        if !self.is_fully_factored() {
            write!(f, "; unfactored residual {}", self.residual_factor)?;
        }
        Ok(())
    }
}

/// Trial divisions spent on factoring the scaled constant term before the
/// search switches to Sturm-sequence isolation.
const DIVISOR_BUDGET: u64 = 2_000_000;

pub fn eigen_rational(a: &Matrix) -> Result<(EigenResult, Trace)> {
    require_square(a)?;
    let n = a.rows();
    let mut t = Tracer::recording(Task::Eigen, "rational", inputs([("A", a)]));
    let p = charpoly_into(&mut t, a);
    t.emit(StepKind::Assemble, || Draft::new(format!("Characteristic polynomial p(λ) = {p}"), p.clone()));

    let mut current = p;
    let mut roots: Vec<(Rational, usize)> = Vec::new();

    let mut zero_mult = 0;
    while current.degree() > 0 && current.coeff(0).is_zero() {
        if zero_mult == 0 {
            t.emit(StepKind::RootFound, || {
                Draft::new("The constant term is 0, so λ = 0 is a root", Rational::zero())
            });
        }
        let (q, _) = current.divide_linear(&Rational::zero());
        zero_mult += 1;
        t.emit(StepKind::Deflation, || {
            Draft::new(format!("Divide by λ: {current} = λ·({q})"), q.clone())
        });
        current = q;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }

    if current.degree() > 0 {
        let search = candidates(&current, a);
        t.emit(StepKind::RootCandidates, || {
            let listed: Vec<String> = search.candidates.iter().map(ToString::to_string).collect();
            Draft::new(
                format!(
                    "Substitute λ = μ/{}: q(μ) = {} is monic with integer coefficients, so rational roots are μ/{} for integers μ dividing {} with |μ| ≤ {} ({}); candidates: {}",
                    search.scale,
                    search.scaled,
                    search.scale,
                    search.constant,
                    search.bound,
                    search.source,
                    if listed.is_empty() { "none".to_string() } else { listed.join(", ") }
                ),
                search.scaled.clone(),
            )
        });
        for candidate in search.candidates {
            if current.degree() == 0 {
                break;
            }
            let d = current.degree() as u64;
            t.mults(d);
            t.adds(d);
            if !current.eval(&candidate).is_zero() {
                continue;
            }
            t.emit(StepKind::RootFound, || {
                Draft::new(format!("p({candidate}) = 0, so λ = {candidate} is an eigenvalue"), candidate.clone())
            });
            let mut multiplicity = 0;
            loop {
                let d = current.degree() as u64;
                t.mults(d);
                t.adds(d);
                let (q, rem) = current.divide_linear(&candidate);
                if !rem.is_zero() {
                    break;
                }
                multiplicity += 1;
                t.emit(StepKind::Deflation, || {
                    Draft::new(format!("Divide by (λ - {candidate}): {current} = ({}) · ({q})", CharPoly::linear(&candidate)), q.clone())
                });
                current = q;
                if current.degree() == 0 {
                    break;
                }
            }
            roots.push((candidate, multiplicity));
        }
        if current.degree() > 0 {
            t.emit(StepKind::Residual, || {
                Draft::new(
                    format!("{current} has no rational roots; it is kept as an unfactored residual (its roots are irrational or complex)"),
                    current.clone(),
                )
            });
        }
    }

    let mut eigenvectors = IndexMap::new();
    for (lambda, _) in &roots {
        t.subs(n as u64);
        let shifted = Matrix::from_fn(n, n, |i, j| if i == j { a.get(i, j) - lambda } else { a.get(i, j).clone() });
        let rref = rref_into(&mut t, &shifted, n, &format!("A - ({lambda})I"));
        let basis = rref.nullspace(n);
        let as_columns = Matrix::from_fn(n, basis.len(), |i, j| basis[j].get(i, 0).clone());
        t.emit(StepKind::Eigenvector, || {
            Draft::new(
                format!("Null space of A - ({lambda})I: {} basis vector(s) for λ = {lambda}", basis.len()),
                as_columns.clone(),
            )
            .operand("rref", rref.matrix.clone())
        });
        eigenvectors.insert(lambda.clone(), basis);
    }

    let result = EigenResult {
        eigenvalues: roots.into_iter().map(|(value, multiplicity)| Eigenvalue { value, multiplicity }).collect(),
        residual_factor: current,
        eigenvectors,
    };
    t.emit(StepKind::Assemble, || Draft::new(result.to_string(), result.clone()));
    let trace = t.finish(result.clone())?;
    Ok((result, trace))
}

struct Candidates {
    scale: BigInt,
    scaled: CharPoly,
    constant: BigInt,
    bound: BigInt,
    source: &'static str,
    candidates: Vec<Rational>,
}

/// Rational root candidates of `p` (nonzero constant term), in ascending
/// absolute value with the positive one first.
fn candidates(p: &CharPoly, a: &Matrix) -> Candidates {
    let scale = Rational::denominator_lcm(a.entries());
    let d = p.degree();
    let scaled_coeffs: Vec<Rational> = (0..=d)
        .map(|i| p.coeff(i) * &Rational::from_integer(num_traits::pow(scale.clone(), d - i)))
        .collect();
    let scaled = CharPoly::new(scaled_coeffs);
    debug_assert!(scaled.coefficients.iter().all(Rational::is_integer));
    let constant = scaled.coeff(0).numer().clone();
    // every eigenvalue satisfies |λ| ≤ ‖A‖∞, hence |μ| ≤ scale·‖A‖∞
    let bound = (Rational::from_integer(scale.clone()) * a.norm_inf()).floor();

    let (magnitudes, source) = match divisors_up_to(constant.magnitude(), &bound) {
        Some(ds) => (ds, "divisors of the constant term"),
        None => (sturm_integer_roots(&scaled, &bound), "integers isolated by Sturm sequences"),
    };
    let scale_r = Rational::from_integer(scale.clone());
    let candidates = magnitudes
        .into_iter()
        .flat_map(|m| {
            let pos = Rational::from_integer(m);
            let neg = -pos.clone();
            [pos, neg]
        })
        .map(|mu| mu.checked_div(&scale_r).expect("scale ≥ 1"))
        .collect();
    Candidates { scale, scaled, constant, bound, source, candidates }
}

/// Divisors `1 ≤ d ≤ bound` of `n`, ascending. `None` when factoring would
/// take more than [`DIVISOR_BUDGET`] trial divisions.
fn divisors_up_to(n: &BigUint, bound: &BigInt) -> Option<Vec<BigInt>> {
    if bound < &BigInt::one() || n.is_zero() {
        return Some(Vec::new());
    }
    let bound_u = bound.magnitude();
    let mut rem = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut p = BigUint::from(2u32);
    let mut spent = 0u64;
    while &p <= bound_u && !rem.is_one() {
        if &p * &p > rem {
            if &rem <= bound_u {
                factors.push((rem.clone(), 1));
            }
            break;
        }
        spent += 1;
        if spent > DIVISOR_BUDGET {
            return None;
        }
        let mut e = 0;
        while (&rem % &p).is_zero() {
            rem /= &p;
            e += 1;
        }
        if e > 0 {
            factors.push((p.clone(), e));
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    let mut divisors = vec![BigUint::one()];
    for (prime, e) in factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut power = d.clone();
            for _ in 0..=e {
                if &power > bound_u {
                    break;
                }
                next.push(power.clone());
                power *= &prime;
            }
        }
        divisors = next;
    }
    divisors.sort();
    Some(divisors.into_iter().map(|d| BigInt::from_biguint(Sign::Plus, d)).collect())
}

/// Magnitudes of the integer roots of the monic integer polynomial `q` in
/// `[-bound, bound]`, ascending and deduplicated.
///
/// Bisects on half-integer endpoints, which are never roots of a monic
/// integer polynomial, until each interval holds one integer.
fn sturm_integer_roots(q: &CharPoly, bound: &BigInt) -> Vec<BigInt> {
    let sequence = sturm_sequence(q);
    let half = Rational::new(1, 2).expect("nonzero");
    let variations = |x: &Rational| -> usize {
        let signs: Vec<bool> = sequence.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v.is_negative()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let mut found = Vec::new();
    let lo = -(Rational::from_integer(bound.clone()) + &half);
    let hi = Rational::from_integer(bound.clone()) + &half;
    let mut stack = vec![(lo.clone(), variations(&lo), hi.clone(), variations(&hi))];
    while let Some((lo, vlo, hi, vhi)) = stack.pop() {
        if vlo <= vhi {
            continue;
        }
        let width = &hi - &lo;
        if width.is_one() {
            let mu = &lo + &half;
            if q.eval(&mu).is_zero() {
                found.push(mu.numer().clone());
            }
            continue;
        }
        let steps = width.floor();
        let mid = &lo + &Rational::from_integer(steps / 2);
        let vmid = variations(&mid);
        stack.push((lo, vlo, mid.clone(), vmid));
        stack.push((mid, vmid, hi, vhi));
    }
    let mut magnitudes: Vec<BigInt> = found.into_iter().map(|m| BigInt::from_biguint(Sign::Plus, m.magnitude().clone())).collect();
    magnitudes.sort();
    magnitudes.dedup();
    magnitudes
}

fn sturm_sequence(q: &CharPoly) -> Vec<CharPoly> {
    let derivative = CharPoly::new(
        (1..=q.degree()).map(|i| q.coeff(i) * &Rational::from(i as i64)).collect(),
    );
    let mut seq = vec![q.clone(), derivative];
    loop {
        let prev = &seq[seq.len() - 2];
        let last = &seq[seq.len() - 1];
        if last.degree() == 0 && last.coeff(0).is_zero() {
            seq.pop();
            break;
        }
        if last.degree() == 0 {
            break;
        }
        let rem = remainder(prev, last);
        seq.push(CharPoly::new(rem.coefficients.iter().map(|c| -c).collect()));
    }
    seq
}

fn remainder(num: &CharPoly, den: &CharPoly) -> CharPoly {
    let mut r = num.coefficients.clone();
    let dd = den.degree();
    let lead = den.leading().clone();
    while r.len() > dd {
        let top = r.len() - 1;
        let factor = r[top].checked_div(&lead).expect("nonzero leading coefficient");
        for i in 0..=dd {
            r[top - dd + i] = &r[top - dd + i] - &(&factor * den.coeff(i));
        }
        r.pop();
    }
    CharPoly::new(r)
}
