//! Dense univariate polynomials with rational coefficients, stored lowest degree first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Polynomial `c0 + c1·λ + … + cn·λⁿ`.
///
/// The characteristic polynomial of an `n x n` matrix is monic with `n + 1`
/// coefficients; the leading 1 is stored explicitly.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPoly {
    pub coefficients: Vec<Rational>,
}

impl CharPoly {
    /// Builds from coefficients `c0..cn`, trimming zero leading terms.
    /// An all-zero input becomes the zero polynomial `[0]`.
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.len() > 1 && coefficients.last().is_some_and(Rational::is_zero) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(Rational::zero());
        }
        CharPoly { coefficients }
    }

    pub fn constant(c: Rational) -> Self {
        CharPoly { coefficients: vec![c] }
    }

    /// `λ - root`.
    pub fn linear(root: &Rational) -> Self {
        CharPoly { coefficients: vec![-root, Rational::one()] }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coefficients[i]
    }

    pub fn leading(&self) -> &Rational {
        self.coefficients.last().expect("non-empty coefficients")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let mut out = vec![Rational::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        CharPoly::new(out)
    }

    /// Synthetic division by `λ - root`. Returns `(quotient, remainder)`.
    pub fn divide_linear(&self, root: &Rational) -> (CharPoly, Rational) {
        let n = self.degree();
        if n == 0 {
            return (CharPoly::constant(Rational::zero()), self.coefficients[0].clone());
        }
        let mut quotient = vec![Rational::zero(); n];
        let mut carry = Rational::zero();
        for i in (0..=n).rev() {
            let value = &self.coefficients[i] + &(&carry * root);
            if i == 0 {
                return (CharPoly::new(quotient), value);
            }
            quotient[i - 1] = value.clone();
            carry = value;
        }
        unreachable!()
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().bytes().map(|b| DIGITS[(b - b'0') as usize]).collect()
}

impl fmt::Display for CharPoly {
    /// Renders as e.g. `λ² - 5λ + 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !magnitude.is_one();
            if show_coeff {
                if magnitude.is_integer() || i == 0 {
                    write!(f, "{magnitude}")?;
                } else {
                    write!(f, "({magnitude})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ{}", superscript(i))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({self})")
    }
}
