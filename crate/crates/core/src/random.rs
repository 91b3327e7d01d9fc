//! Seeded random rationals and matrices for checks, demos and benchmarks.

use num_bigint::{BigInt, BigUint, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Matrix;
use crate::rational::Rational;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p` in `[-bound, bound]` and `q` a nonzero integer in `[-bound, bound]`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let num = rng.random_range(-bound..=bound);
    let mut den = 0;
    while den == 0 {
        den = rng.random_range(-bound..=bound);
    }
    Rational::new(num, den).expect("nonzero denominator")
}

pub fn small_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| small_rational(rng, bound))
}

fn random_biguint<R: Rng>(rng: &mut R, bits: u32) -> BigUint {
    let words = bits.div_ceil(32) as usize;
    let mut digits: Vec<u32> = (0..words).map(|_| rng.random()).collect();
    let spare = words as u32 * 32 - bits;
    if let Some(top) = digits.last_mut() {
        *top >>= spare;
    }
    BigUint::new(digits)
}

/// Numerator and denominator each drawn uniformly below `2^bits`; the
/// numerator carries a random sign and the denominator is nonzero.
pub fn bits_rational<R: Rng>(rng: &mut R, bits: u32) -> Rational {
    let num = random_biguint(rng, bits);
    let sign = if rng.random::<bool>() { Sign::Minus } else { Sign::Plus };
    let mut den = random_biguint(rng, bits);
    while den == BigUint::ZERO {
        den = random_biguint(rng, bits);
    }
    Rational::new(BigInt::from_biguint(sign, num), BigInt::from_biguint(Sign::Plus, den)).expect("nonzero denominator")
}

pub fn bits_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bits: u32) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| bits_rational(rng, bits))
}
