//! Exact rational evaluation of the coefficient formulas.
//!
//! At a rational wave speed every constant except `z0` itself (only its
//! square) is rational, so the long polynomial lists can be pinned to exact
//! fractions and compared against the double-precision path.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::formulas::{evaluate, Formulas};

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// All printed constants at rational `c`, heights at `z0`.
pub fn at_speed(c: &BigRational) -> Formulas<BigRational> {
    evaluate(c, None)
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
