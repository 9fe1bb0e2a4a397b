//! Exact rational scalars.
//!
//! All coefficient arithmetic in this crate happens over `Q`, represented by
//! [`num_rational::BigRational`]: always reduced, denominator positive, zero
//! stored as `0/1`. Equality is therefore structural.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// The rational `n/1`.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The reduced rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// True iff `r` is `1` or `-1`.
pub fn is_unit_magnitude(r: &Rational) -> bool {
    r.abs().is_one()
}

/// Least common multiple of the denominators of a slice of rationals.
pub fn denominator_lcm(values: &[Rational]) -> BigInt {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = num_integer::lcm(lcm, v.denom().clone());
    }
    lcm
}

/// Scales a rational vector to a primitive integer vector (cleared
/// denominators, divided by the content). The zero vector maps to itself.
pub fn integerize(values: &[Rational]) -> Vec<BigInt> {
    let lcm = denominator_lcm(values);
    let mut ints: Vec<BigInt> = values.iter().map(|v| v.numer() * &lcm / v.denom()).collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = num_integer::gcd(content, x.clone());
        if content.is_one() {
            return ints;
        }
    }
    if !content.is_zero() && !content.is_one() {
        for x in &mut ints {
            *x /= &content;
        }
    }
    ints
}
