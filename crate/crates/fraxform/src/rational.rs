//! Exact rational arithmetic helpers shared across the crate.
//!
//! All symbolic state in this crate (atom coefficients and rates, spectral
//! polynomials, orders) is carried as [`Rational`] values so that the
//! transform table, partial fractions and the equation solver stay exact;
//! floating point enters only at evaluation boundaries.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number, the coefficient field of the crate.
pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Lossy conversion to `f64` for numeric evaluation.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn sqrt_exact(x: &Rational) -> Option<Rational> {
    nth_root_exact(x, 2)
}

/// Exact `n`-th root of a non-negative rational, if one exists.
pub fn nth_root_exact(x: &Rational, n: u32) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer();
    let den = x.denom();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if &num_traits::pow::pow(rn.clone(), n as usize) == num
        && &num_traits::pow::pow(rd.clone(), n as usize) == den
    {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Exact `base^exp` for positive rational `base` and rational `exp = p/q > 0`,
/// if the result is itself rational. Returns `None` otherwise.
pub fn pow_exact(base: &Rational, exp: &Rational) -> Option<Rational> {
    if !base.is_positive() || !exp.is_positive() {
        return None;
    }
    if base.is_one() {
        return Some(Rational::one());
    }
    let q = exp.denom().to_u32()?;
    let p = exp.numer().to_i64()?;
    let root = nth_root_exact(base, q)?;
    if p >= 0 {
        Some(num_traits::pow::pow(root, p as usize))
    } else {
        Some(num_traits::pow::pow(root, (-p) as usize).recip())
    }
}

/// Integer power with signed exponent.
pub fn pow_i64(base: &Rational, exp: i64) -> Rational {
    if base.is_zero() && exp <= 0 {
        panic!("zero base with non-positive exponent");
    }
    if exp >= 0 {
        num_traits::pow::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

/// Renders a rational as `p` or `p/q` (canonical reduced form).
pub fn render(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
