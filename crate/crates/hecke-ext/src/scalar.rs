//! Exact rational scalars.
//!
//! Every quantity in this crate -- root coordinates, parameter values,
//! module matrices, homology ranks -- lives over the rationals with
//! arbitrary-precision integer parts. No floating point appears anywhere,
//! so there are no tolerances: equality checks are exact.
//!
//! The scalar type is the single abstraction point of the crate; a future
//! quadratic extension field (needed e.g. for H3) would replace this alias.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar, kept in lowest terms with positive denominator.
pub type Scalar = BigRational;

/// Scalar from an integer.
pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Scalar `p/q`. Panics if `q == 0`.
pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// One half, the coefficient in front of the reflection sum of a tilde element.
pub fn half() -> Scalar {
    frac(1, 2)
}

/// Parses `"p/q"` or `"p"` into a scalar. Whitespace is not accepted.
pub fn parse(text: &str) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p: BigInt = num.parse().ok()?;
    let q: BigInt = den.parse().ok()?;
    if q.is_zero() {
        return None;
    }
    Some(BigRational::new(p, q))
}

/// Renders a scalar as `"p/q"`. This is the machine format: it always
/// carries the denominator so that values round-trip bit-exactly.
pub fn render(s: &Scalar) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

/// Renders a scalar for human-facing tables: integers print bare.
pub fn render_short(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// True if `s` is an integer.
pub fn is_integer(s: &Scalar) -> bool {
    s.denom().is_one()
}

/// Exact sign: -1, 0 or 1.
pub fn sign_of(s: &Scalar) -> i32 {
    if s.is_zero() {
        0
    } else if s.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for text in ["3/4", "-7/2", "0/1", "12/1"] {
            let s = parse(text).unwrap();
            assert_eq!(render(&s), text);
        }
        // Non-lowest-terms input normalizes.
        assert_eq!(render(&parse("6/4").unwrap()), "3/2");
        assert_eq!(render(&parse("5").unwrap()), "5/1");
        assert!(parse("1/0").is_none());
        assert!(parse("x").is_none());
    }

    #[test]
    fn arithmetic_is_exact() {
        let third = frac(1, 3);
        let sum = &third + &third + &third;
        assert_eq!(sum, int(1));
    }
}
