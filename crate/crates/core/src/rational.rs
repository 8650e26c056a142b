//! Exact rational scalars and their certificate string form.
//!
//! Every number that takes part in a decision — coefficients, sample
//! points, interval endpoints, Sturm values — is a [`Rational`]: an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator (`num_rational::BigRational` maintains both invariants on
//! every operation, so equality is structural). Floating point appears
//! nowhere in the crate; exactness is what makes the emitted proof
//! certificates re-checkable bit for bit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational number, always reduced, denominator > 0.
pub type Rational = BigRational;

/// Builds `n/d` from machine integers.
///
/// # Panics
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Sign of `x` as -1, 0 or +1.
pub fn sign(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Canonical certificate form `"num/den"`. The denominator is always
/// explicit so the format is uniform: `3/2 -> "3/2"`, `-4 -> "-4/1"`,
/// `0 -> "0/1"`.
pub fn to_cert_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal rendering of `x` with six fractional digits, rounded toward
/// +inf when `round_up` is set and toward -inf otherwise. The directed
/// rounding keeps one-sided statements honest ("below B" stays true when
/// B is rounded up). Only human-readable summaries use this; certificates
/// always carry the exact `"num/den"` form.
pub fn approx_decimal(x: &Rational, round_up: bool) -> String {
    use num_integer::Integer;

    let scaled_num = x.numer() * BigInt::from(1_000_000);
    let int = if round_up {
        scaled_num.div_ceil(x.denom())
    } else {
        scaled_num.div_floor(x.denom())
    };
    let neg = int.is_negative();
    let mag = int.abs().to_string();
    let (whole, frac) = if mag.len() <= 6 {
        ("0".to_string(), format!("{mag:0>6}"))
    } else {
        let split = mag.len() - 6;
        (mag[..split].to_string(), mag[split..].to_string())
    };
    let frac = frac.trim_end_matches('0');
    let mut out = String::new();
    if neg && (whole != "0" || !frac.is_empty()) {
        out.push('-');
    }
    out.push_str(&whole);
    if !frac.is_empty() {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Parses `"num/den"` or a bare integer `"num"`; the result is reduced.
pub fn from_cert_string(s: &str) -> Result<Rational, Error> {
    let body = s.trim();
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let bad = || Error::BadRational(s.to_string());
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Serde adapter serializing a [`Rational`] as its `"num/den"` string.
/// Use with `#[serde(with = "crate::rational::serde_str")]`.
pub mod serde_str {
    use super::{from_cert_string, to_cert_string, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        to_cert_string(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        from_cert_string(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>` fields.
pub mod serde_opt_str {
    use super::{from_cert_string, to_cert_string, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        x.as_ref().map(|v| to_cert_string(v)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let raw = Option::<String>::deserialize(d)?;
        raw.map(|r| from_cert_string(&r).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn cert_string_round_trip() {
        for (n, d, expect) in [(3, 2, "3/2"), (-4, 1, "-4/1"), (0, 5, "0/1"), (6, -4, "-3/2")] {
            let x = rat(n, d);
            assert_eq!(to_cert_string(&x), expect);
            assert_eq!(from_cert_string(expect).unwrap(), x);
        }
        assert_eq!(from_cert_string("7").unwrap(), rat_int(7));
        assert!(from_cert_string("1/0").is_err());
        assert!(from_cert_string("a/b").is_err());
        assert!(from_cert_string("").is_err());
    }

    #[test]
    fn approx_decimal_rounds_in_the_requested_direction() {
        let x = rat(-22, 7);
        assert_eq!(approx_decimal(&x, false), "-3.142858");
        assert_eq!(approx_decimal(&x, true), "-3.142857");
        assert_eq!(approx_decimal(&rat(1, 2), true), "0.5");
        assert_eq!(approx_decimal(&rat_int(4), false), "4");
        assert_eq!(approx_decimal(&rat(1, 3_000_000), false), "0");
        assert_eq!(approx_decimal(&rat(1, 3_000_000), true), "0.000001");
        assert_eq!(approx_decimal(&Rational::zero(), true), "0");
    }

    proptest! {
        // Reduction invariant: (a/b) * (b/a) = 1 for nonzero a, b.
        #[test]
        fn reciprocal_product_is_one(a in 1i64..10_000, b in 1i64..10_000, sa in 0u8..2, sb in 0u8..2) {
            let a = if sa == 0 { a } else { -a };
            let b = if sb == 0 { b } else { -b };
            let x = rat(a, b);
            let y = rat(b, a);
            prop_assert!((x * y).is_one());
        }

        // Denominators stay positive and fractions reduced after arithmetic.
        #[test]
        fn stays_reduced(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500) {
            let x = rat(a, b) + rat(c, d);
            prop_assert!(x.denom().is_positive() || x.denom().is_one());
            let g = num_integer::Integer::gcd(x.numer(), x.denom());
            prop_assert!(g.is_one());
        }

        #[test]
        fn string_round_trip(a in -100_000i64..100_000, b in 1i64..100_000) {
            let x = rat(a, b);
            prop_assert_eq!(from_cert_string(&to_cert_string(&x)).unwrap(), x);
        }
    }
}
