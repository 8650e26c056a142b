//! Dense univariate polynomials over exact rationals.
//!
//! Coefficients are stored low power first with no trailing zeros; the
//! zero polynomial is the empty coefficient vector and has degree `None`.
//! Dense storage is deliberate: every polynomial in this crate stays
//! below degree ~200, where dense arithmetic is the simplest and fastest
//! choice. All operations are exact and closed over [`Rational`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, rat_int, Rational};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    /// Builds a polynomial from coefficients (index = power), trimming
    /// trailing zeros to restore the representation invariant.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: Rational, n: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    /// Convenience constructor from machine integers, low power first.
    pub fn from_ints(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Leading coefficient; `None` for the zero polynomial.
    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Exact value at `x` by Horner's rule.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    /// Multiplies by the scalar `c`.
    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^m`.
    pub fn mul_xpow(&self, m: usize) -> Poly {
        if self.is_zero() || m == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Rational::zero(); m];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, n: usize) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplicity of the root at 0 (number of leading zero
    /// coefficients); 0 for the zero polynomial.
    pub fn x_power(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divides by `x^m`. Requires the low `m` coefficients to be zero.
    pub fn div_xpow(&self, m: usize) -> Poly {
        assert!(
            self.coeffs.iter().take(m).all(Zero::is_zero),
            "div_xpow: polynomial not divisible by x^{m}"
        );
        if self.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs[m..].to_vec())
    }

    /// Euclidean division: returns `(quotient, remainder)` with
    /// `self = quotient * divisor + remainder` and
    /// `deg remainder < deg divisor`.
    ///
    /// # Panics
    /// Panics if `divisor` is zero.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let dlead = divisor.coeffs.last().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        while rem.len() > dd {
            let rlead = rem.last().unwrap();
            if rlead.is_zero() {
                rem.pop();
                continue;
            }
            let shift = rem.len() - 1 - dd;
            let factor = rlead / dlead;
            for i in 0..dd {
                let sub = &divisor.coeffs[i] * &factor;
                rem[shift + i] -= sub;
            }
            rem.pop();
            quot[shift] = factor;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// The positive-constant rescaling of `self` with integer
    /// coefficients of content 1; the sign of every coefficient is
    /// preserved. Remainder sequences normalize each element this way:
    /// a positive constant factor changes no sign anywhere, and without
    /// the normalization the coefficients of a plain Euclidean sequence
    /// grow explosively with the degree.
    pub fn primitive_scaled(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den_lcm / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for n in &ints {
            content = content.gcd(n);
        }
        Poly::new(
            ints.into_iter()
                .map(|n| Rational::from_integer(n / &content))
                .collect(),
        )
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    /// `gcd(0, 0)` is the zero polynomial.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r.primitive_scaled();
        }
        match a.leading() {
            Some(lead) if !lead.is_one() => {
                let inv = lead.recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// Square-free part `self / gcd(self, self')`: same distinct roots,
    /// all simple. Leading coefficient keeps the sign of `self`.
    pub fn square_free_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        let (q, r) = self.divmod(&g);
        debug_assert!(r.is_zero(), "gcd must divide exactly");
        q
    }

    /// Human-readable form used in traces, highest power first.
    fn fmt_human(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_human(f)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[")?;
        self.fmt_human(f)?;
        write!(f, "]")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Certificates store polynomials as coefficient arrays, low power
/// first, each coefficient in the `"num/den"` string form.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs
            .iter()
            .map(rational::to_cert_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| rational::from_cert_string(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        // Reject non-canonical arrays (trailing zeros) so that certificate
        // equality is exactly byte equality.
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(D::Error::custom("trailing zero coefficient"));
        }
        Ok(Poly { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        // (1 - x^2/2) at 1 -> 1/2.
        let p = Poly::new(vec![rat_int(1), rat_int(0), rat(-1, 2)]);
        assert_eq!(p.eval(&rat_int(1)), rat(1, 2));
        // Zero polynomial at 7/3 -> 0.
        assert_eq!(Poly::zero().eval(&rat(7, 3)), rat_int(0));
    }

    #[test]
    fn mul_examples() {
        // x * x -> x^2.
        assert_eq!(&Poly::x() * &Poly::x(), Poly::from_ints(&[0, 0, 1]));
        // (1 - x^2/2)^2 -> 1 - x^2 + x^4/4.
        let p = Poly::new(vec![rat_int(1), rat_int(0), rat(-1, 2)]);
        let sq = p.pow(2);
        assert_eq!(
            sq,
            Poly::new(vec![rat_int(1), rat_int(0), rat_int(-1), rat_int(0), rat(1, 4)])
        );
    }

    #[test]
    fn degree_and_trim() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::new(vec![rat_int(5)]).degree(), Some(0));
        // Trailing zeros trimmed on construction.
        let p = Poly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(&Poly::x() - &Poly::x(), Poly::zero());
    }

    #[test]
    fn divmod_exact() {
        // x^2 - 3x + 2 = (x - 1)(x - 2).
        let p = Poly::from_ints(&[2, -3, 1]);
        let d = Poly::from_ints(&[-1, 1]);
        let (q, r) = p.divmod(&d);
        assert_eq!(q, Poly::from_ints(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn divmod_with_remainder() {
        // x^2 - 2 = (2x) * (x/2) + (-2).
        let p = Poly::from_ints(&[-2, 0, 1]);
        let d = Poly::from_ints(&[0, 2]);
        let (q, r) = p.divmod(&d);
        assert_eq!(q, Poly::new(vec![rat_int(0), rat(1, 2)]));
        assert_eq!(r, Poly::from_ints(&[-2]));
    }

    #[test]
    fn gcd_and_square_free() {
        // (x - 1)^2 (x + 2) has square-free part (x - 1)(x + 2).
        let p = &Poly::from_ints(&[-1, 1]).pow(2) * &Poly::from_ints(&[2, 1]);
        let sf = p.square_free_part();
        assert_eq!(sf, &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 1]));
        // gcd((x-1)(x+2), (x-1)(x-3)) = x - 1, monic.
        let a = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 1]);
        let b = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[-3, 1]);
        assert_eq!(Poly::gcd(&a, &b), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn x_power_factoring() {
        let p = Poly::from_ints(&[0, 0, 0, 5, 1]);
        assert_eq!(p.x_power(), 3);
        assert_eq!(p.div_xpow(3), Poly::from_ints(&[5, 1]));
        assert_eq!(Poly::zero().x_power(), 0);
    }

    #[test]
    fn serde_round_trip() {
        let p = Poly::new(vec![rat(1, 3), rat_int(0), rat(-5, 7)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1/3","0/1","-5/7"]"#);
        let back: Poly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        // Trailing zeros are rejected: coefficient arrays must be canonical.
        assert!(serde_json::from_str::<Poly>(r#"["1/1","0/1"]"#).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-50i64..50, 1i64..8), 0..6)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn divmod_reconstructs(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b);
            prop_assert_eq!(&(&q * &b) + &r, a);
            if !r.is_zero() {
                prop_assert!(r.degree().unwrap() < b.degree().unwrap());
            }
        }

        #[test]
        fn mul_degree_adds(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly(), xn in -20i64..20, xd in 1i64..10) {
            let x = rat(xn, xd);
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        }
    }
}
