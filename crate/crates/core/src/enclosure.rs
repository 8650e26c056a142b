//! Rational enclosures of sin, cos, and products thereof.
//!
//! These enclosures are deliberately independent of the one-sided Taylor
//! bounds the prover constructs: they truncate the defining series at a
//! fixed 40 terms and widen by the first omitted term, which encloses the
//! true value because the omitted tail alternates with strictly shrinking
//! magnitudes. They serve two roles: an oracle that tests check the
//! certified bounds against, and a sound way for the prover to exhibit a
//! concrete point where a claimed inequality actually fails.
//!
//! Width at 40 terms is on the order of `x^80/80!` — vanishingly small for
//! every `x` this crate touches — so an enclosure here resolves the sign
//! of any quantity that is not exactly zero for all practical purposes.

use num_traits::{One, Signed, Zero};

use crate::rational::{rat_int, Rational};

/// Number of series terms; the first omitted term sets the width.
const TERMS: usize = 40;

/// A closed interval `[lo, hi]` guaranteed to contain the true value.
pub type Enclosure = (Rational, Rational);

fn alternating_series(x: &Rational, first_term: Rational, first_power: u64) -> Enclosure {
    // Terms t_i with t_0 = first_term and ratio -x^2 / ((p+1)(p+2)) where
    // p is the current power; magnitudes shrink strictly once
    // x^2 < (p+1)(p+2), which holds from the start for |x| <= 8 and in
    // any case long before the 40th term.
    debug_assert!(x.abs() <= rat_int(8), "enclosure oracle used outside |x| <= 8");
    let xx = x * x;
    let mut sum = Rational::zero();
    let mut term = first_term;
    let mut power = first_power;
    for _ in 0..TERMS {
        sum += &term;
        term = -(&term * &xx) / rat_int(((power + 1) * (power + 2)) as i64);
        power += 2;
    }
    let width = term.abs();
    (&sum - &width, sum + width)
}

/// Encloses `sin x` for `|x| <= 8`.
pub fn sin_enclosure(x: &Rational) -> Enclosure {
    alternating_series(x, x.clone(), 1)
}

/// Encloses `cos x` for `|x| <= 8`.
pub fn cos_enclosure(x: &Rational) -> Enclosure {
    alternating_series(x, Rational::one(), 0)
}

/// Encloses a product from enclosures of the factors.
pub fn mul_enclosure(a: &Enclosure, b: &Enclosure) -> Enclosure {
    let candidates = [
        &a.0 * &b.0,
        &a.0 * &b.1,
        &a.1 * &b.0,
        &a.1 * &b.1,
    ];
    let lo = candidates.iter().min().unwrap().clone();
    let hi = candidates.iter().max().unwrap().clone();
    (lo, hi)
}

/// Encloses `v^n` from an enclosure of `v`.
pub fn pow_enclosure(a: &Enclosure, n: usize) -> Enclosure {
    if n == 0 {
        return (Rational::one(), Rational::one());
    }
    let (lo, hi) = a;
    let lp = pow_rat(lo, n);
    let hp = pow_rat(hi, n);
    if n % 2 == 1 {
        // Odd powers are monotone.
        (lp, hp)
    } else if lo >= &Rational::zero() {
        (lp, hp)
    } else if hi <= &Rational::zero() {
        (hp, lp)
    } else {
        // Straddles zero: minimum is 0, maximum at the larger magnitude.
        (Rational::zero(), lp.max(hp))
    }
}

/// Encloses a scaled monomial term `c * x^p * cos^q(x) * sin^r(x)`.
pub fn term_enclosure(
    c: &Rational,
    p: usize,
    q: usize,
    r: usize,
    x: &Rational,
) -> Enclosure {
    let xp = pow_rat(x, p);
    let mut enc = (xp.clone(), xp);
    if q > 0 {
        enc = mul_enclosure(&enc, &pow_enclosure(&cos_enclosure(x), q));
    }
    if r > 0 {
        enc = mul_enclosure(&enc, &pow_enclosure(&sin_enclosure(x), r));
    }
    mul_enclosure(&enc, &(c.clone(), c.clone()))
}

fn pow_rat(x: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{pi_half_hi, pi_half_lo};
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn known_values_at_one() {
        // sin 1 = 0.8414709848078965..., cos 1 = 0.5403023058681398...
        let (lo, hi) = sin_enclosure(&rat_int(1));
        assert!(lo < rat(8_414_709_849, 10_000_000_000));
        assert!(hi > rat(8_414_709_848, 10_000_000_000));
        let (lo, hi) = cos_enclosure(&rat_int(1));
        assert!(lo < rat(5_403_023_059, 10_000_000_000));
        assert!(hi > rat(5_403_023_058, 10_000_000_000));
    }

    #[test]
    fn proxy_pair_straddles_cosine_root() {
        // cos is positive at the lower proxy and negative at the upper
        // proxy, which pins pi/2 strictly between them.
        let (lo, _) = cos_enclosure(&pi_half_lo());
        assert!(lo > Rational::zero());
        let (_, hi) = cos_enclosure(&pi_half_hi());
        assert!(hi < Rational::zero());
    }

    #[test]
    fn term_enclosure_matches_simple_cases() {
        // 2 * x^1 at x = 3/2 with no trig factors is exact.
        let (lo, hi) = term_enclosure(&rat_int(2), 1, 0, 0, &rat(3, 2));
        assert!(lo <= rat_int(3) && rat_int(3) <= hi);
        // -sin^2(x) cos(x) at x = 1/2 is about -0.20171134.
        let (lo, hi) = term_enclosure(&rat_int(-1), 0, 1, 2, &rat(1, 2));
        assert!(lo < rat(-20_171_13, 10_000_000));
        assert!(hi > rat(-20_171_14, 10_000_000));
    }

    proptest! {
        /// Pythagorean identity holds inside the composed enclosures.
        #[test]
        fn sin_sq_plus_cos_sq_contains_one(n in 1i64..200, d in 100i64..200) {
            let x = rat(n, d);
            let s2 = pow_enclosure(&sin_enclosure(&x), 2);
            let c2 = pow_enclosure(&cos_enclosure(&x), 2);
            let lo = &s2.0 + &c2.0;
            let hi = &s2.1 + &c2.1;
            prop_assert!(lo <= rat_int(1) && rat_int(1) <= hi);
        }

        /// Power enclosures contain powers of contained points.
        #[test]
        fn pow_enclosure_contains(
            lo_n in -20i64..20, width in 0i64..10, t in 0u32..=100, n in 0usize..6
        ) {
            let lo = rat(lo_n, 7);
            let hi = &lo + rat(width, 7);
            // Point inside the interval, parameterized by t/100.
            let v = &lo + (&hi - &lo) * rat(t as i64, 100);
            let mut vp = Rational::one();
            for _ in 0..n { vp *= &v; }
            let (plo, phi) = pow_enclosure(&(lo, hi), n);
            prop_assert!(plo <= vp && vp <= phi);
        }

        /// Product enclosures contain products of contained points.
        #[test]
        fn mul_enclosure_contains(
            a_lo in -20i64..20, a_w in 0i64..10, ta in 0u32..=100,
            b_lo in -20i64..20, b_w in 0i64..10, tb in 0u32..=100,
        ) {
            let a = (rat(a_lo, 5), rat(a_lo + a_w, 5));
            let b = (rat(b_lo, 5), rat(b_lo + b_w, 5));
            let va = &a.0 + (&a.1 - &a.0) * rat(ta as i64, 100);
            let vb = &b.0 + (&b.1 - &b.0) * rat(tb as i64, 100);
            let (lo, hi) = mul_enclosure(&a, &b);
            let v = va * vb;
            prop_assert!(lo <= v && v <= hi);
        }
    }
}
