//! Sturm chains: exact root counting and sign decisions for polynomials.
//!
//! Everything downstream reduces to three questions about a polynomial
//! with rational coefficients: how many distinct roots lie in an interval,
//! is it strictly positive there, and where exactly is a known unique
//! root. All three are answered here with no floating point anywhere.
//!
//! Root counts use the classical signed-remainder chain of the
//! square-free part. With zero entries dropped from the sign sequence,
//! the sign-change count `V` is right-continuous, so `V(a) - V(b)`
//! counts distinct roots in the half-open interval `(a, b]` with no
//! caveats about roots at the endpoints; an open upper endpoint is an
//! explicit adjustment on top of that.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::interval::ConcreteInterval;
use crate::poly::Poly;
use crate::rational::{rat_int, sign, Rational};

/// Builds the Sturm chain of `p`: the signed Euclidean remainder sequence
/// of the square-free part of `p` and its derivative.
///
/// The first element is the square-free part itself (same distinct roots
/// as `p`, all simple), the second its derivative, and each subsequent
/// element is the negated remainder of the two before it. Every element
/// is rescaled to integer coefficients of content 1 — a positive
/// constant factor per element, which changes no sign anywhere (so the
/// chain keeps the defining sign relations at roots) while keeping
/// coefficient growth polynomial instead of explosive.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let sf = p.square_free_part().primitive_scaled();
    if sf.is_zero() {
        return vec![Poly::zero()];
    }
    let mut chain = vec![sf.clone()];
    let d = sf.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive_scaled());
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].divmod(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push((-&r).primitive_scaled());
    }
}

/// Number of sign changes in the chain evaluated at `x`, with zero
/// values dropped from the sequence.
pub fn sign_changes_at(chain: &[Poly], x: &Rational) -> usize {
    let mut changes = 0;
    let mut prev = 0i32;
    for p in chain {
        let s = sign(&p.eval(x));
        if s == 0 {
            continue;
        }
        if prev != 0 && s != prev {
            changes += 1;
        }
        prev = s;
    }
    changes
}

/// Counts distinct real roots of `p` in the interval (multiplicities
/// collapse to one). The lower endpoint is always excluded; the upper
/// endpoint is included iff `iv.upper_closed`.
pub fn count_roots(p: &Poly, iv: &ConcreteInterval) -> Result<usize, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if iv.lower > iv.upper {
        return Err(Error::BadInterval(format!(
            "lower endpoint {} exceeds upper endpoint {}",
            iv.lower, iv.upper
        )));
    }
    if iv.lower == iv.upper {
        return Ok(0);
    }
    let chain = sturm_chain(p);
    let vl = sign_changes_at(&chain, &iv.lower);
    let vu = sign_changes_at(&chain, &iv.upper);
    let mut count = vl
        .checked_sub(vu)
        .expect("sign changes cannot increase along a Sturm chain");
    if !iv.upper_closed && count > 0 && p.eval(&iv.upper).is_zero() {
        count -= 1;
    }
    Ok(count)
}

/// Outcome of a strict-positivity decision, with every quantity a
/// checker needs to replay it. Embedded verbatim in proof certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityCheck {
    /// The polynomial the claim is about.
    pub poly: Poly,
    #[serde(with = "crate::rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub upper: Rational,
    pub upper_closed: bool,
    /// Multiplicity of the root at 0 factored out before deciding
    /// (`poly = x^x_power * reduced`); the factor is positive on the
    /// interval, so it cannot affect the verdict.
    pub x_power: usize,
    /// `poly` with the power of `x` removed.
    pub reduced: Poly,
    /// Square-free part of `reduced`; head of the Sturm chain.
    pub squarefree: Poly,
    pub chain_length: usize,
    pub sign_changes_at_lower: usize,
    pub sign_changes_at_upper: usize,
    /// Distinct roots of `reduced` in the requested interval.
    pub root_count: usize,
    /// Midpoint of the interval and the value of `reduced` there.
    #[serde(with = "crate::rational::serde_str")]
    pub interior_sample: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub interior_value: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub value_at_upper: Rational,
    pub positive: bool,
}

/// Decides whether `p(x) > 0` for every `x` in the interval.
///
/// For `(a, b]` the verdict is: no root of `p` in `(a, b]`, a positive
/// interior sample, and `p(b) > 0`. For `(a, b)` the endpoint value is
/// allowed to vanish and the verdict rests on the root count over the
/// open interval plus the interior sample. When the interval sits in
/// `x >= 0`, a root of `p` at 0 is factored out first, so `p` may vanish
/// at an open lower endpoint of 0 without spoiling the claim.
pub fn is_positive_on(p: &Poly, iv: &ConcreteInterval) -> Result<PositivityCheck, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if iv.lower >= iv.upper {
        return Err(Error::BadInterval(format!(
            "empty interval ({}, {}{}",
            iv.lower,
            iv.upper,
            if iv.upper_closed { "]" } else { ")" }
        )));
    }
    let x_power = if iv.lower >= Rational::zero() {
        p.x_power()
    } else {
        0
    };
    let reduced = p.div_xpow(x_power);
    let chain = sturm_chain(&reduced);
    let squarefree = chain[0].clone();
    let sign_changes_at_lower = sign_changes_at(&chain, &iv.lower);
    let sign_changes_at_upper = sign_changes_at(&chain, &iv.upper);
    let mut root_count = sign_changes_at_lower
        .checked_sub(sign_changes_at_upper)
        .expect("sign changes cannot increase along a Sturm chain");
    let value_at_upper = reduced.eval(&iv.upper);
    if !iv.upper_closed && root_count > 0 && value_at_upper.is_zero() {
        root_count -= 1;
    }
    let interior_sample = (&iv.lower + &iv.upper) / rat_int(2);
    let interior_value = reduced.eval(&interior_sample);
    let positive = root_count == 0
        && interior_value > Rational::zero()
        && (!iv.upper_closed || value_at_upper > Rational::zero());
    Ok(PositivityCheck {
        poly: p.clone(),
        lower: iv.lower.clone(),
        upper: iv.upper.clone(),
        upper_closed: iv.upper_closed,
        x_power,
        reduced,
        squarefree,
        chain_length: chain.len(),
        sign_changes_at_lower,
        sign_changes_at_upper,
        root_count,
        interior_sample,
        interior_value,
        value_at_upper,
        positive,
    })
}

/// Shrinks an interval known to contain exactly one distinct root of `p`
/// down to a bracket `[lo, hi]` of width at most `eps`, by bisection
/// with Sturm counts on half-open pieces.
///
/// The returned `hi` equals the query's upper endpoint only when the
/// root lies exactly there; otherwise the bracket ends strictly inside,
/// which callers use to separate a root from the endpoint.
///
/// Fails with [`Error::NotUniquelyRooted`] if the interval does not
/// contain exactly one distinct root.
pub fn isolate_root(
    p: &Poly,
    iv: &ConcreteInterval,
    eps: &Rational,
) -> Result<(Rational, Rational), Error> {
    if *eps <= Rational::zero() {
        return Err(Error::BadInterval(format!(
            "isolation width must be positive, got {eps}"
        )));
    }
    let total = count_roots(p, iv)?;
    if total != 1 {
        return Err(Error::NotUniquelyRooted { count: total });
    }
    let mut lo = iv.lower.clone();
    let mut hi = iv.upper.clone();
    let two = rat_int(2);
    // Invariant: the root lies in (lo, hi]. Midpoints are strictly
    // interior, so the original upper endpoint (and its open/closed
    // character) never takes part in another count.
    let step = |lo: &mut Rational, hi: &mut Rational| -> Result<(), Error> {
        let mid = (&*lo + &*hi) / &two;
        let left = ConcreteInterval {
            lower: lo.clone(),
            upper: mid.clone(),
            upper_closed: true,
            pi_proxy: false,
        };
        if count_roots(p, &left)? >= 1 {
            *hi = mid;
        } else {
            *lo = mid;
        }
        Ok(())
    };
    while &hi - &lo > *eps {
        step(&mut lo, &mut hi)?;
    }
    // Pull the bracket strictly inside the query interval whenever the
    // root is not exactly at its upper endpoint.
    while hi == iv.upper && !p.eval(&hi).is_zero() {
        step(&mut lo, &mut hi)?;
    }
    Ok((lo, hi))
}

/// Brackets the leftmost distinct root of `p` in the interval to width at
/// most `eps`; `None` when there is no root at all. Unlike
/// [`isolate_root`] this tolerates several roots — bisection always keeps
/// the half whose left part still contains one, so the bracket converges
/// on the smallest root. Used to report where a candidate polynomial
/// first crosses zero.
pub fn leftmost_root(
    p: &Poly,
    iv: &ConcreteInterval,
    eps: &Rational,
) -> Result<Option<(Rational, Rational)>, Error> {
    if count_roots(p, iv)? == 0 {
        return Ok(None);
    }
    let mut lo = iv.lower.clone();
    let mut hi = iv.upper.clone();
    let two = rat_int(2);
    // Invariant: the leftmost root in the query interval lies in (lo, hi].
    while &hi - &lo > *eps {
        let mid = (&lo + &hi) / &two;
        let left = ConcreteInterval {
            lower: lo.clone(),
            upper: mid.clone(),
            upper_closed: true,
            pi_proxy: false,
        };
        if count_roots(p, &left)? >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some((lo, hi)))
}
