//! Intervals with an optional symbolic `pi/2` upper endpoint.
//!
//! The prover works on sub-intervals of `(0, pi/2)`. Because all other
//! arithmetic is exact-rational, the irrational endpoint `pi/2` is handled
//! through a certified rational proxy pair: decisions against a symbolic
//! upper bound are made on the closed superset `(0, PI_HALF_HI]`, which is
//! sound for positivity claims, and certificates record that the proxy was
//! used so a checker can re-derive the same decision.

use std::fmt;

use num_traits::Zero;

use crate::error::Error;
use crate::rational::{rat, Rational};

/// Rational lower bound with `PI_HALF_LO < pi/2`.
pub fn pi_half_lo() -> Rational {
    rat(157_079_632_679, 100_000_000_000)
}

/// Rational upper bound with `pi/2 < PI_HALF_HI`.
pub fn pi_half_hi() -> Rational {
    rat(157_079_632_680, 100_000_000_000)
}

/// An interval endpoint: either an exact rational or the symbolic `pi/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryValue {
    Rational(Rational),
    PiOverTwo,
}

impl fmt::Display for BoundaryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryValue::Rational(r) => write!(f, "{r}"),
            BoundaryValue::PiOverTwo => write!(f, "pi/2"),
        }
    }
}

/// An interval with open rational lower endpoint and rational-or-`pi/2`
/// upper endpoint. The lower endpoint is open throughout this crate; the
/// upper endpoint may be open or closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalSpec {
    pub lower: Rational,
    pub upper: BoundaryValue,
    pub upper_closed: bool,
}

impl IntervalSpec {
    /// `(0, delta]` for a rational `delta > 0`.
    pub fn delta(delta: Rational) -> Self {
        IntervalSpec {
            lower: Rational::zero(),
            upper: BoundaryValue::Rational(delta),
            upper_closed: true,
        }
    }

    /// The full open interval `(0, pi/2)`.
    pub fn pi_over_two() -> Self {
        IntervalSpec {
            lower: Rational::zero(),
            upper: BoundaryValue::PiOverTwo,
            upper_closed: false,
        }
    }

    /// `(lower, upper)` with both endpoints open.
    pub fn open(lower: Rational, upper: Rational) -> Self {
        IntervalSpec {
            lower,
            upper: BoundaryValue::Rational(upper),
            upper_closed: false,
        }
    }

    /// `(lower, upper]`.
    pub fn half_open(lower: Rational, upper: Rational) -> Self {
        IntervalSpec {
            lower,
            upper: BoundaryValue::Rational(upper),
            upper_closed: true,
        }
    }

    pub fn has_symbolic_upper(&self) -> bool {
        matches!(self.upper, BoundaryValue::PiOverTwo)
    }

    /// Resolves the upper endpoint to a rational for root counting.
    ///
    /// A symbolic `pi/2` upper bound becomes the closed endpoint
    /// `PI_HALF_HI`: since `(0, pi/2)` is contained in `(0, PI_HALF_HI]`,
    /// any positivity established on the concrete interval transfers to
    /// the requested one. The returned flag records that the proxy was
    /// substituted.
    pub fn concrete(&self) -> ConcreteInterval {
        match &self.upper {
            BoundaryValue::Rational(u) => ConcreteInterval {
                lower: self.lower.clone(),
                upper: u.clone(),
                upper_closed: self.upper_closed,
                pi_proxy: false,
            },
            BoundaryValue::PiOverTwo => ConcreteInterval {
                lower: self.lower.clone(),
                upper: pi_half_hi(),
                upper_closed: true,
                pi_proxy: true,
            },
        }
    }

    /// Checks that this interval is admissible for the prover: lower
    /// endpoint exactly 0 and upper endpoint in `(0, pi/2]`. A rational
    /// upper bound must satisfy `upper <= PI_HALF_LO`; values beyond that
    /// cannot be certified below `pi/2` by the proxy pair.
    pub fn check_prover_domain(&self) -> Result<(), Error> {
        if !self.lower.is_zero() {
            return Err(Error::BadInterval(format!(
                "lower endpoint must be 0, got {}",
                self.lower
            )));
        }
        match &self.upper {
            BoundaryValue::PiOverTwo => Ok(()),
            BoundaryValue::Rational(u) => {
                if *u <= Rational::zero() || *u > pi_half_lo() {
                    Err(Error::DeltaOutOfRange)
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A fully rational view of an interval, ready for Sturm queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteInterval {
    pub lower: Rational,
    pub upper: Rational,
    pub upper_closed: bool,
    /// True when the upper endpoint is the `PI_HALF_HI` stand-in for a
    /// symbolic `pi/2` bound.
    pub pi_proxy: bool,
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let close = if self.upper_closed { "]" } else { ")" };
        write!(f, "({}, {}{}", self.lower, self.upper, close)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    #[test]
    fn proxy_pair_is_tight() {
        let lo = pi_half_lo();
        let hi = pi_half_hi();
        assert!(lo < hi);
        assert_eq!(&hi - &lo, rat(1, 100_000_000_000));
        // Both proxies sit inside the Taylor validity disc of every bound
        // this crate constructs: the smallest radius-squared is 12.
        assert!(&hi * &hi < rat_int(12));
    }

    #[test]
    fn symbolic_upper_concretizes_to_closed_proxy() {
        let iv = IntervalSpec::pi_over_two();
        let c = iv.concrete();
        assert_eq!(c.upper, pi_half_hi());
        assert!(c.upper_closed);
        assert!(c.pi_proxy);
        assert_eq!(iv.to_string(), "(0, pi/2)");
    }

    #[test]
    fn rational_upper_passes_through() {
        let iv = IntervalSpec::delta(rat(3, 2));
        let c = iv.concrete();
        assert_eq!(c.upper, rat(3, 2));
        assert!(c.upper_closed);
        assert!(!c.pi_proxy);
        assert_eq!(iv.to_string(), "(0, 3/2]");
    }

    #[test]
    fn prover_domain_checks() {
        assert!(IntervalSpec::delta(rat(3, 2)).check_prover_domain().is_ok());
        assert!(IntervalSpec::pi_over_two().check_prover_domain().is_ok());
        assert!(matches!(
            IntervalSpec::delta(rat_int(2)).check_prover_domain(),
            Err(Error::DeltaOutOfRange)
        ));
        assert!(matches!(
            IntervalSpec::delta(rat_int(0)).check_prover_domain(),
            Err(Error::DeltaOutOfRange)
        ));
        assert!(IntervalSpec::half_open(rat_int(1), rat(3, 2))
            .check_prover_domain()
            .is_err());
        // The proxy lower bound itself is admissible; anything above is not.
        assert!(IntervalSpec::delta(pi_half_lo()).check_prover_domain().is_ok());
        assert!(IntervalSpec::delta(pi_half_hi()).check_prover_domain().is_err());
    }
}
