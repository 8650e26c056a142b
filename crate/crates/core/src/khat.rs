//! Selection of the minimum cosine degree index `k-hat`.
//!
//! Squared lower bounds `L_{4k+2}^2 <= cos^2` are only valid left of the
//! crossing `d_k`, so terms with even cosine powers need every cosine
//! index `k` at or above a threshold `k-hat` determined by the interval:
//!
//! * no even cosine power, or upper endpoint `delta <= sqrt(2) = c_0`:
//!   every `k` works, `k-hat = 0`;
//! * rational `delta > sqrt(2)`: the smallest `k` with
//!   `L_{4k+2}(delta) >= 0` (equivalently `delta <= c_k`), found by exact
//!   evaluation — this is the interval's `k-hat`;
//! * upper endpoint `pi/2` itself: no finite `k` works (the `c_k` only
//!   approach `pi/2`), so even cosine powers are eliminated instead via
//!   `cos^{2j} = (1 - sin^2)^j`.
//!
//! The elimination route is also available for rational `delta` on
//! request; it trades more addends for `k-hat = 0`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::{eliminate_even_cos, MtpExpr};
use crate::interval::{pi_half_hi, BoundaryValue, IntervalSpec};
use crate::rational::{rat_int, Rational};
use crate::taylor::{taylor_cos, DEGREE_CAP};

/// How the caller wants `k-hat` chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum KhatMethod {
    /// Threshold search for rational upper bounds, elimination for `pi/2`.
    #[default]
    Auto,
    MethodC,
    MethodD,
}

/// Which branch actually decided `k-hat`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KhatMethodUsed {
    /// Only odd cosine powers appear; nothing to do.
    NoneOddOnly,
    /// Upper endpoint at or below `sqrt(2)`; nothing to do.
    SmallDelta,
    MethodC,
    MethodD,
}

/// The outcome of `k-hat` selection: the threshold itself and the
/// expression to estimate (rewritten only by the elimination route).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhatPlan {
    pub khat: usize,
    pub method_used: KhatMethodUsed,
    pub transformed: MtpExpr,
}

/// Smallest `k` with `L_{4k+2}(delta) >= 0`, by exact evaluation of the
/// downward cosine bounds. Terminates for every `delta` strictly inside
/// the half-period because the bound roots `c_k` converge to `pi/2`.
pub fn khat_method_c(delta: &Rational) -> Result<usize, Error> {
    if *delta <= Rational::zero() || delta * delta >= &pi_half_hi() * &pi_half_hi() {
        return Err(Error::DeltaOutOfRange);
    }
    let mut k = 0;
    loop {
        let n = 4 * k + 2;
        if n > DEGREE_CAP {
            return Err(Error::DegreeCap { n, cap: DEGREE_CAP });
        }
        if taylor_cos(n)?.poly.eval(delta) >= Rational::zero() {
            return Ok(k);
        }
        k += 1;
    }
}

/// Chooses `k-hat` and, where needed, rewrites the expression, following
/// the branch structure described in the module docs. Expects `e` to be
/// normalized.
pub fn select_khat(
    e: &MtpExpr,
    interval: &IntervalSpec,
    method: KhatMethod,
) -> Result<KhatPlan, Error> {
    if !e.has_even_cos() {
        return Ok(KhatPlan {
            khat: 0,
            method_used: KhatMethodUsed::NoneOddOnly,
            transformed: e.clone(),
        });
    }
    match &interval.upper {
        BoundaryValue::Rational(delta) => {
            if delta * delta <= rat_int(2) {
                return Ok(KhatPlan {
                    khat: 0,
                    method_used: KhatMethodUsed::SmallDelta,
                    transformed: e.clone(),
                });
            }
            match method {
                KhatMethod::Auto | KhatMethod::MethodC => Ok(KhatPlan {
                    khat: khat_method_c(delta)?,
                    method_used: KhatMethodUsed::MethodC,
                    transformed: e.clone(),
                }),
                KhatMethod::MethodD => Ok(KhatPlan {
                    khat: 0,
                    method_used: KhatMethodUsed::MethodD,
                    transformed: eliminate_even_cos(e),
                }),
            }
        }
        BoundaryValue::PiOverTwo => match method {
            KhatMethod::MethodC => Err(Error::MethodCNeedsRationalUpper),
            KhatMethod::Auto | KhatMethod::MethodD => Ok(KhatPlan {
                khat: 0,
                method_used: KhatMethodUsed::MethodD,
                transformed: eliminate_even_cos(e),
            }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{normalize, AffineCoeff, MtpTerm};
    use crate::rational::rat;
    use crate::taylor::cos_root_ck;
    use proptest::prelude::*;

    fn expr(terms: Vec<(i64, usize, usize, usize)>) -> MtpExpr {
        normalize(&MtpExpr::new(
            terms
                .into_iter()
                .map(|(c, p, q, r)| MtpTerm::new(AffineCoeff::constant(rat_int(c)), p, q, r))
                .collect(),
            "x",
        ))
        .unwrap()
    }

    #[test]
    fn threshold_search_known_values() {
        assert_eq!(khat_method_c(&rat_int(1)).unwrap(), 0);
        assert_eq!(khat_method_c(&rat(145, 100)).unwrap(), 1);
        assert_eq!(khat_method_c(&rat(1_551_414, 1_000_000)).unwrap(), 1);
        assert_eq!(khat_method_c(&rat(157, 100)).unwrap(), 2);
    }

    #[test]
    fn threshold_rejects_out_of_range() {
        assert!(matches!(
            khat_method_c(&rat_int(0)),
            Err(Error::DeltaOutOfRange)
        ));
        assert!(matches!(
            khat_method_c(&rat_int(-1)),
            Err(Error::DeltaOutOfRange)
        ));
        assert!(matches!(
            khat_method_c(&rat(158, 100)),
            Err(Error::DeltaOutOfRange)
        ));
    }

    #[test]
    fn threshold_agrees_with_root_enclosures() {
        // Accepting k means delta sits left of c_k; rejecting k - 1 means
        // delta sits right of c_{k-1}. Cross-checked against certified
        // root enclosures.
        for delta in [rat_int(1), rat(145, 100), rat(1_551_414, 1_000_000)] {
            let k = khat_method_c(&delta).unwrap();
            let eps = rat(1, 100_000);
            let ck = cos_root_ck(k, &eps).unwrap();
            assert!(delta <= ck.hi, "delta {delta} vs c_{k}");
            if k > 0 {
                let prev = cos_root_ck(k - 1, &eps).unwrap();
                assert!(prev.lo < delta, "delta {delta} vs c_{}", k - 1);
            }
        }
    }

    #[test]
    fn odd_cosine_powers_need_nothing() {
        let e = expr(vec![(1, 1, 1, 0), (-1, 0, 3, 2)]);
        let plan = select_khat(&e, &IntervalSpec::pi_over_two(), KhatMethod::Auto).unwrap();
        assert_eq!(plan.khat, 0);
        assert_eq!(plan.method_used, KhatMethodUsed::NoneOddOnly);
        assert_eq!(plan.transformed, e);
    }

    #[test]
    fn small_delta_skips_the_machinery() {
        let e = expr(vec![(1, 0, 2, 0)]);
        let plan = select_khat(&e, &IntervalSpec::delta(rat(14, 10)), KhatMethod::Auto).unwrap();
        assert_eq!(plan.khat, 0);
        assert_eq!(plan.method_used, KhatMethodUsed::SmallDelta);
        assert_eq!(plan.transformed, e);
    }

    #[test]
    fn symbolic_upper_forces_elimination() {
        let e = expr(vec![(1, 0, 2, 0)]);
        let plan = select_khat(&e, &IntervalSpec::pi_over_two(), KhatMethod::Auto).unwrap();
        assert_eq!(plan.khat, 0);
        assert_eq!(plan.method_used, KhatMethodUsed::MethodD);
        assert!(!plan.transformed.has_even_cos());
        assert!(matches!(
            select_khat(&e, &IntervalSpec::pi_over_two(), KhatMethod::MethodC),
            Err(Error::MethodCNeedsRationalUpper)
        ));
    }

    #[test]
    fn rational_upper_defaults_to_threshold_search() {
        let e = expr(vec![(1, 0, 2, 0)]);
        let iv = IntervalSpec::delta(rat(1_451, 1_000));
        let plan = select_khat(&e, &iv, KhatMethod::Auto).unwrap();
        assert_eq!(plan.khat, 1);
        assert_eq!(plan.method_used, KhatMethodUsed::MethodC);
        assert_eq!(plan.transformed, e);
        // Elimination on request keeps khat at 0 and rewrites instead.
        let d = select_khat(&e, &iv, KhatMethod::MethodD).unwrap();
        assert_eq!(d.khat, 0);
        assert_eq!(d.method_used, KhatMethodUsed::MethodD);
        assert!(!d.transformed.has_even_cos());
    }

    proptest! {
        /// The threshold is exact: accepted k passes the sign test and
        /// k - 1 (when present) fails it.
        #[test]
        fn threshold_is_minimal(num in 1i64..1570) {
            let delta = rat(num, 1000);
            let k = khat_method_c(&delta).unwrap();
            prop_assert!(taylor_cos(4 * k + 2).unwrap().poly.eval(&delta) >= Rational::zero());
            if k > 0 {
                prop_assert!(
                    taylor_cos(4 * (k - 1) + 2).unwrap().poly.eval(&delta) < Rational::zero()
                );
            }
        }
    }
}
