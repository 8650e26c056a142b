//! One-sided Taylor bounds for sin and cos, with certified direction.
//!
//! The Maclaurin partial sums of sin and cos alternate around the true
//! function: cutting the series after a positive term gives a polynomial
//! that stays above the function, cutting after a negative term gives one
//! that stays below, on the whole disc where the omitted tail alternates
//! with shrinking terms. Concretely, for degree `n` the bound holds for
//! `x^2 < (n+3)(n+4)`; the minimum over all degrees used here is 12,
//! comfortably beyond `(pi/2)^2 ~ 2.47`, so every bound produced by this
//! module is valid on the full interval the prover works in.
//!
//! On top of the bounds sit two certified root enclosures for the
//! downward cosine bound `L_{4k+2}` (the highest-degree lower bound of
//! cos of its degree family):
//!
//! * `c_k`, the unique zero of `L_{4k+2}` in `(0, pi/2)` — left of it the
//!   bound is positive, so even powers of it stay below even powers of
//!   cos;
//! * `d_k`, the unique crossing `cos d = |L_{4k+2}(d)|` right of `c_k` —
//!   left of it the *squared* bound still minorizes `cos^2`, which is
//!   what justifies using `L_{4k+2}^2` for `cos^2` beyond `c_k`.
//!
//! `c_k` is found by direct root isolation. `d_k` solves a transcendental
//! equation, so it is bracketed instead: `cos + L_{4k+2}` is pinched
//! between two polynomials using an upper and a lower cosine bound of
//! refinable degree `m`, each bracket root is isolated exactly, and `m`
//! grows until the two roots fit inside the requested width. The result
//! is a certified enclosure with no numerics involved.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::interval::{pi_half_hi, ConcreteInterval};
use crate::poly::Poly;
use crate::rational::{rat, rat_int, Rational};
use crate::sturm::{count_roots, isolate_root};

/// Largest Taylor degree the prover will construct; beyond this the
/// search reports exhaustion instead of grinding on.
pub const DEGREE_CAP: usize = 200;

/// Default width for the `c_k` and `d_k` enclosures: 1e-8. Tight enough
/// that consecutive enclosures up to `k = 3` stay disjoint (`c_2` and
/// `c_3` are only ~4.6e-7 apart).
pub fn default_eps() -> Rational {
    rat(1, 100_000_000)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrigFn {
    Sin,
    Cos,
}

/// Which side of the true function the polynomial sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upward,
    Downward,
}

/// A Taylor polynomial of sin or cos at 0 together with the side it
/// bounds from and the (squared) radius where that holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorBound {
    pub func: TrigFn,
    pub degree: usize,
    pub direction: Direction,
    /// The bound is valid for `x^2 < radius_squared = (n+3)(n+4)`.
    pub radius_squared: u64,
    pub poly: Poly,
}

fn check_degree(func: &'static str, n: usize, even: bool) -> Result<(), Error> {
    if n > DEGREE_CAP {
        return Err(Error::DegreeCap { n, cap: DEGREE_CAP });
    }
    if (n % 2 == 0) != even {
        return Err(Error::TaylorDegree { func, n });
    }
    Ok(())
}

/// The degree-`n` Maclaurin polynomial of sin (n odd):
/// `x - x^3/3! + x^5/5! - ...`. Bounds sin from above when
/// `n = 4s + 1` and from below when `n = 4s + 3`.
pub fn taylor_sin(n: usize) -> Result<TaylorBound, Error> {
    check_degree("sin", n, false)?;
    let mut coeffs = vec![Rational::zero(); n + 1];
    let mut c = Rational::from_integer(1.into());
    for i in 0..=(n - 1) / 2 {
        let power = 2 * i + 1;
        if i > 0 {
            // Ratio between consecutive sin coefficients.
            c = -c / rat_int((power * (power - 1)) as i64);
        }
        coeffs[power] = c.clone();
    }
    Ok(TaylorBound {
        func: TrigFn::Sin,
        degree: n,
        direction: if n % 4 == 1 {
            Direction::Upward
        } else {
            Direction::Downward
        },
        radius_squared: ((n + 3) * (n + 4)) as u64,
        poly: Poly::new(coeffs),
    })
}

/// The degree-`n` Maclaurin polynomial of cos (n even):
/// `1 - x^2/2! + x^4/4! - ...`. Bounds cos from above when
/// `n = 4k` and from below when `n = 4k + 2`.
pub fn taylor_cos(n: usize) -> Result<TaylorBound, Error> {
    check_degree("cos", n, true)?;
    let mut coeffs = vec![Rational::zero(); n + 1];
    let mut c = Rational::from_integer(1.into());
    for i in 0..=n / 2 {
        let power = 2 * i;
        if i > 0 {
            c = -c / rat_int((power * (power - 1)) as i64);
        }
        coeffs[power] = c.clone();
    }
    Ok(TaylorBound {
        func: TrigFn::Cos,
        degree: n,
        direction: if n % 4 == 0 {
            Direction::Upward
        } else {
            Direction::Downward
        },
        radius_squared: ((n + 3) * (n + 4)) as u64,
        poly: Poly::new(coeffs),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnclosureKind {
    #[serde(rename = "c_k")]
    CosBoundRoot,
    #[serde(rename = "d_k")]
    CosBoundCrossing,
}

/// A certified rational enclosure `[lo, hi]` of `c_k` or `d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub k: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
    pub kind: EnclosureKind,
}

fn full_interval() -> ConcreteInterval {
    ConcreteInterval {
        lower: Rational::zero(),
        upper: pi_half_hi(),
        upper_closed: true,
        pi_proxy: true,
    }
}

/// Encloses `c_k`, the unique zero of the downward cosine bound
/// `L_{4k+2}` in `(0, pi/2)`, to width at most `eps`.
///
/// The bound starts at 1, ends below `cos <= 0` past `pi/2`, and its
/// zero is unique on the whole query interval, so plain root isolation
/// applies; the bracket always ends strictly left of the `pi/2` proxy.
pub fn cos_root_ck(k: usize, eps: &Rational) -> Result<RootEnclosure, Error> {
    let bound = taylor_cos(4 * k + 2)?;
    let (lo, hi) = isolate_root(&bound.poly, &full_interval(), eps)?;
    Ok(RootEnclosure {
        k,
        lo,
        hi,
        kind: EnclosureKind::CosBoundRoot,
    })
}

/// Encloses `d_k`, the unique point in `(c_k, pi/2)` where
/// `cos d = |L_{4k+2}(d)|`, to width at most `eps`.
///
/// Equivalently `d_k` is the root of `h = cos + L_{4k+2}`, which is
/// strictly decreasing. Pinching cos between an upward bound of degree
/// `m` and a downward bound of degree `m + 2` gives two polynomials
/// `h_lo <= h <= h_up` whose roots bracket `d_k` from below and above.
/// Both bracket roots are isolated exactly; `m` is raised by 4 (up to
/// the degree cap) until the whole enclosure fits in a quarter of `eps`,
/// with each root isolated far tighter than that. Demanding a quarter
/// rather than all of `eps` matters: a slack pinch can pass a bare width
/// test while sitting biased to one side of the true crossing, and the
/// stricter target forces the pinch gap itself below the noise floor.
pub fn cos_crossing_dk(k: usize, m: usize, eps: &Rational) -> Result<RootEnclosure, Error> {
    if m % 4 != 0 {
        return Err(Error::TaylorDegree { func: "upward cos", n: m });
    }
    let lower_cos_bound = taylor_cos(4 * k + 2)?;
    let iv = full_interval();
    let inner_eps = eps / rat_int(64);
    let width_target = eps / rat_int(4);
    let mut m_cur = m.max(4);
    loop {
        if m_cur + 2 > DEGREE_CAP {
            return Err(Error::DegreeCap {
                n: m_cur + 2,
                cap: DEGREE_CAP,
            });
        }
        let up = taylor_cos(m_cur)?;
        let down = taylor_cos(m_cur + 2)?;
        debug_assert_eq!(up.direction, Direction::Upward);
        debug_assert_eq!(down.direction, Direction::Downward);
        let h_up = &up.poly + &lower_cos_bound.poly;
        let h_lo = &down.poly + &lower_cos_bound.poly;
        // The lower pinch always crosses; the upper pinch only does once
        // m is large enough that its value at the right endpoint is
        // negative. Until then, refine.
        if count_roots(&h_up, &iv)? != 1 || count_roots(&h_lo, &iv)? != 1 {
            m_cur += 4;
            continue;
        }
        let (lo_bracket, _) = isolate_root(&h_lo, &iv, &inner_eps)?;
        let (_, hi_bracket) = isolate_root(&h_up, &iv, &inner_eps)?;
        if &hi_bracket - &lo_bracket <= width_target && hi_bracket < iv.upper {
            return Ok(RootEnclosure {
                k,
                lo: lo_bracket,
                hi: hi_bracket,
                kind: EnclosureKind::CosBoundCrossing,
            });
        }
        m_cur += 4;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::{cos_enclosure, sin_enclosure};
    use crate::sturm::is_positive_on;
    use num_traits::Zero;

    #[test]
    fn sin_bounds_match_closed_form() {
        let t5 = taylor_sin(5).unwrap();
        assert_eq!(
            t5.poly,
            Poly::new(vec![
                rat_int(0),
                rat_int(1),
                rat_int(0),
                rat(-1, 6),
                rat_int(0),
                rat(1, 120),
            ])
        );
        assert_eq!(t5.direction, Direction::Upward);
        assert_eq!(t5.radius_squared, 72);

        let t1 = taylor_sin(1).unwrap();
        assert_eq!(t1.poly, Poly::x());
        assert_eq!(t1.direction, Direction::Upward);

        let t3 = taylor_sin(3).unwrap();
        assert_eq!(t3.poly, Poly::new(vec![rat_int(0), rat_int(1), rat_int(0), rat(-1, 6)]));
        assert_eq!(t3.direction, Direction::Downward);
    }

    #[test]
    fn cos_bounds_match_closed_form() {
        let t6 = taylor_cos(6).unwrap();
        assert_eq!(
            t6.poly,
            Poly::new(vec![
                rat_int(1),
                rat_int(0),
                rat(-1, 2),
                rat_int(0),
                rat(1, 24),
                rat_int(0),
                rat(-1, 720),
            ])
        );
        assert_eq!(t6.direction, Direction::Downward);

        let t2 = taylor_cos(2).unwrap();
        assert_eq!(t2.poly, Poly::new(vec![rat_int(1), rat_int(0), rat(-1, 2)]));
        assert_eq!(t2.direction, Direction::Downward);

        let t10 = taylor_cos(10).unwrap();
        assert_eq!(t10.poly.coeff(8), rat(1, 40_320));
        assert_eq!(t10.poly.coeff(10), rat(-1, 3_628_800));
        assert_eq!(t10.direction, Direction::Downward);
    }

    #[test]
    fn parity_and_cap_are_enforced() {
        assert!(matches!(taylor_sin(4), Err(Error::TaylorDegree { .. })));
        assert!(matches!(taylor_cos(3), Err(Error::TaylorDegree { .. })));
        assert!(matches!(taylor_sin(201), Err(Error::DegreeCap { .. })));
        assert!(matches!(taylor_cos(202), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn validity_radius_covers_the_working_interval() {
        // (n+3)(n+4) > (pi/2)^2 for every constructible degree, checked
        // against the upper proxy: radius^2 * 10^22 > 157079632680^2.
        let proxy_num: num_bigint::BigInt = 157_079_632_680u64.into();
        let scale: num_bigint::BigInt = 10u32.into();
        let scale = scale.pow(22);
        for n in 0..=30usize {
            let bound = if n % 2 == 1 { taylor_sin(n) } else { taylor_cos(n) }.unwrap();
            let r2: num_bigint::BigInt = bound.radius_squared.into();
            assert!(r2 * &scale > &proxy_num * &proxy_num, "degree {n}");
        }
    }

    #[test]
    fn directions_hold_against_series_oracle() {
        // Sampled check on a deterministic grid: upward bounds never dip
        // below the oracle enclosure, downward never rise above it.
        let hi = pi_half_hi();
        for n in 1..=10usize {
            let (bound, enc): (TaylorBound, fn(&Rational) -> (Rational, Rational)) =
                if n % 2 == 1 {
                    (taylor_sin(n).unwrap(), sin_enclosure)
                } else {
                    (taylor_cos(n).unwrap(), cos_enclosure)
                };
            for j in 1i64..=10 {
                let x = &hi * rat(j, 11);
                let v = bound.poly.eval(&x);
                let (lo, up) = enc(&x);
                match bound.direction {
                    Direction::Upward => assert!(v >= lo, "n={n} x={x}"),
                    Direction::Downward => assert!(v <= up, "n={n} x={x}"),
                }
            }
        }
    }

    #[test]
    fn tail_bounds_tighten_toward_the_function() {
        // Degree n and n+4 share a direction and the further truncation
        // is tighter: the difference keeps one sign on (0, pi/2].
        let iv = full_interval();
        for n in 1..=12usize {
            let (a, b) = if n % 2 == 1 {
                (taylor_sin(n).unwrap(), taylor_sin(n + 4).unwrap())
            } else {
                (taylor_cos(n).unwrap(), taylor_cos(n + 4).unwrap())
            };
            assert_eq!(a.direction, b.direction);
            let diff = match a.direction {
                Direction::Upward => &a.poly - &b.poly,
                Direction::Downward => &b.poly - &a.poly,
            };
            assert!(
                is_positive_on(&diff, &iv).unwrap().positive,
                "degrees {n} and {}",
                n + 4
            );
        }
    }

    #[test]
    fn sin_bounds_stay_positive() {
        // Every sin partial sum is positive on (0, pi/2] (after the x
        // factor is stripped), which step-I estimation relies on.
        let iv = full_interval();
        for s in 0..=7usize {
            let n = 2 * s + 1;
            let bound = taylor_sin(n).unwrap();
            assert!(is_positive_on(&bound.poly, &iv).unwrap().positive, "n={n}");
        }
    }

    #[test]
    fn c0_encloses_sqrt_two() {
        let enc = cos_root_ck(0, &rat(1, 100)).unwrap();
        assert!(&enc.hi - &enc.lo <= rat(1, 100));
        assert!(&enc.lo * &enc.lo < rat_int(2));
        assert!(&enc.hi * &enc.hi > rat_int(2));
        assert!(enc.lo > Rational::zero());
        assert!(enc.hi < pi_half_hi());
    }

    #[test]
    fn c1_enclosure_and_ordering() {
        let c0 = cos_root_ck(0, &rat(1, 100)).unwrap();
        let c1 = cos_root_ck(1, &rat(1, 100)).unwrap();
        assert!(c1.lo >= rat(156, 100));
        assert!(c1.hi <= rat(1571, 1000));
        // Strictly increasing roots: the k = 1 enclosure sits right of k = 0.
        assert!(c0.hi < c1.lo);
    }

    #[test]
    fn d0_enclosure_sits_right_of_c0() {
        let d0 = cos_crossing_dk(0, 4, &rat(1, 50)).unwrap();
        assert!(&d0.hi - &d0.lo <= rat(1, 50));
        assert!(d0.lo >= rat(147, 100));
        assert!(d0.hi <= rat(148, 100));
        let c0 = cos_root_ck(0, &rat(1, 100)).unwrap();
        assert!(c0.hi < d0.lo);
        assert!(d0.hi < pi_half_hi());
    }

    #[test]
    fn dk_rejects_unaligned_degree() {
        assert!(matches!(
            cos_crossing_dk(0, 6, &rat(1, 50)),
            Err(Error::TaylorDegree { .. })
        ));
    }

    #[test]
    fn dk_refines_from_inadequate_degree() {
        // At m = 4 the upper pinch never crosses zero for k = 1; the
        // routine must refine m internally rather than fail.
        let d1 = cos_crossing_dk(1, 4, &rat(1, 1000)).unwrap();
        assert!(&d1.hi - &d1.lo <= rat(1, 1000));
        let c1 = cos_root_ck(1, &rat(1, 10_000)).unwrap();
        assert!(c1.hi < d1.hi);
        assert!(!(&d1.lo).is_zero());
    }

    #[test]
    fn default_eps_value() {
        assert_eq!(default_eps(), rat(1, 100_000_000));
    }
}
