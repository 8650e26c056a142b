//! Replacing trigonometric factors by Taylor bounds, term by term.
//!
//! Each addend `alpha * x^p * cos^q(x) * sin^r(x)` is estimated from
//! below by a polynomial, so that the whole sum dominates a single
//! polynomial `TP` on the interval of interest. Positive addends take
//! lower bounds of both factors:
//!
//! ```text
//! alpha * x^p * (L_{4s+3}^sin)^r * (L_{4k+2}^cos)^q        with k >= k-hat
//! ```
//!
//! Negative addends `-beta` take upper bounds (the default, written
//! `II-iii` below):
//!
//! ```text
//! -beta * x^p * (U_{4s+1}^sin)^r * (U_{4k}^cos)^q
//! ```
//!
//! Two sign-flipped alternatives exist for pure powers only. `II-i`
//! estimates `-beta * x^p * cos^q(x)` through `beta * x^p * (-U_{4k}^cos)^q`,
//! which is a valid lower bound only when the flip keeps orientation:
//! no sine factor and odd `q`. `II-ii` is the mirror image
//! `beta * x^p * (-U_{4s+1}^sin)^r` for no cosine factor and odd `r`.
//! Outside those shapes the flipped forms are not lower bounds (for
//! `-sin^2(x)cos(x)` at `x = 1/2` the flipped form exceeds the true
//! value), so they are rejected rather than silently misapplied. Where
//! valid they coincide with the default, which also has the smallest
//! degree of the three, as exercised in the tests.
//!
//! Soundness of the estimates needs `sin >= 0` and `cos >= 0`, so the
//! domination `f >= TP` is claimed on `(0, pi/2)` only. Positivity of
//! `TP` itself is then decided on the full decision interval — for a
//! symbolic upper endpoint that is the slightly larger `(0, PI_HALF_HI]`
//! — which is a superset, so the conclusion on the requested interval
//! still follows.
//!
//! For even cosine powers the squared lower bound `(L_{4k+2})^2 <= cos^2`
//! additionally needs the interval to stay left of the crossing `d_k`,
//! which the `k-hat` threshold guarantees; hence positive addends with a
//! cosine factor insist on `k >= k-hat`.
//!
//! [`auto_search`] tries candidate index assignments in a deterministic
//! order of increasing degree until the resulting `TP` is certified
//! positive, reporting structured diagnostics when it is not.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::expr::{AffineCoeff, MtpExpr, MtpTerm, ParamRange};
use crate::interval::{ConcreteInterval, IntervalSpec};
use crate::khat::{select_khat, KhatMethod, KhatPlan};
use crate::poly::Poly;
use crate::rational::{rat, rat_int, Rational};
use crate::sturm::{is_positive_on, leftmost_root, PositivityCheck};
use crate::taylor::{taylor_cos, taylor_sin};

/// Which estimate shape a term uses. Positive addends always use `I`;
/// negative addends default to `II-iii`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Variant {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II-i")]
    IIi,
    #[serde(rename = "II-ii")]
    IIii,
    #[serde(rename = "II-iii")]
    #[default]
    IIiii,
}

impl Variant {
    /// Degrees `(sin bound, cos bound)` used by this variant for sine
    /// index `s` and cosine index `k`.
    pub fn bound_degrees(self, s: usize, k: usize) -> (usize, usize) {
        match self {
            Variant::I => (4 * s + 3, 4 * k + 2),
            Variant::IIi => (4 * s + 3, 4 * k),
            Variant::IIii => (4 * s + 1, 4 * k + 2),
            Variant::IIiii => (4 * s + 1, 4 * k),
        }
    }
}

/// Total degree of the estimate of `x^p cos^q sin^r` under a variant.
pub fn estimate_degree(p: usize, q: usize, r: usize, s: usize, k: usize, variant: Variant) -> usize {
    let (ds, dc) = variant.bound_degrees(s, k);
    p + r * ds + q * dc
}

/// Index choices for one trigonometric addend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermPlan {
    pub s: usize,
    pub k: usize,
    pub variant: Variant,
}

/// A full estimation plan: the `k-hat` selection plus one entry per
/// addend of the (transformed) expression, `None` for purely polynomial
/// addends that pass through verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimationPlan {
    pub khat_plan: KhatPlan,
    pub per_term: Vec<Option<TermPlan>>,
}

/// A polynomial whose coefficients are affine in the parameter:
/// `constant(x) + a * linear(x)`. Non-parametric inputs simply leave
/// `linear` at zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinePoly {
    pub constant: Poly,
    pub linear: Poly,
}

impl AffinePoly {
    pub fn zero() -> Self {
        AffinePoly {
            constant: Poly::zero(),
            linear: Poly::zero(),
        }
    }

    pub fn from_constant(constant: Poly) -> Self {
        AffinePoly {
            constant,
            linear: Poly::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_zero()
    }

    pub fn is_parametric(&self) -> bool {
        !self.linear.is_zero()
    }

    pub fn add(&self, other: &AffinePoly) -> AffinePoly {
        AffinePoly {
            constant: &self.constant + &other.constant,
            linear: &self.linear + &other.linear,
        }
    }

    /// The product `alpha * b` of an affine scalar and a plain polynomial.
    pub fn scale_poly(alpha: &AffineCoeff, b: &Poly) -> AffinePoly {
        AffinePoly {
            constant: b.scale(&alpha.c0),
            linear: b.scale(&alpha.c1),
        }
    }

    /// The plain polynomial at a concrete parameter value.
    pub fn instantiate(&self, a: &Rational) -> Poly {
        &self.constant + &self.linear.scale(a)
    }
}

/// Constant sign of an addend's coefficient over the parameter range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

pub(crate) enum CoeffSignProblem {
    NeedsRange(String),
    Indefinite { lo: Rational, hi: Rational },
}

/// Sign of `c0 + c1 * a` over an open range. An endpoint value of zero
/// is fine as long as the other endpoint decides the sign: the affine
/// map is strictly between its endpoint values inside the open range.
pub(crate) fn coeff_sign(
    alpha: &AffineCoeff,
    range: Option<&ParamRange>,
    param_name: &str,
) -> Result<Sign, CoeffSignProblem> {
    if alpha.is_constant() {
        return if alpha.c0 > Rational::zero() {
            Ok(Sign::Positive)
        } else {
            Ok(Sign::Negative)
        };
    }
    let Some(range) = range else {
        return Err(CoeffSignProblem::NeedsRange(param_name.to_string()));
    };
    let v_lo = &alpha.c0 + &alpha.c1 * &range.lo;
    let v_hi = &alpha.c0 + &alpha.c1 * &range.hi;
    if v_lo >= Rational::zero() && v_hi >= Rational::zero() && !(v_lo.is_zero() && v_hi.is_zero()) {
        Ok(Sign::Positive)
    } else if v_lo <= Rational::zero()
        && v_hi <= Rational::zero()
        && !(v_lo.is_zero() && v_hi.is_zero())
    {
        Ok(Sign::Negative)
    } else {
        Err(CoeffSignProblem::Indefinite { lo: v_lo, hi: v_hi })
    }
}

/// Lower-bound polynomial for one trigonometric addend, as an
/// [`AffinePoly`] because the coefficient may involve the parameter.
///
/// `sign` is the addend's coefficient sign on the parameter range (the
/// sign picks the estimate direction); `khat` is the interval's minimum
/// cosine index, enforced for positive addends with a cosine factor.
pub fn estimate_term(
    term: &MtpTerm,
    plan: &TermPlan,
    sign: Sign,
    khat: usize,
) -> Result<AffinePoly, Error> {
    let sign_fits = match sign {
        Sign::Positive => plan.variant == Variant::I,
        Sign::Negative => plan.variant != Variant::I,
    };
    if !sign_fits {
        return Err(Error::PlanShape(format!(
            "variant {:?} does not match the coefficient sign",
            plan.variant
        )));
    }
    let (sin_deg, cos_deg) = plan.variant.bound_degrees(plan.s, plan.k);
    match plan.variant {
        Variant::I => {
            if term.q > 0 && plan.k < khat {
                return Err(Error::KBelowKhat {
                    term: 0,
                    k: plan.k,
                    khat,
                });
            }
            let mut b = Poly::one();
            if term.r > 0 {
                b = &b * &taylor_sin(sin_deg)?.poly.pow(term.r);
            }
            if term.q > 0 {
                b = &b * &taylor_cos(cos_deg)?.poly.pow(term.q);
            }
            Ok(AffinePoly::scale_poly(&term.alpha, &b.mul_xpow(term.p)))
        }
        Variant::IIiii => {
            let mut b = Poly::one();
            if term.r > 0 {
                b = &b * &taylor_sin(sin_deg)?.poly.pow(term.r);
            }
            if term.q > 0 {
                b = &b * &taylor_cos(cos_deg)?.poly.pow(term.q);
            }
            Ok(AffinePoly::scale_poly(&term.alpha, &b.mul_xpow(term.p)))
        }
        Variant::IIi => {
            if term.r != 0 || term.q % 2 == 0 {
                return Err(Error::VariantShape {
                    variant: "II-i".to_string(),
                    shape: "x^p cos^q(x) with q odd".to_string(),
                });
            }
            let beta = term.alpha.neg();
            let b = (-&taylor_cos(cos_deg)?.poly).pow(term.q);
            Ok(AffinePoly::scale_poly(&beta, &b.mul_xpow(term.p)))
        }
        Variant::IIii => {
            if term.q != 0 || term.r % 2 == 0 {
                return Err(Error::VariantShape {
                    variant: "II-ii".to_string(),
                    shape: "x^p sin^r(x) with r odd".to_string(),
                });
            }
            let beta = term.alpha.neg();
            let b = (-&taylor_sin(sin_deg)?.poly).pow(term.r);
            Ok(AffinePoly::scale_poly(&beta, &b.mul_xpow(term.p)))
        }
    }
}

/// Sums the per-addend estimates into the dominated polynomial `TP`.
///
/// `e` must be the plan's transformed expression (normalized, and with
/// even cosine powers eliminated when the `k-hat` selection says so).
pub fn estimate_expr(e: &MtpExpr, plan: &EstimationPlan) -> Result<AffinePoly, Error> {
    if plan.per_term.len() != e.terms.len() {
        return Err(Error::PlanShape(format!(
            "plan has {} entries for {} terms",
            plan.per_term.len(),
            e.terms.len()
        )));
    }
    let range = e.param.as_ref().and_then(|p| p.range.as_ref());
    let param_name = e.param.as_ref().map(|p| p.name.as_str()).unwrap_or("a");
    let mut tp = AffinePoly::zero();
    for (i, (term, entry)) in e.terms.iter().zip(&plan.per_term).enumerate() {
        let contribution = match entry {
            None => {
                if !term.is_polynomial() {
                    return Err(Error::PlanShape(format!(
                        "term #{i} has trigonometric factors but no index entry"
                    )));
                }
                AffinePoly::scale_poly(&term.alpha, &Poly::x().pow(term.p))
            }
            Some(term_plan) => {
                if term.is_polynomial() {
                    return Err(Error::PlanShape(format!(
                        "term #{i} is purely polynomial yet has an index entry"
                    )));
                }
                let sign = coeff_sign(&term.alpha, range, param_name).map_err(|e| match e {
                    CoeffSignProblem::NeedsRange(name) => Error::MissingParamInterval(name),
                    CoeffSignProblem::Indefinite { lo, hi } => Error::SignIndefinite {
                        term: i,
                        lo: lo.to_string(),
                        hi: hi.to_string(),
                    },
                })?;
                estimate_term(term, term_plan, sign, plan.khat_plan.khat).map_err(
                    |err| match err {
                        Error::KBelowKhat { k, khat, .. } => Error::KBelowKhat { term: i, k, khat },
                        other => other,
                    },
                )?
            }
        };
        tp = tp.add(&contribution);
    }
    Ok(tp)
}

/// Sign behaviour of the parameter-linear part, recorded as evidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamSign {
    Positive,
    Negative,
    Indefinite,
    Zero,
}

/// One endpoint of the parameter range: either the instantiated
/// polynomial vanished identically, or it went through the positivity
/// decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EndpointCheck {
    ZeroPoly,
    Checked { check: PositivityCheck },
}

impl EndpointCheck {
    fn strictly_positive(&self) -> bool {
        match self {
            EndpointCheck::ZeroPoly => false,
            EndpointCheck::Checked { check } => check.positive,
        }
    }

    fn is_zero_poly(&self) -> bool {
        matches!(self, EndpointCheck::ZeroPoly)
    }
}

/// Evidence that `constant(x) + a * linear(x) > 0` for every `x` in the
/// interval and every `a` in the open parameter range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinePositivity {
    #[serde(with = "crate::rational::serde_str")]
    pub a_lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub a_hi: Rational,
    pub endpoint_lo: EndpointCheck,
    pub endpoint_hi: EndpointCheck,
    pub linear_sign: ParamSign,
    pub positive: bool,
}

/// Decides parametric positivity through the endpoint instantiations.
///
/// For fixed `x` the value is affine in `a`, hence strictly between the
/// two endpoint values on the open range. Both endpoints strictly
/// positive is therefore sufficient; so is one endpoint identically zero
/// with the other strictly positive. An endpoint that is nonzero but not
/// strictly positive leaves the interior unresolved, and the check
/// conservatively fails.
pub fn affine_is_positive_on(
    tp: &AffinePoly,
    range: &ParamRange,
    iv: &ConcreteInterval,
) -> Result<AffinePositivity, Error> {
    let endpoint = |value: Poly| -> Result<EndpointCheck, Error> {
        if value.is_zero() {
            Ok(EndpointCheck::ZeroPoly)
        } else {
            Ok(EndpointCheck::Checked {
                check: is_positive_on(&value, iv)?,
            })
        }
    };
    let endpoint_lo = endpoint(tp.instantiate(&range.lo))?;
    let endpoint_hi = endpoint(tp.instantiate(&range.hi))?;
    let linear_sign = if tp.linear.is_zero() {
        ParamSign::Zero
    } else if is_positive_on(&tp.linear, iv)?.positive {
        ParamSign::Positive
    } else if is_positive_on(&(-&tp.linear), iv)?.positive {
        ParamSign::Negative
    } else {
        ParamSign::Indefinite
    };
    let positive = match (endpoint_lo.is_zero_poly(), endpoint_hi.is_zero_poly()) {
        (true, true) => false,
        (true, false) => endpoint_hi.strictly_positive(),
        (false, true) => endpoint_lo.strictly_positive(),
        (false, false) => endpoint_lo.strictly_positive() && endpoint_hi.strictly_positive(),
    };
    Ok(AffinePositivity {
        a_lo: range.lo.clone(),
        a_hi: range.hi.clone(),
        endpoint_lo,
        endpoint_hi,
        linear_sign,
        positive,
    })
}

/// Positivity evidence for a candidate `TP`, plain or parametric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TpEvidence {
    Plain { check: PositivityCheck },
    Parametric { check: AffinePositivity },
}

impl TpEvidence {
    pub fn positive(&self) -> bool {
        match self {
            TpEvidence::Plain { check } => check.positive,
            TpEvidence::Parametric { check } => check.positive,
        }
    }
}

/// A concrete point where the candidate polynomial is not positive,
/// exhibiting the failure exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonpositiveWitness {
    #[serde(with = "crate::rational::serde_str")]
    pub x: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub value: Rational,
}

/// Structured reason attached to a failed or disproven search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FailDiag {
    /// The function itself has a certified negative value at `x`: its
    /// enclosure lies entirely below zero, with upper end `value_below`.
    Disproven {
        #[serde(with = "crate::rational::serde_str")]
        x: Rational,
        #[serde(with = "crate::rational::serde_str")]
        value_below: Rational,
    },
    /// Bracket around the leftmost root of the last candidate `TP` (at
    /// parameter value `a` when parametric), with a nonpositive sample
    /// nearby when one exists (it may not: a double root just touches).
    TpLeftmostRoot {
        #[serde(with = "crate::rational::serde_opt_str")]
        a: Option<Rational>,
        #[serde(with = "crate::rational::serde_str")]
        lo: Rational,
        #[serde(with = "crate::rational::serde_str")]
        hi: Rational,
        witness: Option<NonpositiveWitness>,
    },
    /// The last candidate `TP` never crosses zero in the interval but
    /// fails positivity anyway: a nonpositive value at `x`.
    TpNonpositive {
        #[serde(with = "crate::rational::serde_opt_str")]
        a: Option<Rational>,
        #[serde(with = "crate::rational::serde_str")]
        x: Rational,
        #[serde(with = "crate::rational::serde_str")]
        value: Rational,
    },
}

/// A successful search: the plan, the dominated polynomial and its
/// positivity evidence, plus how many candidates were tried.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSuccess {
    pub plan: EstimationPlan,
    pub tp: AffinePoly,
    pub evidence: TpEvidence,
    pub tried: usize,
}

/// What the automatic search concluded.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Proved(Box<SearchSuccess>),
    /// A sample certifies the inequality false; no search was attempted.
    Disproven { diagnostic: FailDiag },
    /// Every candidate within the index budget failed.
    Exhausted {
        budget: usize,
        tried: usize,
        diagnostic: Option<FailDiag>,
    },
}

/// One adjustable index of the candidate vector.
struct Slot {
    term: usize,
    is_sin: bool,
    base: usize,
}

/// Tries index assignments in a deterministic order — by maximum offset
/// above the per-slot base, then by offset sum, then lexicographically —
/// and returns the first candidate whose `TP` is certified positive.
///
/// `budget` caps every index (`s` and `k` alike); sine indices start at
/// 0 and cosine indices of positive addends start at the interval's
/// `k-hat`. `negative_variant` picks the estimate shape for negative
/// addends. Expects `e` normalized.
pub fn auto_search(
    e: &MtpExpr,
    interval: &IntervalSpec,
    budget: usize,
    method: KhatMethod,
    negative_variant: Variant,
) -> Result<SearchOutcome, Error> {
    let khat_plan = select_khat(e, interval, method)?;
    let work = khat_plan.transformed.clone();
    if work.terms.is_empty() {
        return Err(Error::ZeroExpression);
    }
    let civ = interval.concrete();
    let range = work.param.as_ref().and_then(|p| p.range.as_ref()).cloned();
    let parametric = work.has_param_terms();
    if parametric && range.is_none() {
        let name = work.param.as_ref().map(|p| p.name.clone()).unwrap_or_default();
        return Err(Error::MissingParamInterval(name));
    }

    // A certified negative sample settles the question before any
    // estimation is attempted. Parametric families are skipped: a
    // negative sample at a range endpoint says nothing about the open
    // interior.
    if !parametric {
        if let Some(diagnostic) = disproving_sample(&work, &civ) {
            return Ok(SearchOutcome::Disproven { diagnostic });
        }
    }

    // Coefficient signs are plan-independent; settle them (and their
    // possible errors) once.
    let param_name = work.param.as_ref().map(|p| p.name.as_str()).unwrap_or("a");
    let mut signs = Vec::with_capacity(work.terms.len());
    for (i, term) in work.terms.iter().enumerate() {
        if term.is_polynomial() {
            signs.push(None);
        } else {
            let sign =
                coeff_sign(&term.alpha, range.as_ref(), param_name).map_err(|e| match e {
                    CoeffSignProblem::NeedsRange(name) => Error::MissingParamInterval(name),
                    CoeffSignProblem::Indefinite { lo, hi } => Error::SignIndefinite {
                        term: i,
                        lo: lo.to_string(),
                        hi: hi.to_string(),
                    },
                })?;
            signs.push(Some(sign));
        }
    }

    let mut slots = Vec::new();
    for (i, term) in work.terms.iter().enumerate() {
        if term.is_polynomial() {
            continue;
        }
        if term.r > 0 {
            slots.push(Slot {
                term: i,
                is_sin: true,
                base: 0,
            });
        }
        if term.q > 0 {
            let base = match signs[i] {
                Some(Sign::Positive) => khat_plan.khat,
                _ => 0,
            };
            if base > budget {
                return Err(Error::BudgetExhausted { budget });
            }
            slots.push(Slot {
                term: i,
                is_sin: false,
                base,
            });
        }
    }

    let caps: Vec<usize> = slots.iter().map(|s| budget - s.base).collect();
    let max_cap = caps.iter().copied().max().unwrap_or(0);
    let mut tried = 0;
    let mut last_failure: Option<(AffinePoly, TpEvidence)> = None;
    for ceiling in 0..=max_cap {
        for offsets in offsets_with_max(&caps, ceiling) {
            let per_term = build_per_term(&work, &signs, &slots, &offsets, negative_variant);
            let plan = EstimationPlan {
                khat_plan: khat_plan.clone(),
                per_term,
            };
            let tp = estimate_expr(&work, &plan)?;
            tried += 1;
            if tp.is_zero() {
                // Exact cancellation: not positive, but a larger plan
                // may still separate the terms.
                last_failure = None;
                continue;
            }
            let evidence = if tp.is_parametric() {
                TpEvidence::Parametric {
                    check: affine_is_positive_on(&tp, range.as_ref().unwrap(), &civ)?,
                }
            } else {
                TpEvidence::Plain {
                    check: is_positive_on(&tp.constant, &civ)?,
                }
            };
            if evidence.positive() {
                return Ok(SearchOutcome::Proved(Box::new(SearchSuccess {
                    plan,
                    tp,
                    evidence,
                    tried,
                })));
            }
            last_failure = Some((tp, evidence));
        }
    }
    let diagnostic = last_failure.and_then(|(tp, ev)| diagnose_failure(&tp, &ev, &civ));
    Ok(SearchOutcome::Exhausted {
        budget,
        tried,
        diagnostic,
    })
}

/// Samples the function on a grid through certified enclosures, looking
/// for a point where it is provably negative.
///
/// For a symbolic half-period the grid spans the coarse stand-in
/// `157/100` instead of the full-precision proxy: the scan is a
/// heuristic, so giving up the last sliver before the endpoint costs
/// nothing, while simple abscissas like `j * 157/3200` keep the series
/// enclosures orders of magnitude cheaper than 12-digit ones would be.
fn disproving_sample(e: &MtpExpr, iv: &ConcreteInterval) -> Option<FailDiag> {
    let basis = if iv.pi_proxy {
        rat(157, 100)
    } else {
        iv.upper.clone()
    };
    let n: i64 = 32;
    let last = if iv.upper_closed && !iv.pi_proxy { n } else { n - 1 };
    for j in 1..=last {
        let x = &basis * rat(j, n);
        let (_, hi) = e.eval_enclosure(&x, None)?;
        if hi < Rational::zero() {
            return Some(FailDiag::Disproven {
                x,
                value_below: hi,
            });
        }
    }
    None
}

/// Builds the per-term plans encoded by one offset vector.
fn build_per_term(
    e: &MtpExpr,
    signs: &[Option<Sign>],
    slots: &[Slot],
    offsets: &[usize],
    negative_variant: Variant,
) -> Vec<Option<TermPlan>> {
    let mut per_term: Vec<Option<TermPlan>> = e
        .terms
        .iter()
        .enumerate()
        .map(|(i, term)| {
            if term.is_polynomial() {
                None
            } else {
                let variant = match signs[i] {
                    Some(Sign::Positive) => Variant::I,
                    _ => negative_variant,
                };
                Some(TermPlan { s: 0, k: 0, variant })
            }
        })
        .collect();
    for (slot, offset) in slots.iter().zip(offsets) {
        let plan = per_term[slot.term].as_mut().expect("slot on trig term");
        if slot.is_sin {
            plan.s = slot.base + offset;
        } else {
            plan.k = slot.base + offset;
        }
    }
    per_term
}

/// All offset vectors with per-component caps whose maximum equals
/// `ceiling`, in lexicographic order within ascending offset sum.
fn offsets_with_max(caps: &[usize], ceiling: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; caps.len()];
    fn walk(caps: &[usize], ceiling: usize, idx: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if idx == caps.len() {
            if caps.is_empty() && ceiling > 0 {
                return;
            }
            if caps.is_empty() || current.iter().max().copied().unwrap_or(0) == ceiling {
                out.push(current.clone());
            }
            return;
        }
        let cap = caps[idx].min(ceiling);
        for v in 0..=cap {
            current[idx] = v;
            walk(caps, ceiling, idx + 1, current, out);
        }
        current[idx] = 0;
    }
    walk(caps, ceiling, 0, &mut current, &mut out);
    out.sort_by_key(|v| (v.iter().sum::<usize>(), v.clone()));
    out
}

/// Turns the last failing candidate into a pointable reason.
pub(crate) fn diagnose_failure(
    tp: &AffinePoly,
    evidence: &TpEvidence,
    iv: &ConcreteInterval,
) -> Option<FailDiag> {
    match evidence {
        TpEvidence::Plain { .. } => diagnose_poly(&tp.constant, None, iv),
        TpEvidence::Parametric { check } => {
            // Point at whichever endpoint instantiation failed.
            if !check.endpoint_lo.strictly_positive() && !check.endpoint_lo.is_zero_poly() {
                diagnose_poly(&tp.instantiate(&check.a_lo), Some(check.a_lo.clone()), iv)
            } else {
                diagnose_poly(&tp.instantiate(&check.a_hi), Some(check.a_hi.clone()), iv)
            }
        }
    }
}

fn diagnose_poly(p: &Poly, a: Option<Rational>, iv: &ConcreteInterval) -> Option<FailDiag> {
    if p.is_zero() {
        return None;
    }
    let eps = (&iv.upper - &iv.lower) / rat_int(4096);
    match leftmost_root(p, iv, &eps).ok()? {
        Some((lo, hi)) => {
            // Hunt for a point where the polynomial actually dips to or
            // below zero, so the report is checkable by plain evaluation.
            let two = rat_int(2);
            let candidates = [
                hi.clone(),
                (&hi + &iv.upper) / &two,
                lo.clone(),
                (&iv.lower + &lo) / &two,
                iv.upper.clone(),
            ];
            let witness = candidates.into_iter().find_map(|x| {
                let value = p.eval(&x);
                (value <= Rational::zero() && x > iv.lower && x <= iv.upper)
                    .then_some(NonpositiveWitness { x, value })
            });
            Some(FailDiag::TpLeftmostRoot { a, lo, hi, witness })
        }
        None => {
            let x = if iv.upper_closed {
                iv.upper.clone()
            } else {
                (&iv.lower + &iv.upper) / rat_int(2)
            };
            let value = p.eval(&x);
            Some(FailDiag::TpNonpositive { a, x, value })
        }
    }
}

/// Uniform per-term plans: every trigonometric addend gets the same
/// indices `(s, k)`, variant `I` for positive coefficients and
/// `negative_variant` otherwise. Purely polynomial addends get `None`.
pub fn uniform_per_term(
    e: &MtpExpr,
    s: usize,
    k: usize,
    negative_variant: Variant,
) -> Result<Vec<Option<TermPlan>>, Error> {
    let range = e.param.as_ref().and_then(|p| p.range.as_ref());
    let param_name = e.param.as_ref().map(|p| p.name.as_str()).unwrap_or("a");
    e.terms
        .iter()
        .enumerate()
        .map(|(i, term)| {
            if term.is_polynomial() {
                return Ok(None);
            }
            let sign = coeff_sign(&term.alpha, range, param_name).map_err(|e| match e {
                CoeffSignProblem::NeedsRange(name) => Error::MissingParamInterval(name),
                CoeffSignProblem::Indefinite { lo, hi } => Error::SignIndefinite {
                    term: i,
                    lo: lo.to_string(),
                    hi: hi.to_string(),
                },
            })?;
            let variant = match sign {
                Sign::Positive => Variant::I,
                Sign::Negative => negative_variant,
            };
            Ok(Some(TermPlan { s, k, variant }))
        })
        .collect()
}

/// Distributes explicit per-addend plans over the expression: the `i`-th
/// entry goes to the `i`-th trigonometric addend in normalized order,
/// and polynomial addends get `None`.
pub fn spread_per_term(
    e: &MtpExpr,
    entries: &[TermPlan],
) -> Result<Vec<Option<TermPlan>>, Error> {
    let trig_count = e.terms.iter().filter(|t| !t.is_polynomial()).count();
    if entries.len() != trig_count {
        return Err(Error::PlanShape(format!(
            "{} plan entries for {} trigonometric addends",
            entries.len(),
            trig_count
        )));
    }
    let mut it = entries.iter();
    Ok(e.terms
        .iter()
        .map(|t| (!t.is_polynomial()).then(|| *it.next().expect("counted above")))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::normalize;
    use crate::interval::pi_half_lo;
    use crate::khat::KhatMethodUsed;
    use crate::parse::parse_expr;

    fn term(c: i64, p: usize, q: usize, r: usize) -> MtpTerm {
        MtpTerm::new(AffineCoeff::constant(rat_int(c)), p, q, r)
    }

    fn plan(s: usize, k: usize, variant: Variant) -> TermPlan {
        TermPlan { s, k, variant }
    }

    /// The expected estimate for the classic cubic inequality
    /// `x^3 cos x - sin^3 x + x^7/15 > 0` at indices `s = 1, k = 1`:
    /// `x^9 (20000 - 1560 x^2 + 60 x^4 - x^6) / 1728000`.
    fn cubic_inequality_tp() -> Poly {
        &(&(&Poly::monomial(rat(5, 432), 9) + &Poly::monomial(rat(-13, 14_400), 11))
            + &Poly::monomial(rat(1, 28_800), 13))
            + &Poly::monomial(rat(-1, 1_728_000), 15)
    }

    #[test]
    fn positive_cosine_square_uses_lower_bounds() {
        let t = term(1, 0, 2, 0);
        let got = estimate_term(&t, &plan(0, 2, Variant::I), Sign::Positive, 0).unwrap();
        let expect = taylor_cos(10).unwrap().poly.pow(2);
        assert_eq!(got.constant, expect);
        assert!(got.linear.is_zero());
    }

    #[test]
    fn positive_terms_enforce_the_khat_floor() {
        let t = term(1, 0, 2, 0);
        let err = estimate_term(&t, &plan(0, 0, Variant::I), Sign::Positive, 1).unwrap_err();
        assert!(matches!(err, Error::KBelowKhat { k: 0, khat: 1, .. }));
        // Pure sine terms have no cosine factor to constrain.
        let t = term(1, 0, 0, 3);
        assert!(estimate_term(&t, &plan(0, 0, Variant::I), Sign::Positive, 1).is_ok());
    }

    #[test]
    fn negative_parametric_term_scales_the_upper_bounds() {
        // -2a * cos(t) sin(t) with a in (1, 3/2), estimated at s = k = 1.
        let t = MtpTerm::new(AffineCoeff::new(rat_int(0), rat_int(-2)), 0, 1, 1);
        let got = estimate_term(&t, &plan(1, 1, Variant::IIiii), Sign::Negative, 0).unwrap();
        let b = &taylor_sin(5).unwrap().poly * &taylor_cos(4).unwrap().poly;
        assert!(got.constant.is_zero());
        assert_eq!(got.linear, b.scale(&rat_int(-2)));
    }

    #[test]
    fn flipped_variants_match_the_default_where_valid() {
        // -cos^3: flip the cosine upper bound (odd power, no sine).
        let t = term(-1, 0, 3, 0);
        let default = estimate_term(&t, &plan(0, 1, Variant::IIiii), Sign::Negative, 0).unwrap();
        let flipped = estimate_term(&t, &plan(0, 1, Variant::IIi), Sign::Negative, 0).unwrap();
        assert_eq!(default, flipped);
        // -sin^3: flip the sine upper bound (odd power, no cosine).
        let t = term(-1, 0, 0, 3);
        let default = estimate_term(&t, &plan(1, 0, Variant::IIiii), Sign::Negative, 0).unwrap();
        let flipped = estimate_term(&t, &plan(1, 0, Variant::IIii), Sign::Negative, 0).unwrap();
        assert_eq!(default, flipped);
    }

    #[test]
    fn flipped_variants_reject_unsupported_shapes() {
        // Mixed factors: the sign flip does not preserve the bound
        // direction, so both alternatives must refuse.
        let mixed = term(-1, 0, 1, 2);
        assert!(matches!(
            estimate_term(&mixed, &plan(0, 1, Variant::IIi), Sign::Negative, 0),
            Err(Error::VariantShape { variant, .. }) if variant == "II-i"
        ));
        assert!(matches!(
            estimate_term(&mixed, &plan(0, 1, Variant::IIii), Sign::Negative, 0),
            Err(Error::VariantShape { variant, .. }) if variant == "II-ii"
        ));
        // Even pure powers flip the inequality outright.
        assert!(estimate_term(&term(-1, 0, 2, 0), &plan(0, 1, Variant::IIi), Sign::Negative, 0)
            .is_err());
        assert!(estimate_term(&term(-1, 0, 0, 2), &plan(1, 0, Variant::IIii), Sign::Negative, 0)
            .is_err());
    }

    #[test]
    fn positive_terms_only_take_variant_one() {
        let t = term(1, 1, 1, 0);
        assert!(matches!(
            estimate_term(&t, &plan(0, 0, Variant::IIiii), Sign::Positive, 0),
            Err(Error::PlanShape(_))
        ));
        assert!(matches!(
            estimate_term(&term(-1, 1, 1, 0), &plan(0, 0, Variant::I), Sign::Negative, 0),
            Err(Error::PlanShape(_))
        ));
    }

    #[test]
    fn default_variant_has_the_smallest_degree() {
        for p in 0..3 {
            for q in 0..4 {
                for r in 0..4 {
                    for s in 0..3 {
                        for k in 0..3 {
                            let d3 = estimate_degree(p, q, r, s, k, Variant::IIiii);
                            assert!(d3 <= estimate_degree(p, q, r, s, k, Variant::IIi));
                            assert!(d3 <= estimate_degree(p, q, r, s, k, Variant::IIii));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_inequality_estimate_matches_closed_form() {
        let e = normalize(&parse_expr("x^3*cos(x) - sin(x)^3 + 1/15*x^7").unwrap()).unwrap();
        // Normalized order sorts by (p, q, r): -sin^3, x^3 cos, x^7/15.
        let khat_plan = select_khat(&e, &IntervalSpec::pi_over_two(), KhatMethod::Auto).unwrap();
        assert_eq!(khat_plan.method_used, KhatMethodUsed::NoneOddOnly);
        let plan = EstimationPlan {
            khat_plan,
            per_term: vec![
                Some(TermPlan {
                    s: 1,
                    k: 0,
                    variant: Variant::IIiii,
                }),
                Some(TermPlan {
                    s: 0,
                    k: 1,
                    variant: Variant::I,
                }),
                None,
            ],
        };
        let tp = estimate_expr(&e, &plan).unwrap();
        assert!(tp.linear.is_zero());
        assert_eq!(tp.constant, cubic_inequality_tp());
    }

    #[test]
    fn polynomial_addends_pass_through() {
        let e = normalize(&parse_expr("x^2 - 1/3*x^3").unwrap()).unwrap();
        let khat_plan = select_khat(&e, &IntervalSpec::delta(rat_int(1)), KhatMethod::Auto).unwrap();
        let plan = EstimationPlan {
            khat_plan,
            per_term: vec![None, None],
        };
        let tp = estimate_expr(&e, &plan).unwrap();
        assert_eq!(
            tp.constant,
            &Poly::monomial(rat_int(1), 2) + &Poly::monomial(rat(-1, 3), 3)
        );
    }

    #[test]
    fn estimate_stays_below_the_function() {
        let e = normalize(&parse_expr("x^3*cos(x) - sin(x)^3 + 1/15*x^7").unwrap()).unwrap();
        let tp = cubic_inequality_tp();
        for j in 1..=10 {
            let x = &pi_half_lo() * rat(j, 11);
            let (enc_lo, _) = e.eval_enclosure(&x, None).unwrap();
            assert!(
                tp.eval(&x) <= enc_lo,
                "domination fails at sample {j}"
            );
        }
    }

    #[test]
    fn indefinite_coefficient_sign_is_reported() {
        // (a - 1) changes sign over (0, 2).
        let e = normalize(
            &parse_expr("(a - 1)*sin(x) + x")
                .map(|e| e.with_param_range(rat_int(0), rat_int(2)))
                .unwrap(),
        )
        .unwrap();
        let khat_plan = select_khat(&e, &IntervalSpec::delta(rat_int(1)), KhatMethod::Auto).unwrap();
        let idx = e.terms.iter().position(|t| !t.is_polynomial()).unwrap();
        let plan = EstimationPlan {
            khat_plan,
            per_term: e
                .terms
                .iter()
                .map(|t| (!t.is_polynomial()).then(|| TermPlan {
                    s: 0,
                    k: 0,
                    variant: Variant::IIiii,
                }))
                .collect(),
        };
        let err = estimate_expr(&e, &plan).unwrap_err();
        assert!(matches!(err, Error::SignIndefinite { term, .. } if term == idx));
    }

    #[test]
    fn parametric_estimates_need_a_range() {
        let e = normalize(&parse_expr("a*sin(x)").unwrap()).unwrap();
        let khat_plan = select_khat(&e, &IntervalSpec::delta(rat_int(1)), KhatMethod::Auto).unwrap();
        let plan = EstimationPlan {
            khat_plan,
            per_term: vec![Some(TermPlan {
                s: 0,
                k: 0,
                variant: Variant::I,
            })],
        };
        assert!(matches!(
            estimate_expr(&e, &plan),
            Err(Error::MissingParamInterval(_))
        ));
    }

    #[test]
    fn zero_endpoint_at_the_coefficient_is_fine() {
        // 4(1 - a) over (1, 3/2): zero at the left endpoint, negative
        // inside — the sign must come out negative.
        let alpha = AffineCoeff::new(rat_int(4), rat_int(-4));
        let range = ParamRange {
            lo: rat_int(1),
            hi: rat(3, 2),
        };
        assert!(matches!(
            coeff_sign(&alpha, Some(&range), "a"),
            Ok(Sign::Negative)
        ));
    }

    fn unit_interval() -> ConcreteInterval {
        IntervalSpec::delta(rat_int(1)).concrete()
    }

    #[test]
    fn affine_positivity_strict_at_both_endpoints() {
        // x + a*x on a in (0, 1): endpoints x and 2x.
        let tp = AffinePoly {
            constant: Poly::x(),
            linear: Poly::x(),
        };
        let range = ParamRange {
            lo: rat_int(0),
            hi: rat_int(1),
        };
        let ev = affine_is_positive_on(&tp, &range, &unit_interval()).unwrap();
        assert!(ev.positive);
        assert_eq!(ev.linear_sign, ParamSign::Positive);
    }

    #[test]
    fn affine_positivity_allows_one_vanishing_endpoint() {
        // x - a*x on a in (0, 1): the upper endpoint vanishes
        // identically, the lower is strictly positive.
        let tp = AffinePoly {
            constant: Poly::x(),
            linear: -&Poly::x(),
        };
        let range = ParamRange {
            lo: rat_int(0),
            hi: rat_int(1),
        };
        let ev = affine_is_positive_on(&tp, &range, &unit_interval()).unwrap();
        assert!(ev.positive);
        assert!(matches!(ev.endpoint_hi, EndpointCheck::ZeroPoly));
        // But both endpoints vanishing leaves nothing positive.
        let zero = AffinePoly::zero();
        let ev = affine_is_positive_on(&zero, &range, &unit_interval()).unwrap();
        assert!(!ev.positive);
    }

    #[test]
    fn affine_positivity_fails_on_a_negative_endpoint() {
        // x - 2 + a*x on a in (0, 1): both endpoints dip negative.
        let tp = AffinePoly {
            constant: &Poly::x() + &Poly::constant(rat_int(-2)),
            linear: Poly::x(),
        };
        let range = ParamRange {
            lo: rat_int(0),
            hi: rat_int(1),
        };
        let ev = affine_is_positive_on(&tp, &range, &unit_interval()).unwrap();
        assert!(!ev.positive);
    }

    #[test]
    fn search_finds_the_classic_plan() {
        let e = normalize(&parse_expr("x^3*cos(x) - sin(x)^3 + 1/15*x^7").unwrap()).unwrap();
        let outcome = auto_search(
            &e,
            &IntervalSpec::pi_over_two(),
            12,
            KhatMethod::Auto,
            Variant::IIiii,
        )
        .unwrap();
        let SearchOutcome::Proved(success) = outcome else {
            panic!("expected a proof, got {outcome:?}");
        };
        // Candidates (0,0), (0,1), (1,0) fail; (1,1) succeeds.
        assert_eq!(success.tried, 4);
        assert_eq!(
            success.plan.per_term,
            vec![
                Some(TermPlan {
                    s: 1,
                    k: 0,
                    variant: Variant::IIiii,
                }),
                Some(TermPlan {
                    s: 0,
                    k: 1,
                    variant: Variant::I,
                }),
                None,
            ]
        );
        assert_eq!(success.tp.constant, cubic_inequality_tp());
        assert!(success.evidence.positive());
    }

    #[test]
    fn search_disproves_a_false_inequality() {
        let e = normalize(&parse_expr("sin(x) - x").unwrap()).unwrap();
        let outcome = auto_search(
            &e,
            &IntervalSpec::delta(rat_int(1)),
            12,
            KhatMethod::Auto,
            Variant::IIiii,
        )
        .unwrap();
        let SearchOutcome::Disproven { diagnostic } = outcome else {
            panic!("expected disproof, got {outcome:?}");
        };
        let FailDiag::Disproven { x, value_below } = diagnostic else {
            panic!("wrong diagnostic");
        };
        assert!(x > Rational::zero() && x <= rat_int(1));
        assert!(value_below < Rational::zero());
    }

    #[test]
    fn search_budget_caps_the_cosine_index() {
        // cos x > 0 on (0, 157/100] needs k = 2: the k = 1 bound already
        // crosses zero just below 1.57.
        let e = normalize(&parse_expr("cos(x)").unwrap()).unwrap();
        let iv = IntervalSpec::delta(rat(157, 100));
        let outcome =
            auto_search(&e, &iv, 1, KhatMethod::Auto, Variant::IIiii).unwrap();
        let SearchOutcome::Exhausted {
            budget,
            tried,
            diagnostic,
        } = outcome
        else {
            panic!("expected exhaustion, got {outcome:?}");
        };
        assert_eq!(budget, 1);
        assert_eq!(tried, 2);
        // The k = 1 bound's root lies near 1.56991.
        let Some(FailDiag::TpLeftmostRoot {
            a: None,
            lo,
            hi,
            witness,
        }) = diagnostic
        else {
            panic!("expected a root bracket");
        };
        assert!(lo > rat(156, 100) && hi < rat(15_701, 10_000));
        // The report carries a point where the bound really fails.
        let w = witness.expect("the bound dips negative past its root");
        assert!(w.value <= Rational::zero());
        assert_eq!(taylor_cos(6).unwrap().poly.eval(&w.x), w.value);

        let outcome = auto_search(&e, &iv, 2, KhatMethod::Auto, Variant::IIiii).unwrap();
        let SearchOutcome::Proved(success) = outcome else {
            panic!("expected a proof, got {outcome:?}");
        };
        assert_eq!(success.tried, 3);
        assert_eq!(
            success.plan.per_term,
            vec![Some(TermPlan {
                s: 0,
                k: 2,
                variant: Variant::I,
            })]
        );
    }

    #[test]
    fn search_starts_cosine_indices_at_khat() {
        // On (0, 1551414/1000000] the threshold gives k-hat = 1, so the
        // first candidate already uses k = 1 and succeeds.
        let e = normalize(&parse_expr("cos(x)^2").unwrap()).unwrap();
        let iv = IntervalSpec::delta(rat(1_551_414, 1_000_000));
        let outcome = auto_search(&e, &iv, 12, KhatMethod::Auto, Variant::IIiii).unwrap();
        let SearchOutcome::Proved(success) = outcome else {
            panic!("expected a proof, got {outcome:?}");
        };
        assert_eq!(success.plan.khat_plan.khat, 1);
        assert_eq!(success.tried, 1);
        assert_eq!(
            success.plan.per_term,
            vec![Some(TermPlan {
                s: 0,
                k: 1,
                variant: Variant::I,
            })]
        );
    }

    #[test]
    fn search_handles_parametric_families() {
        // sin x - a x > 0 on (0, 1] for a in (0, 1/2): already the
        // first candidate works, with both endpoint instantiations
        // strictly positive.
        let e = normalize(
            &parse_expr("sin(x) - a*x")
                .map(|e| e.with_param_range(rat_int(0), rat(1, 2)))
                .unwrap(),
        )
        .unwrap();
        let outcome = auto_search(
            &e,
            &IntervalSpec::delta(rat_int(1)),
            12,
            KhatMethod::Auto,
            Variant::IIiii,
        )
        .unwrap();
        let SearchOutcome::Proved(success) = outcome else {
            panic!("expected a proof, got {outcome:?}");
        };
        assert_eq!(success.tried, 1);
        assert!(success.tp.is_parametric());
        let TpEvidence::Parametric { check } = &success.evidence else {
            panic!("expected parametric evidence");
        };
        assert!(check.positive);
        assert_eq!(check.linear_sign, ParamSign::Negative);
    }

    #[test]
    fn search_is_deterministic() {
        let e = normalize(&parse_expr("x^3*cos(x) - sin(x)^3 + 1/15*x^7").unwrap()).unwrap();
        let run = || {
            auto_search(
                &e,
                &IntervalSpec::pi_over_two(),
                12,
                KhatMethod::Auto,
                Variant::IIiii,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }
}
