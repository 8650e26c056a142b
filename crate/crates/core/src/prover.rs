//! The top-level prover: takes an inequality model and an interval,
//! orchestrates normalization, `k-hat` selection, plan search (or a
//! caller-pinned plan), Taylor-bound estimation, and the exact
//! positivity decision, and packages every success into a re-checkable
//! [`ProofCertificate`].
//!
//! Outcomes are three-valued and honest:
//!
//! * **Proved** — a certificate whose every claim re-derives bit for
//!   bit under [`crate::certificate::verify_certificate`].
//! * **Disproven** — a certified interval-arithmetic enclosure shows the
//!   function itself is negative somewhere, so no method can succeed.
//! * **NotProven** — the search (or the pinned plan) found no positive
//!   dominated polynomial; the report says why, pointing at a root
//!   bracket or a nonpositive value of the last candidate. The
//!   inequality may still be true: a larger budget, a different method,
//!   or a sharper plan may succeed where this run did not.
//!
//! Failures never produce certificates; only `Proved` does.

use serde::{Deserialize, Serialize};

use crate::certificate::{build_certificate, ProofCertificate};
use crate::error::Error;
use crate::estimate::{
    affine_is_positive_on, auto_search, diagnose_failure, estimate_expr, spread_per_term,
    uniform_per_term, AffinePoly, AffinePositivity, EstimationPlan, FailDiag, SearchOutcome,
    TermPlan, TpEvidence, Variant,
};
use crate::expr::{normalize, MtpExpr, ParamRange};
use crate::interval::IntervalSpec;
use crate::khat::{select_khat, KhatMethod};
use crate::poly::Poly;
use crate::rational::{to_cert_string, Rational};
use crate::sturm::is_positive_on;

/// A dominated polynomial in parameter-split form, `q(x) + a * p(x)`
/// for `a` in the open range `(a_lo, a_hi)`. This is both how
/// parametric certificates store their `TP` and the input shape of
/// [`prove_linear_param`] for callers who have already reduced a family
/// to polynomials by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearParamForm {
    pub p_poly: Poly,
    pub q_poly: Poly,
    #[serde(with = "crate::rational::serde_str")]
    pub a_lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub a_hi: Rational,
}

/// A caller-chosen plan that bypasses the automatic search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PinnedPlan {
    /// Every trigonometric addend uses the same indices `(s, k)`.
    Uniform { s: usize, k: usize },
    /// One entry per trigonometric addend, in normalized term order.
    PerTrigTerm(Vec<TermPlan>),
}

/// Knobs for [`prove`]. `Default` gives the automatic search with the
/// default (lowest-degree) estimate shape and an index budget of 12.
#[derive(Debug, Clone)]
pub struct ProveOptions {
    /// How to pick `k-hat` (and whether to rewrite even cosine powers).
    pub method: KhatMethod,
    /// Estimate shape for negative addends; `II-iii` unless a caller
    /// explicitly wants a flipped variant for a shape that admits one.
    pub negative_variant: Variant,
    /// Cap on every Taylor index `s` and `k` during the search.
    pub budget: usize,
    /// Skip the search and use exactly this plan.
    pub pinned_plan: Option<PinnedPlan>,
    /// Open range for the parameter, required iff the expression has
    /// parametric coefficients (unless already attached to the model).
    pub param_range: Option<(Rational, Rational)>,
    /// Input text to record in the certificate; defaults to the
    /// normalized expression's canonical rendering, which re-parses.
    pub original_text: Option<String>,
}

impl Default for ProveOptions {
    fn default() -> Self {
        ProveOptions {
            method: KhatMethod::Auto,
            negative_variant: Variant::IIiii,
            budget: 12,
            pinned_plan: None,
            param_range: None,
            original_text: None,
        }
    }
}

/// Which kind of non-success a [`FailureReport`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailStatus {
    NotProven,
    Disproven,
}

/// Structured account of a run that produced no certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureReport {
    pub status: FailStatus,
    pub message: String,
    /// The search budget, when a search ran; `None` for pinned plans.
    pub budget: Option<usize>,
    /// How many candidate plans were estimated and decided.
    pub tried: usize,
    pub diagnostic: Option<FailDiag>,
}

/// Result of [`prove`]: exactly one of a certificate, a refutation, or
/// an honest shrug.
#[derive(Debug, Clone, PartialEq)]
pub enum ProveOutcome {
    Proved(Box<ProofCertificate>),
    NotProven(FailureReport),
    Disproven(FailureReport),
}

impl ProveOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, ProveOutcome::Proved(_))
    }

    pub fn certificate(&self) -> Option<&ProofCertificate> {
        match self {
            ProveOutcome::Proved(cert) => Some(cert),
            _ => None,
        }
    }

    pub fn failure(&self) -> Option<&FailureReport> {
        match self {
            ProveOutcome::Proved(_) => None,
            ProveOutcome::NotProven(report) | ProveOutcome::Disproven(report) => Some(report),
        }
    }
}

/// Validates the parameter setup: attaches `options.param_range` to the
/// expression (rejecting it when there is no parameter), and requires a
/// non-empty range whenever parametric coefficients are present.
fn attach_param_range(e: &MtpExpr, options: &ProveOptions) -> Result<MtpExpr, Error> {
    let mut expr = e.clone();
    if let Some((lo, hi)) = &options.param_range {
        if expr.param.is_none() {
            return Err(Error::UnusedParamInterval {
                lo: to_cert_string(lo),
                hi: to_cert_string(hi),
            });
        }
        expr = expr.with_param_range(lo.clone(), hi.clone());
    }
    if let Some(range) = expr.param.as_ref().and_then(|p| p.range.as_ref()) {
        if range.lo >= range.hi {
            return Err(Error::BadInterval(format!(
                "empty parameter interval ({}, {})",
                range.lo, range.hi
            )));
        }
    }
    Ok(expr)
}

/// Proves `e > 0` on `interval`, or reports why it could not.
///
/// `interval` must be admissible for the method: lower endpoint 0
/// (open), upper endpoint either symbolic `pi/2` (open) or a rational
/// at most the certified lower stand-in for `pi/2`.
pub fn prove(
    e: &MtpExpr,
    interval: &IntervalSpec,
    options: &ProveOptions,
) -> Result<ProveOutcome, Error> {
    interval.check_prover_domain()?;
    let expr = attach_param_range(e, options)?;
    let normalized = normalize(&expr)?;
    if normalized.has_param_terms()
        && normalized.param.as_ref().and_then(|p| p.range.as_ref()).is_none()
    {
        let name = normalized
            .param
            .as_ref()
            .map(|p| p.name.clone())
            .unwrap_or_default();
        return Err(Error::MissingParamInterval(name));
    }
    let original_text = options
        .original_text
        .clone()
        .unwrap_or_else(|| normalized.to_string());

    if let Some(pin) = &options.pinned_plan {
        return prove_pinned(&normalized, interval, options, pin, original_text);
    }

    match auto_search(
        &normalized,
        interval,
        options.budget,
        options.method,
        options.negative_variant,
    )? {
        SearchOutcome::Proved(success) => {
            let cert =
                build_certificate(original_text, &normalized, interval, &success.plan, &success.tp)?;
            Ok(ProveOutcome::Proved(Box::new(cert)))
        }
        SearchOutcome::Disproven { diagnostic } => Ok(ProveOutcome::Disproven(FailureReport {
            status: FailStatus::Disproven,
            message: "a certified enclosure shows the function is negative on the interval"
                .to_string(),
            budget: Some(options.budget),
            tried: 0,
            diagnostic: Some(diagnostic),
        })),
        SearchOutcome::Exhausted {
            budget,
            tried,
            diagnostic,
        } => Ok(ProveOutcome::NotProven(FailureReport {
            status: FailStatus::NotProven,
            message: format!(
                "no certified positive estimate with Taylor indices <= {budget} ({tried} plans tried)"
            ),
            budget: Some(budget),
            tried,
            diagnostic,
        })),
    }
}

fn prove_pinned(
    normalized: &MtpExpr,
    interval: &IntervalSpec,
    options: &ProveOptions,
    pin: &PinnedPlan,
    original_text: String,
) -> Result<ProveOutcome, Error> {
    let khat_plan = select_khat(normalized, interval, options.method)?;
    let per_term = match pin {
        PinnedPlan::Uniform { s, k } => {
            uniform_per_term(&khat_plan.transformed, *s, *k, options.negative_variant)?
        }
        PinnedPlan::PerTrigTerm(entries) => spread_per_term(&khat_plan.transformed, entries)?,
    };
    let work = khat_plan.transformed.clone();
    let plan = EstimationPlan { khat_plan, per_term };
    let tp = estimate_expr(&work, &plan)?;
    if tp.is_zero() {
        return Ok(ProveOutcome::NotProven(FailureReport {
            status: FailStatus::NotProven,
            message: "the pinned plan's dominated polynomial is identically zero".to_string(),
            budget: None,
            tried: 1,
            diagnostic: None,
        }));
    }
    let civ = interval.concrete();
    let evidence = if tp.is_parametric() {
        let range = normalized
            .param
            .as_ref()
            .and_then(|p| p.range.as_ref())
            .expect("parametric terms imply a validated range");
        TpEvidence::Parametric {
            check: affine_is_positive_on(&tp, range, &civ)?,
        }
    } else {
        TpEvidence::Plain {
            check: is_positive_on(&tp.constant, &civ)?,
        }
    };
    if evidence.positive() {
        let cert = build_certificate(original_text, normalized, interval, &plan, &tp)?;
        return Ok(ProveOutcome::Proved(Box::new(cert)));
    }
    let diagnostic = diagnose_failure(&tp, &evidence, &civ);
    Ok(ProveOutcome::NotProven(FailureReport {
        status: FailStatus::NotProven,
        message: "the pinned plan's dominated polynomial is not positive on the interval"
            .to_string(),
        budget: None,
        tried: 1,
        diagnostic,
    }))
}

/// Decides positivity of a hand-reduced parameter-linear polynomial
/// family `q(x) + a * p(x)` for all `a` in the open range and all `x`
/// in `t_interval`.
///
/// The returned evidence is sound by convexity: an interior value is a
/// strict convex combination of the two endpoint values, so strict
/// positivity of both endpoint instantiations (or of one, when the
/// other vanishes identically) carries to the whole open range. A
/// non-positive result (`positive == false`) is returned as a value,
/// not an error — the family may genuinely fail, as the report shows.
pub fn prove_linear_param(
    form: &LinearParamForm,
    t_interval: &IntervalSpec,
) -> Result<AffinePositivity, Error> {
    if form.a_lo >= form.a_hi {
        return Err(Error::BadInterval(format!(
            "empty parameter interval ({}, {})",
            form.a_lo, form.a_hi
        )));
    }
    t_interval.check_prover_domain()?;
    let tp = AffinePoly {
        constant: form.q_poly.clone(),
        linear: form.p_poly.clone(),
    };
    if tp.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let range = ParamRange {
        lo: form.a_lo.clone(),
        hi: form.a_hi.clone(),
    };
    affine_is_positive_on(&tp, &range, &t_interval.concrete())
}
