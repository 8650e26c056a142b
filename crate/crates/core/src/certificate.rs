//! Proof certificates: a serialized record of everything a proof used,
//! checkable without trusting the prover.
//!
//! A certificate stores the input text, the normalized model, the
//! interval (with the rational stand-in recorded whenever the symbolic
//! `pi/2` endpoint was replaced), the `k-hat` selection, the per-addend
//! index plan with the bound degrees it implies, the dominated
//! polynomial `TP`, and the complete positivity evidence — square-free
//! reduction, Sturm sign-change counts at both endpoints, interior
//! sample, endpoint value. [`verify_certificate`] re-derives every one
//! of these from the input text alone and demands bit-exact agreement,
//! so a tampered or miscomputed certificate fails even if its claimed
//! evidence is internally plausible.
//!
//! The JSON layout is versioned (`cert_version: 1`) and deterministic:
//! field order follows the struct declarations, rationals are `"num/den"`
//! strings, and polynomials are coefficient arrays from the constant
//! term upward.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::estimate::{
    affine_is_positive_on, estimate_expr, AffinePoly, EstimationPlan, ParamSign, TermPlan,
    Variant,
};
use crate::expr::{normalize, MtpExpr, ParamRange, ParamSpec};
use crate::interval::{pi_half_hi, BoundaryValue, ConcreteInterval, IntervalSpec};
use crate::khat::{select_khat, KhatMethod, KhatMethodUsed, KhatPlan};
use crate::parse::parse_expr;
use crate::poly::Poly;
use crate::prover::LinearParamForm;
use crate::rational::{from_cert_string, to_cert_string};
use crate::sturm::{is_positive_on, PositivityCheck};

pub const CERT_VERSION: u32 = 1;

/// The interval as stored in a certificate. `upper` is `"pi/2"` or a
/// rational string; for the symbolic case `pi_proxy_upper` records the
/// rational upper bound the decision actually ran against, so a checker
/// can audit the superset argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertInterval {
    pub lower: String,
    pub upper: String,
    pub upper_closed: bool,
    pub pi_proxy_upper: Option<String>,
}

impl CertInterval {
    fn from_spec(interval: &IntervalSpec) -> Self {
        CertInterval {
            lower: to_cert_string(&interval.lower),
            upper: match &interval.upper {
                BoundaryValue::Rational(r) => to_cert_string(r),
                BoundaryValue::PiOverTwo => "pi/2".to_string(),
            },
            upper_closed: interval.upper_closed,
            pi_proxy_upper: interval
                .has_symbolic_upper()
                .then(|| to_cert_string(&pi_half_hi())),
        }
    }

    fn to_spec(&self) -> Result<IntervalSpec, Error> {
        let lower = from_cert_string(&self.lower)
            .map_err(|_| Error::Certificate(format!("bad interval lower `{}`", self.lower)))?;
        if self.upper == "pi/2" {
            let proxy = self
                .pi_proxy_upper
                .as_deref()
                .ok_or_else(|| Error::Certificate("missing pi_proxy_upper".to_string()))?;
            let proxy = from_cert_string(proxy)
                .map_err(|_| Error::Certificate(format!("bad pi_proxy_upper `{proxy}`")))?;
            if proxy != pi_half_hi() {
                return Err(Error::CertificateMismatch(
                    "pi/2 proxy differs from the certified bound".to_string(),
                ));
            }
            if self.upper_closed {
                return Err(Error::Certificate(
                    "a pi/2 upper endpoint must be open".to_string(),
                ));
            }
            Ok(IntervalSpec {
                lower,
                upper: BoundaryValue::PiOverTwo,
                upper_closed: false,
            })
        } else {
            if self.pi_proxy_upper.is_some() {
                return Err(Error::Certificate(
                    "pi_proxy_upper given for a rational upper endpoint".to_string(),
                ));
            }
            let upper = from_cert_string(&self.upper)
                .map_err(|_| Error::Certificate(format!("bad interval upper `{}`", self.upper)))?;
            Ok(IntervalSpec {
                lower,
                upper: BoundaryValue::Rational(upper),
                upper_closed: self.upper_closed,
            })
        }
    }
}

/// One addend's plan entry together with the Taylor degrees it implies;
/// the degrees are redundant on purpose, as an audit surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertTermPlan {
    pub s: usize,
    pub k: usize,
    pub variant: Variant,
    pub sin_degree: usize,
    pub cos_degree: usize,
}

impl CertTermPlan {
    fn from_plan(plan: &TermPlan) -> Self {
        let (sin_degree, cos_degree) = plan.variant.bound_degrees(plan.s, plan.k);
        CertTermPlan {
            s: plan.s,
            k: plan.k,
            variant: plan.variant,
            sin_degree,
            cos_degree,
        }
    }

    fn to_plan(self) -> TermPlan {
        TermPlan {
            s: self.s,
            k: self.k,
            variant: self.variant,
        }
    }
}

/// The dominated polynomial: plain, or split into the parameter-linear
/// form `q(x) + a * p(x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CertTp {
    Poly { poly: Poly },
    LinearParam { form: LinearParamForm },
}

/// A positivity check with a stable label saying which polynomial it is
/// about: `"tp"`, `"endpoint-a-lo"`, `"endpoint-a-hi"`, or
/// `"param-linear-sign"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledCheck {
    pub label: String,
    pub check: PositivityCheck,
}

/// Which endpoint admission applied in the parametric case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndpointCase {
    BothStrict,
    LoVanishes,
    HiVanishes,
}

/// A complete, self-contained, re-checkable proof record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub cert_version: u32,
    pub original_text: String,
    pub var: String,
    pub param: Option<ParamSpec>,
    pub interval: CertInterval,
    pub normalized: MtpExpr,
    pub khat_plan: KhatPlan,
    pub plan: Vec<Option<CertTermPlan>>,
    pub tp: CertTp,
    pub positivity_evidence: Vec<LabeledCheck>,
    pub param_p_sign: Option<ParamSign>,
    pub endpoint_case: Option<EndpointCase>,
    pub conclusion: String,
}

impl ProofCertificate {
    /// Canonical JSON rendering: pretty-printed, deterministic, newline
    /// terminated. Identical proofs serialize to identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }
}

/// The full evidence list for a `TP`, recomputed identically by the
/// builder and the checker.
///
/// Plain polynomials get a single `"tp"` check. Parametric ones get one
/// check per non-vanishing endpoint instantiation plus, when the linear
/// part is one-signed, a check certifying that sign (on `p` itself or on
/// `-p`). Returns the entries, the linear part's sign, the endpoint
/// admission case, and the overall verdict.
fn evidence_for(
    tp: &AffinePoly,
    range: Option<&ParamRange>,
    civ: &ConcreteInterval,
) -> Result<
    (
        Vec<LabeledCheck>,
        Option<ParamSign>,
        Option<EndpointCase>,
        bool,
    ),
    Error,
> {
    use crate::estimate::EndpointCheck;
    if !tp.is_parametric() {
        let check = is_positive_on(&tp.constant, civ)?;
        let positive = check.positive;
        let entries = vec![LabeledCheck {
            label: "tp".to_string(),
            check,
        }];
        return Ok((entries, None, None, positive));
    }
    let range = range.ok_or_else(|| Error::MissingParamInterval("a".to_string()))?;
    let aff = affine_is_positive_on(tp, range, civ)?;
    let mut entries = Vec::new();
    if let EndpointCheck::Checked { check } = &aff.endpoint_lo {
        entries.push(LabeledCheck {
            label: "endpoint-a-lo".to_string(),
            check: check.clone(),
        });
    }
    if let EndpointCheck::Checked { check } = &aff.endpoint_hi {
        entries.push(LabeledCheck {
            label: "endpoint-a-hi".to_string(),
            check: check.clone(),
        });
    }
    match aff.linear_sign {
        ParamSign::Positive => entries.push(LabeledCheck {
            label: "param-linear-sign".to_string(),
            check: is_positive_on(&tp.linear, civ)?,
        }),
        ParamSign::Negative => entries.push(LabeledCheck {
            label: "param-linear-sign".to_string(),
            check: is_positive_on(&(-&tp.linear), civ)?,
        }),
        ParamSign::Indefinite | ParamSign::Zero => {}
    }
    let endpoint_case = if !aff.positive {
        None
    } else {
        Some(
            match (
                matches!(aff.endpoint_lo, EndpointCheck::ZeroPoly),
                matches!(aff.endpoint_hi, EndpointCheck::ZeroPoly),
            ) {
                (false, false) => EndpointCase::BothStrict,
                (true, false) => EndpointCase::LoVanishes,
                (false, true) => EndpointCase::HiVanishes,
                (true, true) => unreachable!("two vanishing endpoints cannot be positive"),
            },
        )
    };
    Ok((entries, Some(aff.linear_sign), endpoint_case, aff.positive))
}

/// Assembles the certificate for a successful proof, recomputing the
/// evidence so the emitted record is exactly what a checker will derive.
///
/// Fails with [`Error::CertificateMismatch`] if the evidence does not
/// actually establish positivity — callers must only invoke this after a
/// positive decision.
pub(crate) fn build_certificate(
    original_text: String,
    normalized: &MtpExpr,
    interval: &IntervalSpec,
    plan: &EstimationPlan,
    tp: &AffinePoly,
) -> Result<ProofCertificate, Error> {
    let civ = interval.concrete();
    let range = normalized.param.as_ref().and_then(|p| p.range.as_ref());
    let (positivity_evidence, param_p_sign, endpoint_case, positive) =
        evidence_for(tp, range, &civ)?;
    if !positive {
        return Err(Error::CertificateMismatch(
            "attempted to build a certificate for a non-positive TP".to_string(),
        ));
    }
    let cert_tp = if tp.is_parametric() {
        let range = range.expect("parametric TP implies a range");
        CertTp::LinearParam {
            form: LinearParamForm {
                p_poly: tp.linear.clone(),
                q_poly: tp.constant.clone(),
                a_lo: range.lo.clone(),
                a_hi: range.hi.clone(),
            },
        }
    } else {
        CertTp::Poly {
            poly: tp.constant.clone(),
        }
    };
    Ok(ProofCertificate {
        cert_version: CERT_VERSION,
        original_text,
        var: normalized.var.clone(),
        param: normalized.param.clone(),
        interval: CertInterval::from_spec(interval),
        normalized: normalized.clone(),
        khat_plan: plan.khat_plan.clone(),
        plan: plan
            .per_term
            .iter()
            .map(|e| e.as_ref().map(CertTermPlan::from_plan))
            .collect(),
        tp: cert_tp,
        positivity_evidence,
        param_p_sign,
        endpoint_case,
        conclusion: "proven".to_string(),
    })
}

/// Maps the branch a certificate records back to a request that
/// reproduces it: the two do-nothing branches fire under `auto` before
/// any method is consulted, and each explicit method reproduces itself.
fn requested_method(used: KhatMethodUsed) -> KhatMethod {
    match used {
        KhatMethodUsed::NoneOddOnly | KhatMethodUsed::SmallDelta => KhatMethod::Auto,
        KhatMethodUsed::MethodC => KhatMethod::MethodC,
        KhatMethodUsed::MethodD => KhatMethod::MethodD,
    }
}

/// Re-derives the entire proof from the certificate's input text and
/// compares every stored artifact bit for bit.
///
/// `Ok(())` means the certificate is genuine: the text re-parses and
/// re-normalizes to the stored model, the `k-hat` selection and plan are
/// admissible and reproduce the stored `TP` exactly (this re-runs the
/// bound constructors, so degrees, directions and validity radii are
/// re-checked), and every positivity check re-derives with identical
/// Sturm evidence. Any deviation is an `Err` naming the first mismatch.
pub fn verify_certificate(cert: &ProofCertificate) -> Result<(), Error> {
    if cert.cert_version != CERT_VERSION {
        return Err(Error::Certificate(format!(
            "unsupported cert_version {}",
            cert.cert_version
        )));
    }
    if cert.conclusion != "proven" {
        return Err(Error::Certificate(format!(
            "conclusion `{}` is not checkable (only `proven`)",
            cert.conclusion
        )));
    }

    // 1. The input text re-parses and re-normalizes to the stored model.
    let mut expr = parse_expr(&cert.original_text)?;
    match (&expr.param, &cert.param) {
        (Some(found), Some(stored)) if found.name == stored.name => {
            if let Some(range) = &stored.range {
                expr = expr.with_param_range(range.lo.clone(), range.hi.clone());
            }
        }
        (None, None) => {}
        _ => {
            return Err(Error::CertificateMismatch(
                "parameter of the input text does not match the stored parameter".to_string(),
            ))
        }
    }
    if expr.var != cert.var {
        return Err(Error::CertificateMismatch(format!(
            "variable `{}` in text vs `{}` stored",
            expr.var, cert.var
        )));
    }
    let normalized = normalize(&expr)?;
    if normalized != cert.normalized {
        return Err(Error::CertificateMismatch(
            "normalized model differs from the stored one".to_string(),
        ));
    }

    // 2. The interval is admissible and the proxy is the certified pair.
    let interval = cert.interval.to_spec()?;
    interval.check_prover_domain()?;

    // 3. The k-hat selection reproduces.
    let khat_plan = select_khat(&normalized, &interval, requested_method(cert.khat_plan.method_used))?;
    if khat_plan != cert.khat_plan {
        return Err(Error::CertificateMismatch(
            "k-hat selection does not reproduce".to_string(),
        ));
    }

    // 4. Recorded bound degrees match the plan entries.
    for entry in cert.plan.iter().flatten() {
        let (sin_degree, cos_degree) = entry.variant.bound_degrees(entry.s, entry.k);
        if (entry.sin_degree, entry.cos_degree) != (sin_degree, cos_degree) {
            return Err(Error::CertificateMismatch(
                "recorded bound degrees do not match the plan".to_string(),
            ));
        }
    }

    // 5. The estimate reproduces TP exactly. This re-runs every bound
    // constructor and re-checks plan admissibility (sign fit, k >= k-hat,
    // variant shapes); admissibility failures surface as their own errors.
    let plan = EstimationPlan {
        khat_plan: cert.khat_plan.clone(),
        per_term: cert
            .plan
            .iter()
            .map(|e| e.as_ref().map(|c| c.to_plan()))
            .collect(),
    };
    let tp = estimate_expr(&cert.khat_plan.transformed, &plan)?;
    let range = normalized.param.as_ref().and_then(|p| p.range.as_ref());
    match &cert.tp {
        CertTp::Poly { poly } => {
            if tp.is_parametric() || tp.constant != *poly {
                return Err(Error::CertificateMismatch(
                    "TP recomputation differs from the stored polynomial".to_string(),
                ));
            }
        }
        CertTp::LinearParam { form } => {
            if form.a_lo >= form.a_hi {
                return Err(Error::Certificate("parameter range is empty".to_string()));
            }
            let range = range.ok_or_else(|| {
                Error::CertificateMismatch("linear-param TP without a parameter range".to_string())
            })?;
            if range.lo != form.a_lo || range.hi != form.a_hi {
                return Err(Error::CertificateMismatch(
                    "parameter range differs between model and TP form".to_string(),
                ));
            }
            if tp.linear != form.p_poly || tp.constant != form.q_poly {
                return Err(Error::CertificateMismatch(
                    "TP recomputation differs from the stored linear-param form".to_string(),
                ));
            }
        }
    }

    // 6. The positivity evidence re-derives bit for bit and is positive.
    let civ = interval.concrete();
    let (entries, param_p_sign, endpoint_case, positive) = evidence_for(&tp, range, &civ)?;
    if entries != cert.positivity_evidence {
        return Err(Error::CertificateMismatch(
            "positivity evidence does not re-derive".to_string(),
        ));
    }
    if param_p_sign != cert.param_p_sign {
        return Err(Error::CertificateMismatch(
            "param_p_sign does not re-derive".to_string(),
        ));
    }
    if endpoint_case != cert.endpoint_case {
        return Err(Error::CertificateMismatch(
            "endpoint_case does not re-derive".to_string(),
        ));
    }
    if !positive {
        return Err(Error::CertificateMismatch(
            "evidence does not establish positivity".to_string(),
        ));
    }
    Ok(())
}
