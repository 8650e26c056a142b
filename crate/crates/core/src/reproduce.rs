//! Built-in worked examples with golden coefficient files.
//!
//! Each case runs a fixed, named inequality end to end and diffs every
//! polynomial it produces against coefficients stored under
//! `goldens/` (compiled in, so the corpus needs no filesystem access).
//! Golden files map a label to a coefficient list, constant term first,
//! in the same `"num/den"` string format certificates use.
//!
//! The four cases:
//!
//! * `mortici` — the cubic sine inequality cleared of denominators,
//!   proven by the automatic search on `(0, pi/2)`; golden: the
//!   dominated polynomial.
//! * `pade-left` — a `[6/4]` rational lower bound for `cos^2 x`,
//!   cleared of its (positive) denominator and proven on
//!   `(0, 1551414/10^6]` with the pinned plan `s = 0, k = 2`; golden:
//!   the degree-12 cofactor of `x^12` in the scaled dominated
//!   polynomial.
//! * `pade-right` — a `[4/4]` rational upper bound for `cos^2 x`:
//!   builds the cleared difference against the squared degree-8 upward
//!   cosine bound directly and certifies its positivity on the whole
//!   interval; golden: the cofactor of `x^10` in the scaled difference.
//! * `yang-param` — a parametric family: even cosine powers are
//!   rewritten away, the pinned plan `s = k = 1` produces a
//!   parameter-linear dominated polynomial, and the endpoint criterion
//!   decides it for all parameter values at once; goldens: the split
//!   polynomials and the upper-endpoint instantiation.

use std::collections::BTreeMap;

use crate::certificate::{CertTp, ProofCertificate};
use crate::error::Error;
use crate::estimate::AffinePoly;
use crate::expr::MtpExpr;
use crate::interval::IntervalSpec;
use crate::parse::parse_expr;
use crate::poly::Poly;
use crate::prover::{prove, prove_linear_param, LinearParamForm, PinnedPlan, ProveOptions};
use crate::rational::{from_cert_string, rat, rat_int};
use crate::sturm::is_positive_on;

pub const CASE_NAMES: [&str; 4] = ["mortici", "pade-left", "pade-right", "yang-param"];

/// What a reproduce run produced: one line per checked artifact, the
/// certificate when the case goes through the prover, and whether every
/// produced polynomial matched its golden.
#[derive(Debug, Clone)]
pub struct ReproduceReport {
    pub name: String,
    pub lines: Vec<String>,
    pub certificate: Option<ProofCertificate>,
    pub matched: bool,
}

fn golden_file(name: &str) -> Option<&'static str> {
    match name {
        "mortici" => Some(include_str!("../goldens/mortici.json")),
        "pade-left" => Some(include_str!("../goldens/pade-left.json")),
        "pade-right" => Some(include_str!("../goldens/pade-right.json")),
        "yang-param" => Some(include_str!("../goldens/yang-param.json")),
        _ => None,
    }
}

fn load_goldens(name: &str) -> Result<BTreeMap<String, Poly>, Error> {
    let text = golden_file(name)
        .ok_or_else(|| Error::Certificate(format!("no golden file for case `{name}`")))?;
    let raw: BTreeMap<String, Vec<String>> = serde_json::from_str(text)?;
    let mut out = BTreeMap::new();
    for (label, coeffs) in raw {
        let coeffs = coeffs
            .iter()
            .map(|s| from_cert_string(s))
            .collect::<Result<Vec<_>, _>>()?;
        out.insert(label, Poly::new(coeffs));
    }
    Ok(out)
}

/// Diffs one produced polynomial against its golden, appending a
/// matched/mismatch line; a mismatch names the first differing power.
fn diff_poly(
    report: &mut ReproduceReport,
    goldens: &BTreeMap<String, Poly>,
    label: &str,
    produced: &Poly,
) {
    let Some(golden) = goldens.get(label) else {
        report.matched = false;
        report.lines.push(format!("{label}: no golden entry"));
        return;
    };
    if produced == golden {
        report.lines.push(format!(
            "{label}: matches golden ({} coefficients)",
            golden.coeffs().len()
        ));
        return;
    }
    report.matched = false;
    let n = produced.coeffs().len().max(golden.coeffs().len());
    let first_diff = (0..n)
        .find(|&i| produced.coeff(i) != golden.coeff(i))
        .expect("polynomials differ");
    report.lines.push(format!(
        "{label}: MISMATCH at x^{first_diff}: produced {}, golden {}",
        produced.coeff(first_diff),
        golden.coeff(first_diff)
    ));
}

/// Divides by `x^m`, demanding that `x^m` exactly divides `p`.
fn strip_xpow(p: &Poly, m: usize, what: &str) -> Result<Poly, Error> {
    if p.x_power() < m {
        return Err(Error::Certificate(format!(
            "{what}: expected a factor of x^{m}, found x^{}",
            p.x_power()
        )));
    }
    Ok(p.div_xpow(m))
}

/// Runs a named case. `Ok` with `matched == false` means the case ran
/// but a polynomial diverged from its golden; `Err` means the case
/// could not run at all (which would itself be a regression).
pub fn reproduce(name: &str) -> Result<ReproduceReport, Error> {
    let goldens = load_goldens(name)?;
    let mut report = ReproduceReport {
        name: name.to_string(),
        lines: Vec::new(),
        certificate: None,
        matched: true,
    };
    match name {
        "mortici" => mortici(&mut report, &goldens)?,
        "pade-left" => pade_left(&mut report, &goldens)?,
        "pade-right" => pade_right(&mut report, &goldens)?,
        "yang-param" => yang_param(&mut report, &goldens)?,
        _ => unreachable!("load_goldens rejected unknown names"),
    }
    Ok(report)
}

/// Extracts the plain dominated polynomial from a certificate.
fn plain_tp(cert: &ProofCertificate) -> Result<&Poly, Error> {
    match &cert.tp {
        CertTp::Poly { poly } => Ok(poly),
        CertTp::LinearParam { .. } => Err(Error::Certificate(
            "expected a plain dominated polynomial".to_string(),
        )),
    }
}

fn proved_certificate(
    e: &MtpExpr,
    interval: &IntervalSpec,
    options: &ProveOptions,
) -> Result<ProofCertificate, Error> {
    match prove(e, interval, options)? {
        crate::prover::ProveOutcome::Proved(cert) => Ok(*cert),
        other => Err(Error::Certificate(format!(
            "reproduce case did not prove: {:?}",
            other.failure().map(|f| &f.message)
        ))),
    }
}

fn mortici(report: &mut ReproduceReport, goldens: &BTreeMap<String, Poly>) -> Result<(), Error> {
    let text = "x^3*cos(x) - sin(x)^3 + (1/15)*x^7";
    let e = parse_expr(text)?;
    let options = ProveOptions {
        original_text: Some(text.to_string()),
        ..ProveOptions::default()
    };
    let cert = proved_certificate(&e, &IntervalSpec::pi_over_two(), &options)?;
    report
        .lines
        .push(format!("proven: {text} > 0 on (0, pi/2)"));
    diff_poly(report, goldens, "tp", plain_tp(&cert)?);
    report.certificate = Some(cert);
    Ok(())
}

fn pade_left(report: &mut ReproduceReport, goldens: &BTreeMap<String, Poly>) -> Result<(), Error> {
    // cos^2 x exceeds its [6/4] rational lower bound up to the bound's
    // unique zero; cleared of the (positive) denominator this is an MTP
    // inequality on (0, 1.551414].
    let text = "cos(x)^2*(17*x^4 + 420*x^2 + 4095) + 59*x^6 - 962*x^4 + 3675*x^2 - 4095";
    let e = parse_expr(text)?;
    let delta = rat(1_551_414, 1_000_000);
    let options = ProveOptions {
        pinned_plan: Some(PinnedPlan::Uniform { s: 0, k: 2 }),
        original_text: Some(text.to_string()),
        ..ProveOptions::default()
    };
    let cert = proved_certificate(&e, &IntervalSpec::delta(delta), &options)?;
    report
        .lines
        .push(format!("proven: {text} > 0 on (0, 1551414/1000000]"));
    // The dominated polynomial is x^12 * cofactor / 13168189440000.
    let scaled = plain_tp(&cert)?.scale(&rat_int(13_168_189_440_000));
    let cofactor = strip_xpow(&scaled, 12, "scaled dominated polynomial")?;
    diff_poly(report, goldens, "cofactor", &cofactor);
    report.certificate = Some(cert);
    Ok(())
}

fn pade_right(report: &mut ReproduceReport, goldens: &BTreeMap<String, Poly>) -> Result<(), Error> {
    // cos^2 x stays below its [4/4] rational upper bound on all of
    // (0, pi/2): cos <= T-bar_8 with both nonnegative there, so it is
    // enough that the cleared difference against (T-bar_8)^2 is
    // positive. That difference is an ordinary polynomial — no search,
    // just the construction and one exact positivity decision.
    let t8 = crate::taylor::taylor_cos(8)?.poly;
    let num = Poly::new(vec![
        rat_int(945),
        rat_int(0),
        rat_int(-780),
        rat_int(0),
        rat_int(163),
    ]);
    let den = Poly::new(vec![
        rat_int(945),
        rat_int(0),
        rat_int(165),
        rat_int(0),
        rat_int(13),
    ]);
    let diff = &num - &(&(&t8 * &t8) * &den);
    let scaled = diff.scale(&rat_int(1_625_702_400));
    let cofactor = strip_xpow(&scaled, 10, "scaled difference")?;
    report.lines.push(
        "difference (163x^4 - 780x^2 + 945) - (upward cos bound, degree 8)^2 * (13x^4 + 165x^2 + 945)"
            .to_string(),
    );
    diff_poly(report, goldens, "cofactor", &cofactor);
    let civ = IntervalSpec::pi_over_two().concrete();
    let check = is_positive_on(&cofactor, &civ)?;
    if check.positive {
        report
            .lines
            .push("cofactor certified positive on (0, pi/2)".to_string());
    } else {
        report.matched = false;
        report
            .lines
            .push("cofactor NOT positive on (0, pi/2)".to_string());
    }
    Ok(())
}

fn yang_param(report: &mut ReproduceReport, goldens: &BTreeMap<String, Poly>) -> Result<(), Error> {
    // A parametric derivative inequality: proving f(t) > 0 for all
    // a in (1, 3/2) on (0, pi/2). The symbolic upper endpoint forces
    // the even-cosine rewrite; the pinned plan s = k = 1 then yields a
    // parameter-linear dominated polynomial decided at its endpoints.
    let text = "4*t*(a - 1)*cos(t)^2 - 2*a*sin(t)*cos(t) - 2*t*(a - 2)";
    let e = parse_expr(text)?;
    let options = ProveOptions {
        pinned_plan: Some(PinnedPlan::Uniform { s: 1, k: 1 }),
        param_range: Some((rat_int(1), rat(3, 2))),
        original_text: Some(text.to_string()),
        ..ProveOptions::default()
    };
    let cert = proved_certificate(&e, &IntervalSpec::pi_over_two(), &options)?;
    report.lines.push(format!(
        "proven: {text} > 0 on (0, pi/2) for all a in (1, 3/2)"
    ));
    let form: LinearParamForm = match &cert.tp {
        CertTp::LinearParam { form } => form.clone(),
        CertTp::Poly { .. } => {
            return Err(Error::Certificate(
                "expected a parameter-linear dominated polynomial".to_string(),
            ))
        }
    };
    diff_poly(report, goldens, "p", &form.p_poly);
    diff_poly(report, goldens, "q", &form.q_poly);
    let tp = AffinePoly {
        constant: form.q_poly.clone(),
        linear: form.p_poly.clone(),
    };
    diff_poly(report, goldens, "at_a_hi", &tp.instantiate(&rat(3, 2)));
    // The standalone family decision agrees with the certificate.
    let standalone = prove_linear_param(&form, &IntervalSpec::pi_over_two())?;
    if standalone.positive {
        report
            .lines
            .push("endpoint criterion: positive for the whole family".to_string());
    } else {
        report.matched = false;
        report
            .lines
            .push("endpoint criterion FAILED for the family".to_string());
    }
    report.certificate = Some(cert);
    Ok(())
}
