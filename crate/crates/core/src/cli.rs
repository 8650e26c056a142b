//! Command-line front-end.
//!
//! Three subcommands: `prove` runs the prover on an inequality given as
//! text, `verify` re-checks a certificate file, `reproduce` runs one of
//! the built-in worked examples against its golden coefficients.
//!
//! Exit codes are stable: 0 = proven / verified / golden match,
//! 1 = not proven / disproven / verification failure / golden mismatch,
//! 2 = usage or input-parse error (parse errors carry byte positions).
//!
//! Verbosity 0 prints exactly one machine-readable status word;
//! verbosity 1 (default) a short human account; verbosity 2 adds the
//! full coefficient lists.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::certificate::{verify_certificate, CertTp, ProofCertificate};
use crate::error::Error;
use crate::estimate::{FailDiag, Variant};
use crate::interval::IntervalSpec;
use crate::khat::KhatMethod;
use crate::parse::parse_expr;
use crate::poly::Poly;
use crate::prover::{prove, FailureReport, ProveOptions, ProveOutcome};
use crate::rational::{approx_decimal, from_cert_string, Rational};
use crate::reproduce::{reproduce, CASE_NAMES};

pub const EXIT_PROVEN: i32 = 0;
pub const EXIT_NOT_PROVEN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mtp-prover",
    version,
    about = "Prove mixed trigonometric-polynomial inequalities on sub-intervals of (0, pi/2) \
             with exact arithmetic and re-checkable certificates",
    disable_help_subcommand = true
)]
struct Cli {
    /// 0 = one-line machine status, 1 = human summary, 2 = full detail.
    #[arg(short, long, global = true, default_value_t = 1)]
    verbosity: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    MethodC,
    MethodD,
}

impl From<MethodArg> for KhatMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => KhatMethod::Auto,
            MethodArg::MethodC => KhatMethod::MethodC,
            MethodArg::MethodD => KhatMethod::MethodD,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prove EXPR > 0 on (0, upper); writes a certificate on success if
    /// requested.
    Prove {
        /// The inequality's left-hand side, e.g. "x - sin(x)".
        expr: String,
        /// Upper endpoint: "pi/2" (symbolic, open) or a rational like
        /// "3/2" or "1".
        #[arg(long, default_value = "pi/2")]
        upper: String,
        /// Whether a rational upper endpoint is included (default:
        /// true); "pi/2" is always open.
        #[arg(long, action = clap::ArgAction::Set)]
        upper_closed: Option<bool>,
        /// How to handle even cosine powers.
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Open parameter range as "name=lo..hi", e.g. "a=1..3/2".
        #[arg(long)]
        param: Option<String>,
        /// Cap on every Taylor index during the automatic search.
        #[arg(long, default_value_t = 12)]
        budget: usize,
        /// Write the proof certificate (JSON) here on success.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Re-check a certificate file independently.
    Verify {
        /// Path to a certificate produced by `prove`.
        path: PathBuf,
    },
    /// Run a built-in worked example and diff its polynomials against
    /// the stored goldens (mortici, pade-left, pade-right, yang-param).
    Reproduce {
        /// Case name.
        name: String,
    },
}

/// Entry point: parses `args` (including the program name) and runs.
/// Returns the process exit code; all output goes to standard output,
/// usage errors to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with success
            // status; respect that.
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let v = cli.verbosity;
    match cli.command {
        Command::Prove {
            expr,
            upper,
            upper_closed,
            method,
            param,
            budget,
            certificate,
        } => run_prove(
            v,
            &expr,
            &upper,
            upper_closed,
            method,
            param.as_deref(),
            budget,
            certificate.as_deref(),
        ),
        Command::Verify { path } => run_verify(v, &path),
        Command::Reproduce { name } => run_reproduce(v, &name),
    }
}

/// True for errors that mean the invocation itself was wrong, as
/// opposed to the prover being unable to finish a proof.
fn is_usage_error(e: &Error) -> bool {
    e.is_usage()
}

/// Parses the textual upper endpoint: `"pi/2"` (symbolic, always open)
/// or a rational like `"3/2"`. Shared with the C interface so every
/// front-end accepts identical forms.
pub fn parse_upper(upper: &str, upper_closed: Option<bool>) -> Result<IntervalSpec, Error> {
    if upper.trim() == "pi/2" {
        if upper_closed == Some(true) {
            return Err(Error::BadInterval(
                "the pi/2 upper endpoint is always open; drop --upper-closed true".to_string(),
            ));
        }
        return Ok(IntervalSpec::pi_over_two());
    }
    let delta = from_cert_string(upper.trim())?;
    let mut spec = IntervalSpec::delta(delta);
    spec.upper_closed = upper_closed.unwrap_or(true);
    spec.check_prover_domain()?;
    Ok(spec)
}

/// Parses a parameter range written as `"name=lo..hi"` with rational
/// endpoints, e.g. `"a=1..3/2"`. Shared with the C interface.
pub fn parse_param_spec(text: &str) -> Result<(String, Rational, Rational), Error> {
    let bad = |msg: &str| Error::BadInterval(format!("parameter range `{text}`: {msg}"));
    let (name, range) = text
        .split_once('=')
        .ok_or_else(|| bad("expected name=lo..hi"))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(bad("parameter name must be alphanumeric"));
    }
    let (lo, hi) = range
        .split_once("..")
        .ok_or_else(|| bad("expected name=lo..hi"))?;
    let lo = from_cert_string(lo.trim())?;
    let hi = from_cert_string(hi.trim())?;
    Ok((name.to_string(), lo, hi))
}

/// Parses `"name=lo..hi"`, checks it names the expression's parameter,
/// and installs the range into `options`. Shared with the C interface.
pub fn apply_param_range(
    e: &crate::expr::MtpExpr,
    spec: &str,
    options: &mut ProveOptions,
) -> Result<(), Error> {
    let (name, lo, hi) = parse_param_spec(spec)?;
    match &e.param {
        Some(p) if p.name == name => {}
        Some(p) => {
            return Err(Error::BadInterval(format!(
                "parameter range names `{name}` but the expression's parameter is `{}`",
                p.name
            )))
        }
        None => {
            return Err(Error::UnusedParamInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            })
        }
    }
    options.param_range = Some((lo, hi));
    Ok(())
}

fn coeff_list(p: &Poly) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn describe_interval(spec: &IntervalSpec) -> String {
    match &spec.upper {
        crate::interval::BoundaryValue::PiOverTwo => "(0, pi/2)".to_string(),
        crate::interval::BoundaryValue::Rational(r) => {
            let close = if spec.upper_closed { "]" } else { ")" };
            format!("(0, {r}{close}")
        }
    }
}

fn print_certificate_summary(v: u8, cert: &ProofCertificate) {
    if v < 1 {
        return;
    }
    println!(
        "k-hat: {} (branch: {})",
        cert.khat_plan.khat,
        serde_json::to_value(cert.khat_plan.method_used)
            .ok()
            .and_then(|x| x.as_str().map(String::from))
            .unwrap_or_default()
    );
    for (i, entry) in cert.plan.iter().enumerate() {
        match entry {
            Some(e) => println!(
                "addend {i}: {} with s={} k={} (sin degree {}, cos degree {})",
                variant_name(e.variant),
                e.s,
                e.k,
                e.sin_degree,
                e.cos_degree
            ),
            None => println!("addend {i}: polynomial, passes through"),
        }
    }
    match &cert.tp {
        CertTp::Poly { poly } => {
            println!(
                "dominated polynomial: degree {}",
                poly.degree().unwrap_or(0)
            );
            if v >= 2 {
                println!("  coefficients: {}", coeff_list(poly));
            }
        }
        CertTp::LinearParam { form } => {
            println!(
                "dominated polynomial: q(x) + a*p(x), degrees {} and {}, a in ({}, {})",
                form.q_poly.degree().unwrap_or(0),
                form.p_poly.degree().unwrap_or(0),
                form.a_lo,
                form.a_hi
            );
            if v >= 2 {
                println!("  p: {}", coeff_list(&form.p_poly));
                println!("  q: {}", coeff_list(&form.q_poly));
            }
        }
    }
    for item in &cert.positivity_evidence {
        println!(
            "evidence `{}`: sign changes {} -> {}, positive: {}",
            item.label,
            item.check.sign_changes_at_lower,
            item.check.sign_changes_at_upper,
            item.check.positive
        );
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::I => "step I (downward bounds)",
        Variant::IIi => "step II-i (flipped odd cosine)",
        Variant::IIii => "step II-ii (flipped odd sine)",
        Variant::IIiii => "step II-iii (upward bounds)",
    }
}

/// Exact rendering when short, decimal approximation when the exact
/// fraction would drown the terminal. Rounds up, so "below B" and
/// "value at most B" stay true of the displayed number.
fn show_value(r: &Rational) -> String {
    let exact = r.to_string();
    if exact.len() <= 48 {
        exact
    } else {
        format!("about {}", approx_decimal(r, true))
    }
}

fn print_failure(v: u8, report: &FailureReport) {
    if v < 1 {
        return;
    }
    println!("{}", report.message);
    if let Some(budget) = report.budget {
        println!("plans tried: {} (budget {})", report.tried, budget);
    }
    match &report.diagnostic {
        Some(FailDiag::Disproven { x, value_below }) => {
            println!(
                "counterexample: at x = {x} the function is below {}",
                show_value(value_below)
            );
        }
        Some(FailDiag::TpLeftmostRoot { a, lo, hi, witness }) => {
            let at = a
                .as_ref()
                .map(|a| format!(" (at parameter a = {a})"))
                .unwrap_or_default();
            println!("last candidate{at} has its leftmost root in ({lo}, {hi}]");
            if let Some(w) = witness {
                println!(
                    "  nonpositive sample: value {} at x = {}",
                    show_value(&w.value),
                    w.x
                );
            }
        }
        Some(FailDiag::TpNonpositive { a, x, value }) => {
            let at = a
                .as_ref()
                .map(|a| format!(" (at parameter a = {a})"))
                .unwrap_or_default();
            println!("last candidate{at} is not positive: value {} at x = {x}", show_value(value));
        }
        None => {}
    }
}

#[allow(clippy::too_many_arguments)]
fn run_prove(
    v: u8,
    expr_text: &str,
    upper: &str,
    upper_closed: Option<bool>,
    method: MethodArg,
    param: Option<&str>,
    budget: usize,
    certificate: Option<&std::path::Path>,
) -> i32 {
    match prove_from_args(
        v,
        expr_text,
        upper,
        upper_closed,
        method,
        param,
        budget,
        certificate,
    ) {
        Ok(code) => code,
        Err(e) => {
            if is_usage_error(&e) {
                eprintln!("error: {e}");
                EXIT_USAGE
            } else {
                if v == 0 {
                    println!("not-proven");
                } else {
                    println!("not proven: {e}");
                }
                EXIT_NOT_PROVEN
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn prove_from_args(
    v: u8,
    expr_text: &str,
    upper: &str,
    upper_closed: Option<bool>,
    method: MethodArg,
    param: Option<&str>,
    budget: usize,
    certificate: Option<&std::path::Path>,
) -> Result<i32, Error> {
    let interval = parse_upper(upper, upper_closed)?;
    if upper.trim() == "pi/2" && method == MethodArg::MethodC {
        return Err(Error::MethodCNeedsRationalUpper);
    }
    let e = parse_expr(expr_text)?;
    let mut options = ProveOptions {
        method: method.into(),
        budget,
        original_text: Some(expr_text.to_string()),
        ..ProveOptions::default()
    };
    if let Some(spec) = param {
        apply_param_range(&e, spec, &mut options)?;
    }
    match prove(&e, &interval, &options)? {
        ProveOutcome::Proved(cert) => {
            if v == 0 {
                println!("proven");
            } else {
                println!(
                    "proven: {expr_text} > 0 on {}{}",
                    describe_interval(&interval),
                    cert.param
                        .as_ref()
                        .and_then(|p| p.range.as_ref())
                        .map(|r| format!(" for all {} in ({}, {})",
                            cert.param.as_ref().unwrap().name, r.lo, r.hi))
                        .unwrap_or_default()
                );
                print_certificate_summary(v, &cert);
            }
            if let Some(path) = certificate {
                std::fs::write(path, cert.to_json())?;
                if v >= 1 {
                    println!("certificate written to {}", path.display());
                }
            }
            Ok(EXIT_PROVEN)
        }
        ProveOutcome::Disproven(report) => {
            if v == 0 {
                println!("disproven");
            } else {
                print_failure(v, &report);
            }
            Ok(EXIT_NOT_PROVEN)
        }
        ProveOutcome::NotProven(report) => {
            if v == 0 {
                println!("not-proven");
            } else {
                print_failure(v, &report);
            }
            Ok(EXIT_NOT_PROVEN)
        }
    }
}

fn run_verify(v: u8, path: &std::path::Path) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let cert = match ProofCertificate::from_json(&text) {
        Ok(cert) => cert,
        Err(e) => {
            if v == 0 {
                println!("invalid");
            } else {
                println!("invalid certificate: {e}");
            }
            return EXIT_NOT_PROVEN;
        }
    };
    match verify_certificate(&cert) {
        Ok(()) => {
            if v == 0 {
                println!("verified");
            } else {
                println!(
                    "verified: certificate for `{}` re-derives exactly",
                    cert.original_text
                );
                print_certificate_summary(v.saturating_sub(1), &cert);
            }
            EXIT_PROVEN
        }
        Err(e) => {
            if v == 0 {
                println!("invalid");
            } else {
                println!("invalid certificate: {e}");
            }
            EXIT_NOT_PROVEN
        }
    }
}

fn run_reproduce(v: u8, name: &str) -> i32 {
    if !CASE_NAMES.contains(&name) {
        eprintln!(
            "error: unknown case `{name}` (available: {})",
            CASE_NAMES.join(", ")
        );
        return EXIT_USAGE;
    }
    match reproduce(name) {
        Ok(report) => {
            if v == 0 {
                println!("{}", if report.matched { "match" } else { "mismatch" });
            } else {
                for line in &report.lines {
                    println!("{line}");
                }
                if v >= 2 {
                    if let Some(cert) = &report.certificate {
                        print_certificate_summary(v, cert);
                    }
                }
                println!(
                    "{}",
                    if report.matched {
                        "all polynomials match the goldens"
                    } else {
                        "GOLDEN MISMATCH"
                    }
                );
            }
            if report.matched {
                EXIT_PROVEN
            } else {
                EXIT_NOT_PROVEN
            }
        }
        Err(e) => {
            if v == 0 {
                println!("mismatch");
            } else {
                println!("case failed to run: {e}");
            }
            EXIT_NOT_PROVEN
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn upper_endpoint_parsing_covers_both_forms() {
        let spec = parse_upper("pi/2", None).unwrap();
        assert!(spec.has_symbolic_upper());
        let spec = parse_upper("3/2", None).unwrap();
        assert_eq!(
            spec.upper,
            crate::interval::BoundaryValue::Rational(rat(3, 2))
        );
        assert!(spec.upper_closed); // rational uppers default to closed
        let spec = parse_upper("1", Some(false)).unwrap();
        assert!(!spec.upper_closed);
        assert!(parse_upper("pi/2", Some(true)).is_err());
        assert!(parse_upper("2", None).is_err()); // beyond pi/2
        assert!(parse_upper("garbage", None).is_err());
    }

    #[test]
    fn param_specs_parse_names_and_rational_endpoints() {
        let (name, lo, hi) = parse_param_spec("a=1..3/2").unwrap();
        assert_eq!(name, "a");
        assert_eq!(lo, rat(1, 1));
        assert_eq!(hi, rat(3, 2));
        let (name, lo, hi) = parse_param_spec("beta_1 = -1/2 .. 0").unwrap();
        assert_eq!(name, "beta_1");
        assert_eq!(lo, rat(-1, 2));
        assert_eq!(hi, rat(0, 1));
        assert!(parse_param_spec("a=1").is_err());
        assert!(parse_param_spec("1..2").is_err());
        assert!(parse_param_spec("a*=1..2").is_err());
    }

    #[test]
    fn usage_errors_are_distinguished_from_proof_failures() {
        assert!(is_usage_error(&Error::Parse {
            pos: 3,
            msg: "x".into()
        }));
        assert!(is_usage_error(&Error::MethodCNeedsRationalUpper));
        assert!(!is_usage_error(&Error::BudgetExhausted { budget: 3 }));
        assert!(!is_usage_error(&Error::SignIndefinite {
            term: 0,
            lo: "-1".into(),
            hi: "1".into()
        }));
    }
}
