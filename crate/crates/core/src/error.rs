//! Crate-wide error type.
//!
//! One enum covers all modules: the prover pipeline threads errors through
//! several layers (parse -> model -> estimation -> positivity) and a single
//! type keeps the plumbing flat. Variants carry enough context to produce
//! actionable messages, including byte positions for parse failures.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Sign queries (Sturm chains, positivity) are undefined for the zero
    /// polynomial.
    #[error("sign undecidable for zero polynomial")]
    ZeroPolynomial,

    /// `isolate_root` requires exactly one root in the query interval.
    #[error("not uniquely rooted: {count} roots in the query interval")]
    NotUniquelyRooted { count: usize },

    #[error("malformed rational literal `{0}` (expected `num` or `num/den`)")]
    BadRational(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unsupported function `{name}` at byte {pos} (only sin and cos)")]
    UnsupportedFunction { name: String, pos: usize },

    #[error("nonlinear parameter use at byte {pos}: parameter must appear affinely")]
    NonlinearParam { pos: usize },

    #[error("zero expression: all terms cancel, so `f > 0` is vacuously false")]
    ZeroExpression,

    #[error("invalid interval: {0}")]
    BadInterval(String),

    #[error("method-c requires a rational upper bound strictly below pi/2")]
    MethodCNeedsRationalUpper,

    #[error("delta out of range: need 0 < delta < pi/2")]
    DeltaOutOfRange,

    #[error("expression has parameter `{0}` but no parameter interval was given")]
    MissingParamInterval(String),

    #[error("parameter interval ({lo}, {hi}) given but the expression has no parameter")]
    UnusedParamInterval { lo: String, hi: String },

    #[error(
        "coefficient of term #{term} changes sign on the parameter interval ({lo}, {hi}); \
         a one-signed coefficient is required to pick a bound direction"
    )]
    SignIndefinite { term: usize, lo: String, hi: String },

    #[error("step I requires k >= khat: term #{term} has k = {k} < khat = {khat}")]
    KBelowKhat { term: usize, k: usize, khat: usize },

    #[error(
        "variant {variant} is a certified lower bound only for {shape} terms; \
         use II-iii for mixed terms"
    )]
    VariantShape { variant: String, shape: String },

    #[error("Taylor degree cap exceeded: requested degree {n} > {cap}")]
    DegreeCap { n: usize, cap: usize },

    #[error("degree {n} is not admissible for a {func} bound")]
    TaylorDegree { func: &'static str, n: usize },

    #[error("search budget exhausted: no admissible plan with indices <= {budget}")]
    BudgetExhausted { budget: usize },

    #[error("plan does not fit the expression: {0}")]
    PlanShape(String),

    #[error("malformed certificate: {0}")]
    Certificate(String),

    #[error("certificate check failed: {0}")]
    CertificateMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors that mean the request itself was malformed (bad
    /// syntax, bad interval, inconsistent options), as opposed to the
    /// prover being unable to finish a proof of a well-posed request.
    /// Front-ends use this to separate "fix your input" exit paths from
    /// "the proof attempt failed" exit paths.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::BadRational(_)
                | Error::UnsupportedFunction { .. }
                | Error::NonlinearParam { .. }
                | Error::BadInterval(_)
                | Error::DeltaOutOfRange
                | Error::MethodCNeedsRationalUpper
                | Error::MissingParamInterval(_)
                | Error::UnusedParamInterval { .. }
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Certificate(format!("json: {e}"))
    }
}
