//! Automated positivity prover for mixed trigonometric-polynomial
//! functions on sub-intervals of `(0, pi/2)`.
//!
//! The input language is finite sums `sum_i alpha_i * x^p_i * cos^q_i(x)
//! * sin^r_i(x)` with rational coefficients. To prove such an `f`
//! strictly positive on `(0, delta]` or `(0, pi/2)`, every trigonometric
//! factor is replaced by a one-sided Taylor polynomial chosen so the
//! whole term is bounded from below; the resulting ordinary polynomial
//! minorant is then decided by exact Sturm-chain root counting over
//! arbitrary-precision rationals. A successful proof is emitted as a
//! JSON certificate containing every polynomial and every sign count the
//! decision used, and the certificate checker re-derives all of it
//! independently.
//!
//! No floating point participates in any decision: bounds, root counts,
//! and evaluations are exact rational arithmetic throughout.

pub mod certificate;
pub mod cli;
pub mod enclosure;
pub mod error;
pub mod estimate;
pub mod expr;
pub mod interval;
pub mod khat;
pub mod parse;
pub mod poly;
pub mod prover;
pub mod rational;
pub mod reproduce;
pub mod sturm;
pub mod taylor;

pub use certificate::{
    verify_certificate, CertInterval, CertTermPlan, CertTp, EndpointCase, LabeledCheck,
    ProofCertificate, CERT_VERSION,
};
pub use error::Error;
pub use estimate::{
    auto_search, estimate_expr, estimate_term, AffinePoly, AffinePositivity, EstimationPlan,
    FailDiag, SearchOutcome, SearchSuccess, TermPlan, TpEvidence, Variant,
};
pub use expr::{
    eliminate_even_cos, normalize, AffineCoeff, MtpExpr, MtpTerm, ParamRange, ParamSpec,
};
pub use interval::{BoundaryValue, ConcreteInterval, IntervalSpec};
pub use khat::{khat_method_c, select_khat, KhatMethod, KhatMethodUsed, KhatPlan};
pub use parse::parse_expr;
pub use poly::Poly;
pub use prover::{
    prove, prove_linear_param, FailStatus, FailureReport, LinearParamForm, PinnedPlan,
    ProveOptions, ProveOutcome,
};
pub use reproduce::{reproduce, ReproduceReport, CASE_NAMES};
pub use rational::Rational;
pub use sturm::{count_roots, is_positive_on, isolate_root, leftmost_root, sturm_chain, PositivityCheck};
pub use taylor::{
    cos_crossing_dk, cos_root_ck, taylor_cos, taylor_sin, Direction, RootEnclosure, TaylorBound,
    TrigFn,
};
