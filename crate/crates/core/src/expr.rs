//! The mixed trigonometric-polynomial expression model.
//!
//! An expression is a finite sum of terms `alpha * x^p * cos^q(x) *
//! sin^r(x)` where `alpha` is rational or, for parametric families,
//! affine in a single parameter (`c0 + c1*a`). Throughout the crate `q`
//! is the cosine exponent and `r` the sine exponent.
//!
//! Canonical form (produced by [`normalize`]) sorts terms by `(p, q, r)`
//! and merges duplicates, so two expressions are equal as values exactly
//! when their canonical forms are equal structurally. The even-cosine
//! elimination of [`eliminate_even_cos`] rewrites `cos^{2j}` as
//! `(1 - sin^2)^j`, which is what lets intervals with a symbolic `pi/2`
//! endpoint avoid the cosine's sign change entirely.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosure::{self, Enclosure};
use crate::error::Error;
use crate::rational::{rat_int, Rational};

/// A coefficient affine in the parameter: `c0 + c1 * a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCoeff {
    #[serde(with = "crate::rational::serde_str")]
    pub c0: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub c1: Rational,
}

impl AffineCoeff {
    pub fn constant(c0: Rational) -> Self {
        AffineCoeff {
            c0,
            c1: Rational::zero(),
        }
    }

    pub fn new(c0: Rational, c1: Rational) -> Self {
        AffineCoeff { c0, c1 }
    }

    pub fn zero() -> Self {
        AffineCoeff::constant(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.c1.is_zero()
    }

    pub fn add(&self, other: &AffineCoeff) -> AffineCoeff {
        AffineCoeff {
            c0: &self.c0 + &other.c0,
            c1: &self.c1 + &other.c1,
        }
    }

    pub fn neg(&self) -> AffineCoeff {
        AffineCoeff {
            c0: -&self.c0,
            c1: -&self.c1,
        }
    }

    pub fn scale(&self, c: &Rational) -> AffineCoeff {
        AffineCoeff {
            c0: &self.c0 * c,
            c1: &self.c1 * c,
        }
    }

    /// Product of two affine coefficients; `None` when both depend on
    /// the parameter (the product would be quadratic).
    pub fn mul(&self, other: &AffineCoeff) -> Option<AffineCoeff> {
        if !self.c1.is_zero() && !other.c1.is_zero() {
            return None;
        }
        Some(AffineCoeff {
            c0: &self.c0 * &other.c0,
            c1: &self.c0 * &other.c1 + &self.c1 * &other.c0,
        })
    }

    /// The value `c0 + c1 * a`; `None` if a parameter value is needed
    /// but not supplied.
    pub fn value(&self, a: Option<&Rational>) -> Option<Rational> {
        if self.c1.is_zero() {
            return Some(self.c0.clone());
        }
        a.map(|a| &self.c0 + &self.c1 * a)
    }
}

/// One addend `alpha * x^p * cos^q(x) * sin^r(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtpTerm {
    pub alpha: AffineCoeff,
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl MtpTerm {
    pub fn new(alpha: AffineCoeff, p: usize, q: usize, r: usize) -> Self {
        MtpTerm { alpha, p, q, r }
    }

    /// Purely polynomial addend (no trigonometric factor).
    pub fn is_polynomial(&self) -> bool {
        self.q == 0 && self.r == 0
    }

    fn key(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.r)
    }
}

/// An open rational interval for the parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRange {
    #[serde(with = "crate::rational::serde_str")]
    pub lo: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub hi: Rational,
}

/// The parameter of a parametric family, with its range once known.
/// Parsing records only the name; the range is attached at prove time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub range: Option<ParamRange>,
}

/// A sum of mixed trigonometric-polynomial terms in one variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MtpExpr {
    pub terms: Vec<MtpTerm>,
    /// Variable name as written in the input; printing only.
    pub var: String,
    pub param: Option<ParamSpec>,
}

impl MtpExpr {
    pub fn new(terms: Vec<MtpTerm>, var: impl Into<String>) -> Self {
        MtpExpr {
            terms,
            var: var.into(),
            param: None,
        }
    }

    pub fn with_param_range(mut self, lo: Rational, hi: Rational) -> Self {
        if let Some(param) = &mut self.param {
            param.range = Some(ParamRange { lo, hi });
        }
        self
    }

    /// True if some term carries a positive even cosine power, the case
    /// the k-hat machinery exists for.
    pub fn has_even_cos(&self) -> bool {
        self.terms.iter().any(|t| t.q > 0 && t.q % 2 == 0)
    }

    pub fn has_param_terms(&self) -> bool {
        self.terms.iter().any(|t| !t.alpha.is_constant())
    }

    /// Encloses the value at `x` (with the parameter instantiated at `a`
    /// if present) using the independent series oracle. `None` when a
    /// parameter value is needed but missing.
    pub fn eval_enclosure(&self, x: &Rational, a: Option<&Rational>) -> Option<Enclosure> {
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for t in &self.terms {
            let c = t.alpha.value(a)?;
            let (tlo, thi) = enclosure::term_enclosure(&c, t.p, t.q, t.r, x);
            lo += tlo;
            hi += thi;
        }
        Some((lo, hi))
    }
}

/// Merges like terms and drops vanished ones; no zero-sum check.
fn merge_terms(mut terms: Vec<MtpTerm>) -> Vec<MtpTerm> {
    terms.sort_by_key(MtpTerm::key);
    let mut merged: Vec<MtpTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match merged.last_mut() {
            Some(last) if last.key() == t.key() => {
                last.alpha = last.alpha.add(&t.alpha);
            }
            _ => merged.push(t),
        }
    }
    merged.retain(|t| !t.alpha.is_zero());
    merged
}

/// Canonicalizes: merges like terms, drops zero terms, sorts by
/// `(p, q, r)`. Value-preserving. Fails if everything cancels — the
/// inequality `f > 0` is then unprovable by construction.
pub fn normalize(e: &MtpExpr) -> Result<MtpExpr, Error> {
    let terms = merge_terms(e.terms.clone());
    if terms.is_empty() {
        return Err(Error::ZeroExpression);
    }
    Ok(MtpExpr {
        terms,
        var: e.var.clone(),
        param: e.param.clone(),
    })
}

/// Rewrites every even cosine power via `cos^{2j} = (1 - sin^2)^j`
/// (odd powers keep a single residual cosine). Value-preserving; the
/// output contains no term with even `q > 0` and at most `sum of j`
/// more terms than the input.
pub fn eliminate_even_cos(e: &MtpExpr) -> MtpExpr {
    let mut out = Vec::new();
    for t in &e.terms {
        let j = t.q / 2;
        let residual_q = t.q % 2;
        if j == 0 {
            out.push(t.clone());
            continue;
        }
        // (1 - sin^2)^j = sum_i C(j, i) (-1)^i sin^{2i}, coefficients
        // built incrementally: C(j, i+1) = C(j, i) * (j - i) / (i + 1).
        let mut binom = Rational::one();
        for i in 0..=j {
            if i > 0 {
                binom = binom * rat_int((j - i + 1) as i64) / rat_int(i as i64);
            }
            let signed = if i % 2 == 0 { binom.clone() } else { -&binom };
            out.push(MtpTerm {
                alpha: t.alpha.scale(&signed),
                p: t.p,
                q: residual_q,
                r: t.r + 2 * i,
            });
        }
    }
    MtpExpr {
        terms: merge_terms(out),
        var: e.var.clone(),
        param: e.param.clone(),
    }
}

/// Prints one rational as a leading factor, with its sign handled by
/// the caller.
fn push_magnitude(out: &mut String, mag: &Rational, has_tail: bool) {
    if mag.is_one() && has_tail {
        return;
    }
    out.push_str(&mag.to_string());
    if has_tail {
        out.push('*');
    }
}

impl fmt::Display for MtpExpr {
    /// Renders in the input grammar, so printing and re-parsing yields
    /// the same canonical expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let param_name = self.param.as_ref().map(|p| p.name.as_str()).unwrap_or("a");
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let mut tail = String::new();
            if t.p > 0 {
                tail.push_str(&self.var);
                if t.p > 1 {
                    tail.push_str(&format!("^{}", t.p));
                }
            }
            if t.q > 0 {
                if !tail.is_empty() {
                    tail.push('*');
                }
                tail.push_str(&format!("cos({})", self.var));
                if t.q > 1 {
                    tail.push_str(&format!("^{}", t.q));
                }
            }
            if t.r > 0 {
                if !tail.is_empty() {
                    tail.push('*');
                }
                tail.push_str(&format!("sin({})", self.var));
                if t.r > 1 {
                    tail.push_str(&format!("^{}", t.r));
                }
            }
            let alpha = &t.alpha;
            if alpha.is_constant() || alpha.c0.is_zero() {
                // Single signed magnitude: either c0 or c1*a.
                let (lead, is_neg) = if alpha.is_constant() {
                    (alpha.c0.clone(), alpha.c0.is_negative())
                } else {
                    (alpha.c1.clone(), alpha.c1.is_negative())
                };
                if i == 0 {
                    if is_neg {
                        out.push('-');
                    }
                } else {
                    out.push_str(if is_neg { " - " } else { " + " });
                }
                let mag = lead.abs();
                if alpha.is_constant() {
                    if tail.is_empty() {
                        out.push_str(&mag.to_string());
                    } else {
                        push_magnitude(&mut out, &mag, true);
                        out.push_str(&tail);
                    }
                } else {
                    push_magnitude(&mut out, &mag, true);
                    out.push_str(param_name);
                    if !tail.is_empty() {
                        out.push('*');
                        out.push_str(&tail);
                    }
                }
            } else {
                // Genuinely affine: parenthesized `(c0 +/- |c1|*a)`.
                if i > 0 {
                    out.push_str(" + ");
                }
                out.push('(');
                out.push_str(&alpha.c0.to_string());
                out.push_str(if alpha.c1.is_negative() { " - " } else { " + " });
                push_magnitude(&mut out, &alpha.c1.abs(), true);
                out.push_str(param_name);
                out.push(')');
                if !tail.is_empty() {
                    out.push('*');
                    out.push_str(&tail);
                }
            }
        }
        f.write_str(&out)
    }
}
