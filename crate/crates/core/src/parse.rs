//! Parser for the expression input language.
//!
//! Grammar (whitespace-insensitive; `*` is required, there is no
//! implicit multiplication):
//!
//! ```text
//! expr     := ('-'|'+')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | var ('^' nat)? |
//!             ('sin'|'cos') '(' var ')' ('^' nat)? |
//!             param ('^' nat)? | '(' expr ')'
//! rational := int ('/' posint)?
//! ```
//!
//! Parenthesized sub-expressions are expanded distributively during
//! parsing, so the result is always a flat sum of monomial terms. The
//! variable is whichever name appears as a trigonometric argument; a
//! second free name, if any, is the parameter, and it may only occur
//! affinely — `a^2` or a product of two parameter-carrying factors is
//! rejected, not silently accepted.
//!
//! The output is deliberately *not* normalized: `x - x` parses fine and
//! only [`crate::expr::normalize`] rejects it, which keeps syntax errors
//! and semantic errors separately reportable.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::expr::{AffineCoeff, MtpExpr, MtpTerm, ParamSpec};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            '/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                let value = digits.parse::<BigInt>().map_err(|_| Error::Parse {
                    pos: start,
                    msg: format!("invalid integer `{digits}`"),
                })?;
                toks.push((Tok::Int(value), start));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), start));
            }
            other => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

/// Walks the token stream once to settle which name is the variable and
/// which (if any) is the parameter, before real parsing begins.
fn classify_names(toks: &[(Tok, usize)]) -> Result<(String, Option<String>), Error> {
    let mut var: Option<(String, usize)> = None;
    let mut others: Vec<(String, usize)> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if let (Tok::Ident(name), pos) = &toks[i] {
            let called = matches!(toks.get(i + 1), Some((Tok::LParen, _)));
            if name == "sin" || name == "cos" {
                if !called {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: format!("`{name}` must be applied to the variable, like {name}(x)"),
                    });
                }
                // Record the argument as the variable when it has the
                // simple `fn(name)` shape; malformed arguments are
                // reported by the parser proper.
                if let (Some((Tok::Ident(arg), apos)), Some((Tok::RParen, _))) =
                    (toks.get(i + 2), toks.get(i + 3))
                {
                    match &var {
                        None => var = Some((arg.clone(), *apos)),
                        Some((v, _)) if v != arg => {
                            return Err(Error::Parse {
                                pos: *apos,
                                msg: format!(
                                    "a single variable is required, found both `{v}` and `{arg}`"
                                ),
                            })
                        }
                        _ => {}
                    }
                }
                i += 1;
                continue;
            }
            if called {
                return Err(Error::UnsupportedFunction {
                    name: name.clone(),
                    pos: *pos,
                });
            }
            others.push((name.clone(), *pos));
        }
        i += 1;
    }
    let var_name = match var {
        Some((v, _)) => v,
        None => {
            // No trig factor: a single free name is the variable.
            let mut distinct: Vec<&(String, usize)> = Vec::new();
            for o in &others {
                if !distinct.iter().any(|d| d.0 == o.0) {
                    distinct.push(o);
                }
            }
            match distinct.len() {
                0 => return Ok(("x".to_string(), None)),
                1 => return Ok((distinct[0].0.clone(), None)),
                _ => {
                    return Err(Error::Parse {
                        pos: distinct[1].1,
                        msg: format!(
                            "cannot tell variable from parameter between `{}` and `{}` \
                             without a trigonometric factor",
                            distinct[0].0, distinct[1].0
                        ),
                    })
                }
            }
        }
    };
    let mut param: Option<String> = None;
    for (name, pos) in &others {
        if *name == var_name {
            continue;
        }
        match &param {
            None => param = Some(name.clone()),
            Some(p) if p != name => {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: format!("at most one parameter is supported, found `{p}` and `{name}`"),
                })
            }
            _ => {}
        }
    }
    Ok((var_name, param))
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    text_len: usize,
    var: String,
    param: Option<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.text_len)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t);
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), Error> {
        let pos = self.here();
        match self.bump() {
            Some(t) if *t == tok => Ok(()),
            _ => Err(Error::Parse {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn parse_nat(&mut self) -> Result<usize, Error> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(n)) => usize::try_from(n.clone()).map_err(|_| Error::Parse {
                pos,
                msg: "exponent too large".to_string(),
            }),
            _ => Err(Error::Parse {
                pos,
                msg: "expected a natural-number exponent".to_string(),
            }),
        }
    }

    fn parse_optional_exponent(&mut self) -> Result<usize, Error> {
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            self.parse_nat()
        } else {
            Ok(1)
        }
    }

    /// expr := sign? term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<Vec<MtpTerm>, Error> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.bump();
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        let mut sum = self.parse_term()?;
        if negate {
            for t in &mut sum {
                t.alpha = t.alpha.neg();
            }
        }
        loop {
            let negate = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.bump();
            let mut next = self.parse_term()?;
            if negate {
                for t in &mut next {
                    t.alpha = t.alpha.neg();
                }
            }
            sum.extend(next);
        }
        Ok(sum)
    }

    /// term := factor ('*' factor)*
    fn parse_term(&mut self) -> Result<Vec<MtpTerm>, Error> {
        let mut product = self.parse_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let factor_pos = self.here();
            let rhs = self.parse_factor()?;
            product = mul_sums(&product, &rhs).ok_or(Error::NonlinearParam { pos: factor_pos })?;
        }
        Ok(product)
    }

    fn parse_factor(&mut self) -> Result<Vec<MtpTerm>, Error> {
        let pos = self.here();
        let tok = self.bump().cloned();
        match tok {
            Some(Tok::Int(int_part)) => {
                let mut value = Rational::from_integer(int_part);
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    let dpos = self.here();
                    match self.bump() {
                        Some(Tok::Int(den)) if !den.is_zero() => {
                            value /= Rational::from_integer(den.clone());
                        }
                        Some(Tok::Int(_)) => {
                            return Err(Error::Parse {
                                pos: dpos,
                                msg: "denominator must be a positive integer".to_string(),
                            })
                        }
                        _ => {
                            return Err(Error::Parse {
                                pos: dpos,
                                msg: "expected a denominator after `/`".to_string(),
                            })
                        }
                    }
                }
                Ok(vec![MtpTerm::new(AffineCoeff::constant(value), 0, 0, 0)])
            }
            Some(Tok::Ident(name)) if name == "sin" || name == "cos" => {
                self.expect(Tok::LParen, &format!("`(` after {name}"))?;
                let apos = self.here();
                match self.bump().cloned() {
                    Some(Tok::Ident(arg)) if arg == self.var => {}
                    _ => {
                        return Err(Error::Parse {
                            pos: apos,
                            msg: format!("argument of {name} must be the variable `{}`", self.var),
                        })
                    }
                }
                self.expect(Tok::RParen, "`)` closing the trig argument")?;
                let n = self.parse_optional_exponent()?;
                let (q, r) = if name == "cos" { (n, 0) } else { (0, n) };
                Ok(vec![MtpTerm::new(
                    AffineCoeff::constant(Rational::one()),
                    0,
                    q,
                    r,
                )])
            }
            Some(Tok::Ident(name)) if name == self.var => {
                let n = self.parse_optional_exponent()?;
                Ok(vec![MtpTerm::new(
                    AffineCoeff::constant(Rational::one()),
                    n,
                    0,
                    0,
                )])
            }
            Some(Tok::Ident(name)) if Some(&name) == self.param.as_ref() => {
                let n = self.parse_optional_exponent()?;
                match n {
                    0 => Ok(vec![MtpTerm::new(
                        AffineCoeff::constant(Rational::one()),
                        0,
                        0,
                        0,
                    )]),
                    1 => Ok(vec![MtpTerm::new(
                        AffineCoeff::new(Rational::zero(), Rational::one()),
                        0,
                        0,
                        0,
                    )]),
                    _ => Err(Error::NonlinearParam { pos }),
                }
            }
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(name)) => Err(Error::Parse {
                pos,
                msg: format!("unexpected identifier `{name}`"),
            }),
            _ => Err(Error::Parse {
                pos,
                msg: "expected a factor".to_string(),
            }),
        }
    }
}

/// Distributive product of two sums; `None` on a quadratic parameter.
fn mul_sums(a: &[MtpTerm], b: &[MtpTerm]) -> Option<Vec<MtpTerm>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for ta in a {
        for tb in b {
            let alpha = ta.alpha.mul(&tb.alpha)?;
            out.push(MtpTerm::new(
                alpha,
                ta.p + tb.p,
                ta.q + tb.q,
                ta.r + tb.r,
            ));
        }
    }
    Some(out)
}

/// Parses an expression in the input grammar. The output is flat but
/// unnormalized; run [`crate::expr::normalize`] before proving.
pub fn parse_expr(text: &str) -> Result<MtpExpr, Error> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty expression".to_string(),
        });
    }
    let (var, param) = classify_names(&toks)?;
    let mut parser = Parser {
        toks: &toks,
        pos: 0,
        text_len: text.len(),
        var: var.clone(),
        param: param.clone(),
    };
    let terms = parser.parse_expr()?;
    if parser.pos < toks.len() {
        return Err(Error::Parse {
            pos: parser.here(),
            msg: "unexpected trailing input".to_string(),
        });
    }
    Ok(MtpExpr {
        terms,
        var,
        param: param.map(|name| ParamSpec { name, range: None }),
    })
}
