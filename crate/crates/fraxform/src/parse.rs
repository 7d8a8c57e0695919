//! Text grammars for atom expressions, equation problems and spectral
//! rational functions.
//!
//! Expression syntax (whitespace-insensitive, numbers are exact rationals —
//! integers, fractions `p/q` or decimals):
//!
//! ```text
//! expr    := "0" | [sign] term { ("+"|"-") term }
//! term    := [number "*"] "E(" "-" number "*t^a" ")"
//! problem := lhs "=" expr ";" init
//! lhs     := [sign] lterm { ("+"|"-") lterm }
//! lterm   := [number "*"] "y" ["^(2a)"]
//! init    := "y(0)" "=" number | "Dy(0)" "=" number
//! ```
//!
//! `a` denotes the symbolic order α, bound by the caller. `y(0)` selects the
//! sine solution route, `Dy(0)` (the order-α derivative at zero) the cosine
//! route.
//!
//! Spectral syntax is ordinary arithmetic over `s` with `+ - * / ^` and
//! parentheses, e.g. `(2*s)/((s^2+4)*(s^2+9))`. Denominators must be
//! products of constants and quadratic factors `s^2+q` with q > 0; anything
//! else is rejected with a diagnostic.
//!
//! Every rejection carries a byte-offset [`SourceSpan`] into the input, and
//! no input can cause a panic or non-termination.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::atoms::TimeExpr;
use crate::ode::OdeProblem;
use crate::order::Order;
use crate::rational::Rational;
use crate::spectral::RationalS;
use crate::transform::TransformKind;

/// Byte range of a diagnostic inside the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
}

impl std::fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.begin, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar,
    UnexpectedToken,
    UnexpectedEnd,
    UnknownIdentifier,
    NumberFormat,
    NonPositiveRate,
    UnsupportedOrder,
    MissingInitialCondition,
    MisplacedTerm,
    UnsupportedDenominator,
    DivisionByZero,
    TooDeep,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Semi,
    Eq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' | b';' | b'=' => {
                let tok = match b {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b';' => Tok::Semi,
                    _ => Tok::Eq,
                };
                i += 1;
                toks.push(Token {
                    tok,
                    span: SourceSpan {
                        begin: start,
                        end: i,
                    },
                });
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let mut value: Rational = Rational::from_integer(
                    text[start..i].parse::<BigInt>().expect("digits"),
                );
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let frac_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == frac_start {
                        return Err(ParseError::new(
                            ParseErrorKind::NumberFormat,
                            SourceSpan {
                                begin: start,
                                end: i,
                            },
                            "expected digits after the decimal point",
                        ));
                    }
                    let digits: BigInt = text[frac_start..i].parse().expect("digits");
                    let scale = num_traits::pow::pow(BigInt::from(10), i - frac_start);
                    value += Rational::new(digits, scale);
                }
                toks.push(Token {
                    tok: Tok::Num(value),
                    span: SourceSpan {
                        begin: start,
                        end: i,
                    },
                });
            }
            b'A'..=b'Z' | b'a'..=b'z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push(Token {
                    tok: Tok::Ident(text[start..i].to_string()),
                    span: SourceSpan {
                        begin: start,
                        end: i,
                    },
                });
            }
            _ => {
                // advance one whole character so the span stays on a char boundary
                let ch_len = text[start..].chars().next().map(char::len_utf8).unwrap_or(1);
                return Err(ParseError::new(
                    ParseErrorKind::UnexpectedChar,
                    SourceSpan {
                        begin: start,
                        end: start + ch_len,
                    },
                    format!("unexpected character {:?}", &text[start..start + ch_len]),
                ));
            }
        }
    }
    Ok(toks)
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
    input_len: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: lex(text)?,
            pos: 0,
            input_len: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map(|t| t.span).unwrap_or(SourceSpan {
            begin: self.input_len,
            end: self.input_len,
        })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, want: &Tok, what: &str) -> Result<SourceSpan, ParseError> {
        match self.peek() {
            Some(t) if t == want => Ok(self.next().unwrap().span),
            Some(_) => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                self.span(),
                format!("expected {what}"),
            )),
            None => Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                self.span(),
                format!("expected {what}, found end of input"),
            )),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                self.span(),
                "unexpected trailing input",
            ))
        }
    }

    /// Unsigned number, with `p/q` fractions accepted.
    fn number(&mut self) -> Result<(Rational, SourceSpan), ParseError> {
        match self.next() {
            Some(Token {
                tok: Tok::Num(n),
                span,
            }) => {
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.next();
                    match self.next() {
                        Some(Token {
                            tok: Tok::Num(d),
                            span: dspan,
                        }) => {
                            if d.is_zero() {
                                return Err(ParseError::new(
                                    ParseErrorKind::DivisionByZero,
                                    dspan,
                                    "zero denominator in fraction",
                                ));
                            }
                            Ok((
                                n / d,
                                SourceSpan {
                                    begin: span.begin,
                                    end: dspan.end,
                                },
                            ))
                        }
                        Some(t) => Err(ParseError::new(
                            ParseErrorKind::NumberFormat,
                            t.span,
                            "expected an integer after `/`",
                        )),
                        None => Err(ParseError::new(
                            ParseErrorKind::UnexpectedEnd,
                            self.span(),
                            "expected an integer after `/`",
                        )),
                    }
                } else {
                    Ok((n, span))
                }
            }
            Some(t) => Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "expected a number",
            )),
            None => Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                self.span(),
                "expected a number",
            )),
        }
    }

    /// Signed number.
    fn signed_number(&mut self) -> Result<(Rational, SourceSpan), ParseError> {
        let mut negative = false;
        let mut begin = None;
        loop {
            match self.peek() {
                Some(Tok::Minus) => {
                    let s = self.next().unwrap().span;
                    begin.get_or_insert(s.begin);
                    negative = !negative;
                }
                Some(Tok::Plus) => {
                    let s = self.next().unwrap().span;
                    begin.get_or_insert(s.begin);
                }
                _ => break,
            }
        }
        let (value, span) = self.number()?;
        let begin = begin.unwrap_or(span.begin);
        Ok((
            if negative { -value } else { value },
            SourceSpan {
                begin,
                end: span.end,
            },
        ))
    }
}

/// Parses a standalone rational literal such as `1`, `-10`, `7/2`, `0.9`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let mut c = Cursor::new(text)?;
    let (value, _) = c.signed_number()?;
    c.expect_end()?;
    Ok(value)
}

/// One atom term `coef * E(-rate*t^a)`; `coef` defaults to 1.
fn atom_term(c: &mut Cursor, alpha: &Order) -> Result<(Rational, Rational), ParseError> {
    let coef = if matches!(c.peek(), Some(Tok::Num(_))) {
        let (n, _) = c.number()?;
        c.eat(&Tok::Star, "`*` between coefficient and E(...)")?;
        n
    } else {
        Rational::from_integer(1.into())
    };
    match c.next() {
        Some(Token {
            tok: Tok::Ident(id),
            span,
        }) if id == "E" => span,
        Some(Token {
            tok: Tok::Ident(id),
            span,
        }) => {
            let msg = if id == "y" {
                "the unknown y belongs on the left-hand side".to_string()
            } else {
                format!("unknown identifier `{id}`, expected an atom E(-a*t^a)")
            };
            let kind = if id == "y" {
                ParseErrorKind::MisplacedTerm
            } else {
                ParseErrorKind::UnknownIdentifier
            };
            return Err(ParseError::new(kind, span, msg));
        }
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "expected an atom E(-a*t^a)",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                c.span(),
                "expected an atom E(-a*t^a)",
            ))
        }
    };
    c.eat(&Tok::LParen, "`(` after E")?;
    c.eat(&Tok::Minus, "`-` (atoms are decaying: E(-a*t^a))")?;
    let (rate, rate_span) = c.number()?;
    if !rate.is_positive() {
        return Err(ParseError::new(
            ParseErrorKind::NonPositiveRate,
            rate_span,
            "decay rate must be positive",
        ));
    }
    c.eat(&Tok::Star, "`*` between rate and t^a")?;
    match c.next() {
        Some(Token { tok: Tok::Ident(id), span }) if id == "t" => span,
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "expected `t`",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                c.span(),
                "expected `t`",
            ))
        }
    };
    c.eat(&Tok::Caret, "`^` in t^a")?;
    match c.next() {
        Some(Token { tok: Tok::Ident(id), span }) => {
            if id != "a" {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownIdentifier,
                    span,
                    format!("unknown identifier `{id}`: only `t^a` is a valid fractal power"),
                ));
            }
        }
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "expected the symbolic order `a`",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                c.span(),
                "expected the symbolic order `a`",
            ))
        }
    }
    c.eat(&Tok::RParen, "`)` closing the atom")?;
    let _ = alpha;
    Ok((coef, rate))
}

fn expr_body(c: &mut Cursor, alpha: &Order) -> Result<TimeExpr, ParseError> {
    // standalone zero
    if let Some(Tok::Num(n)) = c.peek() {
        if n.is_zero() {
            let save = c.pos;
            c.next();
            if c.at_end() || matches!(c.peek(), Some(Tok::Semi)) {
                return Ok(TimeExpr::zero(alpha.clone()));
            }
            c.pos = save;
        }
    }
    let mut atoms: Vec<(Rational, Rational)> = Vec::new();
    let mut negate = match c.peek() {
        Some(Tok::Minus) => {
            c.next();
            true
        }
        Some(Tok::Plus) => {
            c.next();
            false
        }
        _ => false,
    };
    loop {
        let (coef, rate) = atom_term(c, alpha)?;
        atoms.push((if negate { -coef } else { coef }, rate));
        match c.peek() {
            Some(Tok::Plus) => {
                c.next();
                negate = false;
            }
            Some(Tok::Minus) => {
                c.next();
                negate = true;
            }
            _ => break,
        }
    }
    TimeExpr::new(alpha.clone(), atoms).map_err(|e| {
        ParseError::new(
            ParseErrorKind::NonPositiveRate,
            SourceSpan {
                begin: 0,
                end: c.input_len,
            },
            e.to_string(),
        )
    })
}

/// Parses an atom expression such as `50*E(-2*t^a)` or
/// `E(-3*t^a) + 1/2*E(-1*t^a)` into canonical form. `alpha` binds the
/// symbolic order `a`.
pub fn parse_expr(text: &str, alpha: &Order) -> Result<TimeExpr, ParseError> {
    let mut c = Cursor::new(text)?;
    let e = expr_body(&mut c, alpha)?;
    c.expect_end()?;
    Ok(e)
}

/// One left-hand-side term `[num *] y [^(2a)]`; returns (coef, is_second_order).
fn y_term(c: &mut Cursor) -> Result<(Rational, bool), ParseError> {
    let coef = if matches!(c.peek(), Some(Tok::Num(_))) {
        let (n, _) = c.number()?;
        c.eat(&Tok::Star, "`*` between coefficient and y")?;
        n
    } else {
        Rational::from_integer(1.into())
    };
    match c.next() {
        Some(Token { tok: Tok::Ident(id), span }) => {
            if id == "E" {
                return Err(ParseError::new(
                    ParseErrorKind::MisplacedTerm,
                    span,
                    "forcing atoms belong on the right-hand side",
                ));
            }
            if id != "y" {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownIdentifier,
                    span,
                    format!("unknown identifier `{id}`, expected `y`"),
                ));
            }
        }
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "expected `y`",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                c.span(),
                "expected `y`",
            ))
        }
    }
    if !matches!(c.peek(), Some(Tok::Caret)) {
        return Ok((coef, false));
    }
    c.next();
    let open = c.eat(&Tok::LParen, "`(` after ^")?;
    // valid: exactly `2a`; anything else is an unsupported derivative order
    let mut end = open.end;
    let two_ok = match c.peek() {
        Some(Tok::Num(n)) if *n == Rational::from_integer(2.into()) => {
            end = c.span().end;
            c.next();
            true
        }
        _ => false,
    };
    let a_ok = match c.peek() {
        Some(Tok::Ident(id)) if id == "a" => {
            end = c.span().end;
            c.next();
            true
        }
        _ => false,
    };
    if !(two_ok && a_ok) {
        // swallow tokens up to the closing paren to widen the diagnostic
        while !c.at_end() && !matches!(c.peek(), Some(Tok::RParen)) {
            end = c.span().end;
            c.next();
        }
        return Err(ParseError::new(
            ParseErrorKind::UnsupportedOrder,
            SourceSpan {
                begin: open.begin,
                end,
            },
            "only the derivative order `2a` is supported",
        ));
    }
    c.eat(&Tok::RParen, "`)` closing the derivative order")?;
    Ok((coef, true))
}

/// Parses a problem `c2*y^(2a) + c0*y = forcing; y(0)=v` (or `Dy(0)=v` for
/// the cosine route) into a normalized [`OdeProblem`].
pub fn parse_problem(text: &str, alpha: &Order) -> Result<OdeProblem, ParseError> {
    let mut c = Cursor::new(text)?;
    let mut c2 = Rational::zero();
    let mut c0 = Rational::zero();
    let mut saw_second_order = false;
    let mut negate = match c.peek() {
        Some(Tok::Minus) => {
            c.next();
            true
        }
        Some(Tok::Plus) => {
            c.next();
            false
        }
        _ => false,
    };
    let lhs_begin = c.span().begin;
    loop {
        let (coef, second) = y_term(&mut c)?;
        let signed = if negate { -coef } else { coef };
        if second {
            saw_second_order = true;
            c2 += signed;
        } else {
            c0 += signed;
        }
        match c.peek() {
            Some(Tok::Plus) => {
                c.next();
                negate = false;
            }
            Some(Tok::Minus) => {
                c.next();
                negate = true;
            }
            _ => break,
        }
    }
    let lhs_end = c.span().begin;
    c.eat(&Tok::Eq, "`=`")?;
    let forcing = expr_body(&mut c, alpha)?;
    if c.at_end() {
        return Err(ParseError::new(
            ParseErrorKind::MissingInitialCondition,
            c.span(),
            "missing initial condition, expected `; y(0)=...` or `; Dy(0)=...`",
        ));
    }
    c.eat(&Tok::Semi, "`;` before the initial condition")?;
    let route = match c.next() {
        Some(Token { tok: Tok::Ident(id), span }) => match id.as_str() {
            "y" => TransformKind::Sine,
            "Dy" => TransformKind::Cosine,
            _ => {
                return Err(ParseError::new(
                    ParseErrorKind::UnknownIdentifier,
                    span,
                    format!("unknown identifier `{id}`, expected `y(0)` or `Dy(0)`"),
                ))
            }
        },
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::MissingInitialCondition,
                t.span,
                "expected `y(0)=...` or `Dy(0)=...`",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::MissingInitialCondition,
                c.span(),
                "expected `y(0)=...` or `Dy(0)=...`",
            ))
        }
    };
    c.eat(&Tok::LParen, "`(` in the initial condition")?;
    match c.next() {
        Some(Token { tok: Tok::Num(n), span }) if n.is_zero() => span,
        Some(t) => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken,
                t.span,
                "initial conditions are given at 0",
            ))
        }
        None => {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedEnd,
                c.span(),
                "initial conditions are given at 0",
            ))
        }
    };
    c.eat(&Tok::RParen, "`)` in the initial condition")?;
    c.eat(&Tok::Eq, "`=` in the initial condition")?;
    let (initial, _) = c.signed_number()?;
    c.expect_end()?;
    if !saw_second_order || c2.is_zero() {
        return Err(ParseError::new(
            ParseErrorKind::UnsupportedOrder,
            SourceSpan {
                begin: lhs_begin,
                end: lhs_end,
            },
            "the equation must contain a y^(2a) term with non-zero coefficient",
        ));
    }
    Ok(OdeProblem {
        alpha: alpha.clone(),
        c2,
        c0,
        forcing,
        initial,
        route,
    })
}

// ---------------------------------------------------------------------------
// Spectral expressions
// ---------------------------------------------------------------------------

const MAX_DEPTH: usize = 64;
const MAX_POWER: u32 = 30;

#[derive(Debug)]
enum SNode {
    Num(Rational),
    Var,
    Neg(Box<SNode>),
    Add(Box<SNode>, Box<SNode>),
    Sub(Box<SNode>, Box<SNode>),
    Mul(Box<SNode>, Box<SNode>),
    Div(Box<SNode>, Box<SNode>, SourceSpan),
    Pow(Box<SNode>, u32),
}

fn s_expr(c: &mut Cursor, depth: usize) -> Result<SNode, ParseError> {
    if depth > MAX_DEPTH {
        return Err(ParseError::new(
            ParseErrorKind::TooDeep,
            c.span(),
            "expression nests too deeply",
        ));
    }
    let mut node = s_mul(c, depth + 1)?;
    loop {
        match c.peek() {
            Some(Tok::Plus) => {
                c.next();
                node = SNode::Add(Box::new(node), Box::new(s_mul(c, depth + 1)?));
            }
            Some(Tok::Minus) => {
                c.next();
                node = SNode::Sub(Box::new(node), Box::new(s_mul(c, depth + 1)?));
            }
            _ => return Ok(node),
        }
    }
}

fn s_mul(c: &mut Cursor, depth: usize) -> Result<SNode, ParseError> {
    if depth > MAX_DEPTH {
        return Err(ParseError::new(
            ParseErrorKind::TooDeep,
            c.span(),
            "expression nests too deeply",
        ));
    }
    let mut node = s_unary(c, depth + 1)?;
    loop {
        match c.peek() {
            Some(Tok::Star) => {
                c.next();
                node = SNode::Mul(Box::new(node), Box::new(s_unary(c, depth + 1)?));
            }
            Some(Tok::Slash) => {
                let span = c.span();
                c.next();
                let rhs_begin = c.span();
                let rhs = s_unary(c, depth + 1)?;
                let _ = span;
                node = SNode::Div(Box::new(node), Box::new(rhs), rhs_begin);
            }
            _ => return Ok(node),
        }
    }
}

fn s_unary(c: &mut Cursor, depth: usize) -> Result<SNode, ParseError> {
    if depth > MAX_DEPTH {
        return Err(ParseError::new(
            ParseErrorKind::TooDeep,
            c.span(),
            "expression nests too deeply",
        ));
    }
    match c.peek() {
        Some(Tok::Minus) => {
            c.next();
            Ok(SNode::Neg(Box::new(s_unary(c, depth + 1)?)))
        }
        Some(Tok::Plus) => {
            c.next();
            s_unary(c, depth + 1)
        }
        _ => s_power(c, depth + 1),
    }
}

fn s_power(c: &mut Cursor, depth: usize) -> Result<SNode, ParseError> {
    let base = s_primary(c, depth + 1)?;
    if !matches!(c.peek(), Some(Tok::Caret)) {
        return Ok(base);
    }
    c.next();
    match c.next() {
        Some(Token { tok: Tok::Num(n), span }) => {
            let exp = n
                .to_integer()
                .to_u32()
                .filter(|_| n.is_integer())
                .filter(|e| *e <= MAX_POWER)
                .ok_or_else(|| {
                    ParseError::new(
                        ParseErrorKind::NumberFormat,
                        span,
                        format!("exponent must be an integer between 0 and {MAX_POWER}"),
                    )
                })?;
            Ok(SNode::Pow(Box::new(base), exp))
        }
        Some(t) => Err(ParseError::new(
            ParseErrorKind::UnexpectedToken,
            t.span,
            "expected an integer exponent",
        )),
        None => Err(ParseError::new(
            ParseErrorKind::UnexpectedEnd,
            c.span(),
            "expected an integer exponent",
        )),
    }
}

fn s_primary(c: &mut Cursor, depth: usize) -> Result<SNode, ParseError> {
    if depth > MAX_DEPTH {
        return Err(ParseError::new(
            ParseErrorKind::TooDeep,
            c.span(),
            "expression nests too deeply",
        ));
    }
    match c.next() {
        Some(Token { tok: Tok::Num(n), .. }) => Ok(SNode::Num(n)),
        Some(Token { tok: Tok::Ident(id), span }) => {
            if id == "s" {
                Ok(SNode::Var)
            } else {
                Err(ParseError::new(
                    ParseErrorKind::UnknownIdentifier,
                    span,
                    format!("unknown identifier `{id}`, expected `s`"),
                ))
            }
        }
        Some(Token { tok: Tok::LParen, .. }) => {
            let inner = s_expr(c, depth + 1)?;
            c.eat(&Tok::RParen, "`)`")?;
            Ok(inner)
        }
        Some(t) => Err(ParseError::new(
            ParseErrorKind::UnexpectedToken,
            t.span,
            "expected a number, `s` or `(`",
        )),
        None => Err(ParseError::new(
            ParseErrorKind::UnexpectedEnd,
            c.span(),
            "expected a number, `s` or `(`",
        )),
    }
}

/// Collects a syntactic denominator as scalar · Π (s²+qᵢ)^{mᵢ}.
fn collect_den(node: &SNode, span: SourceSpan) -> Result<(Rational, Vec<(Rational, u32)>), ParseError> {
    match node {
        SNode::Num(n) => {
            if n.is_zero() {
                Err(ParseError::new(
                    ParseErrorKind::DivisionByZero,
                    span,
                    "division by zero",
                ))
            } else {
                Ok((n.clone(), Vec::new()))
            }
        }
        SNode::Neg(inner) => {
            let (s, f) = collect_den(inner, span)?;
            Ok((-s, f))
        }
        SNode::Mul(a, b) => {
            let (sa, mut fa) = collect_den(a, span)?;
            let (sb, fb) = collect_den(b, span)?;
            fa.extend(fb);
            Ok((sa * sb, fa))
        }
        SNode::Pow(inner, k) => {
            let (s, f) = collect_den(inner, span)?;
            if *k == 0 {
                return Ok((Rational::from_integer(1.into()), Vec::new()));
            }
            let mut scalar = Rational::from_integer(1.into());
            for _ in 0..*k {
                scalar *= &s;
            }
            let factors = f
                .into_iter()
                .map(|(q, m)| (q, m * k))
                .collect();
            Ok((scalar, factors))
        }
        // a sum must be a bare quadratic factor s^2 + q (up to scalar tweaks
        // handled by evaluating and pattern-matching the polynomial)
        other => {
            let value = eval_snode(other, span)?;
            if !value.factors().is_empty() {
                return Err(ParseError::new(
                    ParseErrorKind::UnsupportedDenominator,
                    span,
                    "denominator must be a product of constants and factors s^2+q",
                ));
            }
            let poly = value.num();
            match poly.degree() {
                Some(0) => Ok((poly.coeffs()[0].clone(), Vec::new())),
                Some(2) if poly.coeffs()[1].is_zero() => {
                    let lead = poly.coeffs()[2].clone();
                    let q = &poly.coeffs()[0] / &lead;
                    if q.is_positive() {
                        Ok((lead, vec![(q, 1)]))
                    } else {
                        Err(ParseError::new(
                            ParseErrorKind::UnsupportedDenominator,
                            span,
                            "quadratic factors must have the shape s^2+q with q > 0",
                        ))
                    }
                }
                _ => Err(ParseError::new(
                    ParseErrorKind::UnsupportedDenominator,
                    span,
                    "denominator must be a product of constants and factors s^2+q",
                )),
            }
        }
    }
}

fn eval_snode(node: &SNode, span: SourceSpan) -> Result<RationalS, ParseError> {
    use crate::spectral::PolyS;
    match node {
        SNode::Num(n) => Ok(RationalS::from_poly(PolyS::constant(n.clone()))),
        SNode::Var => Ok(RationalS::from_poly(PolyS::monomial(
            Rational::from_integer(1.into()),
            1,
        ))),
        SNode::Neg(inner) => Ok(eval_snode(inner, span)?.neg()),
        SNode::Add(a, b) => Ok(eval_snode(a, span)?.add(&eval_snode(b, span)?)),
        SNode::Sub(a, b) => Ok(eval_snode(a, span)?.sub(&eval_snode(b, span)?)),
        SNode::Mul(a, b) => {
            let va = eval_snode(a, span)?;
            let vb = eval_snode(b, span)?;
            let mut factors: Vec<(Rational, u32)> = va
                .factors()
                .iter()
                .map(|f| (f.q.clone(), f.multiplicity))
                .collect();
            factors.extend(vb.factors().iter().map(|f| (f.q.clone(), f.multiplicity)));
            RationalS::new(va.num().mul(vb.num()), factors).map_err(|e| {
                ParseError::new(ParseErrorKind::UnsupportedDenominator, span, e.to_string())
            })
        }
        SNode::Div(a, b, rhs_span) => {
            let va = eval_snode(a, *rhs_span)?;
            let (scalar, new_factors) = collect_den(b, *rhs_span)?;
            let mut factors: Vec<(Rational, u32)> = va
                .factors()
                .iter()
                .map(|f| (f.q.clone(), f.multiplicity))
                .collect();
            factors.extend(new_factors);
            RationalS::new(va.num().scale(&scalar.recip()), factors).map_err(|e| {
                ParseError::new(
                    ParseErrorKind::UnsupportedDenominator,
                    *rhs_span,
                    e.to_string(),
                )
            })
        }
        SNode::Pow(inner, k) => {
            let v = eval_snode(inner, span)?;
            let mut acc = RationalS::from_poly(PolyS::constant(Rational::from_integer(1.into())));
            for _ in 0..*k {
                let mut factors: Vec<(Rational, u32)> = acc
                    .factors()
                    .iter()
                    .map(|f| (f.q.clone(), f.multiplicity))
                    .collect();
                factors.extend(v.factors().iter().map(|f| (f.q.clone(), f.multiplicity)));
                acc = RationalS::new(acc.num().mul(v.num()), factors).map_err(|e| {
                    ParseError::new(ParseErrorKind::UnsupportedDenominator, span, e.to_string())
                })?;
            }
            Ok(acc)
        }
    }
}

/// Parses a spectral rational function such as `(2*s)/(s^2+4)` or
/// `22*s/(s^2+9) - 20*s/(s^2+4)`.
pub fn parse_spectral(text: &str) -> Result<RationalS, ParseError> {
    let mut c = Cursor::new(text)?;
    let whole = SourceSpan {
        begin: 0,
        end: text.len(),
    };
    let node = s_expr(&mut c, 0)?;
    c.expect_end()?;
    eval_snode(&node, whole)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::spectral::PolyS;

    fn alpha() -> Order {
        Order::new(ratio(9, 10)).unwrap()
    }

    #[test]
    fn parses_forcing_atom() {
        let e = parse_expr("50*E(-2*t^a)", &alpha()).unwrap();
        assert_eq!(e.atoms().len(), 1);
        assert_eq!(e.atoms()[0].coef, rat(50));
        assert_eq!(e.atoms()[0].rate, rat(2));
    }

    #[test]
    fn merges_duplicate_atoms() {
        let e = parse_expr("E(-3*t^a) + E(-3*t^a)", &alpha()).unwrap();
        assert_eq!(e.atoms().len(), 1);
        assert_eq!(e.atoms()[0].coef, rat(2));
        assert_eq!(e.atoms()[0].rate, rat(3));
    }

    #[test]
    fn rejects_unknown_power_identifier() {
        let err = parse_expr("E(-2*t^b)", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier);
        assert_eq!(err.span, SourceSpan { begin: 7, end: 8 });
    }

    #[test]
    fn rejects_zero_rate() {
        let err = parse_expr("E(-0*t^a)", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NonPositiveRate);
    }

    #[test]
    fn parses_zero_and_signs_and_fractions() {
        assert!(parse_expr("0", &alpha()).unwrap().is_zero());
        let e = parse_expr("-E(-1*t^a) + 1/2*E(-2*t^a)", &alpha()).unwrap();
        assert_eq!(e.atoms()[0].coef, rat(-1));
        assert_eq!(e.atoms()[1].coef, ratio(1, 2));
        let e = parse_expr("2.5*E(-0.5*t^a)", &alpha()).unwrap();
        assert_eq!(e.atoms()[0].coef, ratio(5, 2));
        assert_eq!(e.atoms()[0].rate, ratio(1, 2));
    }

    #[test]
    fn parses_flagship_problem() {
        let p = parse_problem("y^(2a) - 9*y = 50*E(-2*t^a); y(0)=1", &alpha()).unwrap();
        assert_eq!(p.c2, rat(1));
        assert_eq!(p.c0, rat(-9));
        assert_eq!(p.forcing.atoms()[0].coef, rat(50));
        assert_eq!(p.forcing.atoms()[0].rate, rat(2));
        assert_eq!(p.initial, rat(1));
        assert_eq!(p.route, TransformKind::Sine);
    }

    #[test]
    fn parses_normalization_and_zero_forcing() {
        let p = parse_problem("2*y^(2a) - 8*y = 0; y(0)=3", &alpha()).unwrap();
        assert_eq!(p.c2, rat(2));
        assert_eq!(p.c0, rat(-8));
        assert!(p.forcing.is_zero());
        assert_eq!(p.initial, rat(3));
    }

    #[test]
    fn cosine_route_via_dy() {
        let p = parse_problem("y^(2a) - 4*y = 0; Dy(0)=-6", &alpha()).unwrap();
        assert_eq!(p.route, TransformKind::Cosine);
        assert_eq!(p.initial, rat(-6));
    }

    #[test]
    fn rejects_unsupported_order() {
        let err = parse_problem("y^(a) - y = 0; y(0)=1", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedOrder);
        let err = parse_problem("y^(3a) - y = 0; y(0)=1", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedOrder);
        // an equation without any y^(2a) term is out of scope too
        let err = parse_problem("y = 0; y(0)=0", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnsupportedOrder);
    }

    #[test]
    fn rejects_missing_initial_condition() {
        let err = parse_problem("y^(2a) - 9*y = 0", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingInitialCondition);
    }

    #[test]
    fn rejects_misplaced_terms() {
        let err = parse_problem("y^(2a) - 9*y = 2*y; y(0)=1", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MisplacedTerm);
        let err = parse_problem("E(-2*t^a) - 9*y = 0; y(0)=1", &alpha()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MisplacedTerm);
    }

    #[test]
    fn signed_initial_data() {
        let p = parse_problem("y^(2a) - 9*y = 0; y(0)=-10", &alpha()).unwrap();
        assert_eq!(p.initial, rat(-10));
        let p = parse_problem("y^(2a) - 9*y = 0; y(0)=7/2", &alpha()).unwrap();
        assert_eq!(p.initial, ratio(7, 2));
    }

    #[test]
    fn spans_stay_inside_input() {
        for text in [
            "E(",
            "E(-2*t^",
            "y^(2a) - = 0; y(0)=1",
            "@",
            "E(-2*t^a) +",
            "((((((",
            "1/",
        ] {
            match parse_expr(text, &alpha()) {
                Ok(_) => {}
                Err(e) => {
                    assert!(e.span.begin <= e.span.end);
                    assert!(e.span.end <= text.len(), "span out of bounds for {text:?}");
                }
            }
        }
    }

    #[test]
    fn parse_rational_literals() {
        assert_eq!(parse_rational("1").unwrap(), rat(1));
        assert_eq!(parse_rational("-10").unwrap(), rat(-10));
        assert_eq!(parse_rational("7/2").unwrap(), ratio(7, 2));
        assert_eq!(parse_rational("0.9").unwrap(), ratio(9, 10));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn spectral_quotients() {
        let v = parse_spectral("(2*s)/(s^2+4)").unwrap();
        let expected =
            RationalS::new(PolyS::monomial(rat(2), 1), vec![(rat(4), 1)]).unwrap();
        assert_eq!(v, expected);
        let v = parse_spectral("(2*s)/((s^2+4)*(s^2+9))").unwrap();
        let expected = RationalS::new(
            PolyS::monomial(rat(2), 1),
            vec![(rat(4), 1), (rat(9), 1)],
        )
        .unwrap();
        assert_eq!(v, expected);
        // precedence: 22*s/(s^2+9) - 20*s/(s^2+4)
        let v = parse_spectral("22*s/(s^2+9) - 20*s/(s^2+4)").unwrap();
        let a = RationalS::new(PolyS::monomial(rat(22), 1), vec![(rat(9), 1)]).unwrap();
        let b = RationalS::new(PolyS::monomial(rat(20), 1), vec![(rat(4), 1)]).unwrap();
        assert_eq!(v, a.sub(&b));
        // scalar denominators and implicit fractions
        let v = parse_spectral("1/(5*(s^2+4))").unwrap();
        let expected =
            RationalS::new(PolyS::constant(ratio(1, 5)), vec![(rat(4), 1)]).unwrap();
        assert_eq!(v, expected);
    }

    #[test]
    fn spectral_rejections() {
        assert_eq!(
            parse_spectral("1/(s+1)").unwrap_err().kind,
            ParseErrorKind::UnsupportedDenominator
        );
        assert_eq!(
            parse_spectral("1/s").unwrap_err().kind,
            ParseErrorKind::UnsupportedDenominator
        );
        assert_eq!(
            parse_spectral("1/(s^2-4)").unwrap_err().kind,
            ParseErrorKind::UnsupportedDenominator
        );
        assert_eq!(
            parse_spectral("1/0").unwrap_err().kind,
            ParseErrorKind::DivisionByZero
        );
        assert_eq!(
            parse_spectral("s^99").unwrap_err().kind,
            ParseErrorKind::NumberFormat
        );
    }

    #[test]
    fn rendered_expressions_reparse_identically() {
        let e = TimeExpr::new(
            alpha(),
            [(ratio(-7, 3), rat(1)), (rat(4), ratio(5, 2))],
        )
        .unwrap();
        let text = e.to_string();
        let back = parse_expr(&text, &alpha()).unwrap();
        assert_eq!(back, e);
    }
}
