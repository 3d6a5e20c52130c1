//! Text DSL and JSON serialization for diagonal equations.
//!
//! Grammar:
//! ```text
//! equation := sum "=" "0"
//! sum      := signed-term (("+" | "-") term)*
//! term     := [int "*"] var ["^" posint] | int
//! ```
//! Whitespace is insignificant; variables match `[a-zA-Z][a-zA-Z0-9_]*`;
//! an omitted exponent means 1, an omitted coefficient means 1. Both the
//! ASCII hyphen and the Unicode minus sign U+2212 are accepted. Output is
//! canonicalized.
//!
//! JSON schema (coefficients as decimal strings, since they may exceed
//! 64-bit): `{"terms":[{"coeff":"-2","var":"x2","exp":2}],"constant":"-1"}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::equation::{DiagonalEquation, EquationError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse problem anchored to a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    fn error(offset: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic { offset, message: message.into(), severity: Severity::Error }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

const MINUS_SIGN: char = '\u{2212}';

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Consumes a run of ASCII digits; empty result means no digits.
    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        &self.input[start..self.pos]
    }

    fn identifier(&mut self) -> Option<&'a str> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
            }
            _ => return None,
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Some(&self.input[start..self.pos])
    }
}

/// Parses the text DSL into a canonicalized equation.
pub fn parse_text(input: &str) -> Result<DiagonalEquation, ParseDiagnostic> {
    let mut cur = Cursor::new(input);
    let mut terms: Vec<Term> = Vec::new();
    let mut constant = BigInt::zero();

    cur.skip_ws();
    let mut first = true;
    loop {
        cur.skip_ws();
        // Sign of this term. The first term may omit it.
        let sign_offset = cur.pos;
        let negative = if cur.eat('-') || cur.eat(MINUS_SIGN) {
            true
        } else if cur.eat('+') {
            if first {
                return Err(ParseDiagnostic::error(sign_offset, "unexpected leading `+`"));
            }
            false
        } else if first {
            false
        } else {
            break; // no more +/- separators; expect "= 0"
        };
        cur.skip_ws();

        let term_offset = cur.pos;
        parse_term(&mut cur, negative, term_offset, &mut terms, &mut constant)?;
        first = false;
    }

    cur.skip_ws();
    let eq_offset = cur.pos;
    if !cur.eat('=') {
        return Err(ParseDiagnostic::error(eq_offset, "expected `=`"));
    }
    cur.skip_ws();
    let zero_offset = cur.pos;
    if cur.digits() != "0" {
        return Err(ParseDiagnostic::error(zero_offset, "right-hand side must be `0`"));
    }
    cur.skip_ws();
    if cur.pos != input.len() {
        return Err(ParseDiagnostic::error(cur.pos, "trailing input after `= 0`"));
    }

    if first {
        return Err(ParseDiagnostic::error(0, "empty sum before `=`"));
    }
    if terms.is_empty() {
        return Err(ParseDiagnostic::error(0, "equation must have at least one variable term"));
    }

    check_duplicate_exponents(&terms)?;
    DiagonalEquation::new(terms, constant)
        .map_err(|e| ParseDiagnostic::error(0, equation_error_text(&e)))
}

fn parse_term(
    cur: &mut Cursor<'_>,
    negative: bool,
    term_offset: usize,
    terms: &mut Vec<Term>,
    constant: &mut BigInt,
) -> Result<(), ParseDiagnostic> {
    let digits = cur.digits();
    if !digits.is_empty() {
        let mut value = BigInt::from_str(digits)
            .map_err(|_| ParseDiagnostic::error(term_offset, "invalid integer"))?;
        if negative {
            value = -value;
        }
        cur.skip_ws();
        if cur.eat('*') {
            // coefficient form: int "*" var ["^" posint]
            cur.skip_ws();
            let var_offset = cur.pos;
            let var = cur
                .identifier()
                .ok_or_else(|| ParseDiagnostic::error(var_offset, "expected variable name after `*`"))?;
            if value.is_zero() {
                return Err(ParseDiagnostic::error(term_offset, "zero coefficient"));
            }
            let exp = parse_exponent(cur)?;
            terms.push(Term { coeff: value, var: var.to_string(), exp });
        } else {
            // bare integer term joins the constant
            *constant += value;
        }
        return Ok(());
    }

    let var_offset = cur.pos;
    match cur.identifier() {
        Some(var) => {
            let coeff = if negative { BigInt::from(-1) } else { BigInt::from(1) };
            let exp = parse_exponent(cur)?;
            terms.push(Term { coeff, var: var.to_string(), exp });
            Ok(())
        }
        None => Err(ParseDiagnostic::error(var_offset, "expected a term (integer or variable)")),
    }
}

fn parse_exponent(cur: &mut Cursor<'_>) -> Result<u32, ParseDiagnostic> {
    cur.skip_ws();
    if !cur.eat('^') {
        return Ok(1);
    }
    cur.skip_ws();
    let off = cur.pos;
    let digits = cur.digits();
    if digits.is_empty() {
        return Err(ParseDiagnostic::error(off, "expected exponent after `^`"));
    }
    let exp: u32 = digits
        .parse()
        .map_err(|_| ParseDiagnostic::error(off, "exponent out of range"))?;
    if exp == 0 {
        return Err(ParseDiagnostic::error(off, "exponent must be >= 1"));
    }
    Ok(exp)
}

/// Same variable with the same exponent twice is refused rather than
/// coalesced: the intent is ambiguous.
fn check_duplicate_exponents(terms: &[Term]) -> Result<(), ParseDiagnostic> {
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if a.var == b.var && a.exp == b.exp {
                return Err(ParseDiagnostic::error(
                    0,
                    format!("variable `{}` appears twice with exponent {}", a.var, a.exp),
                ));
            }
        }
    }
    Ok(())
}

fn equation_error_text(e: &EquationError) -> String {
    e.to_string()
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    var: String,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
struct EquationJson {
    terms: Vec<TermJson>,
    constant: String,
}

/// Serializes to the on-disk JSON schema.
pub fn to_json(eq: &DiagonalEquation) -> String {
    let doc = EquationJson {
        terms: eq
            .terms()
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff.to_string(),
                var: t.var.clone(),
                exp: t.exp,
            })
            .collect(),
        constant: eq.constant().to_string(),
    };
    serde_json::to_string_pretty(&doc).expect("equation JSON serialization")
}

/// Deserializes and validates the on-disk JSON schema.
pub fn from_json(input: &str) -> Result<DiagonalEquation, ParseDiagnostic> {
    let doc: EquationJson = serde_json::from_str(input)
        .map_err(|e| ParseDiagnostic::error(0, format!("schema violation: {e}")))?;
    let mut terms = Vec::with_capacity(doc.terms.len());
    for t in &doc.terms {
        let coeff = BigInt::from_str(&t.coeff)
            .map_err(|_| ParseDiagnostic::error(0, format!("invalid coeff `{}`", t.coeff)))?;
        terms.push(Term { coeff, var: t.var.clone(), exp: t.exp });
    }
    let constant = BigInt::from_str(&doc.constant)
        .map_err(|_| ParseDiagnostic::error(0, format!("invalid constant `{}`", doc.constant)))?;
    check_duplicate_exponents(&terms)?;
    DiagonalEquation::new(terms, constant)
        .map_err(|e| ParseDiagnostic::error(0, equation_error_text(&e)))
}
