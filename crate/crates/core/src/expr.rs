//! Text expressions over a KLR or VV algebra.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := [rational '*'] factor ('*' factor)*
//! factor := token ['^' int]
//! token  := e(v1,...,vm) | x<k> | s<k> | s0 | pi
//! ```
//!
//! Byte offsets in errors point into the original text.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::engine::{Algebra, Element, Gen};
use crate::error::{Error, Result};
use crate::series::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorAst {
    pub gen: Gen,
    pub power: u32,
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermAst {
    pub coeff: Rational,
    pub factors: Vec<FactorAst>,
    pub offset: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExprAst {
    pub terms: Vec<TermAst>,
}

impl ExprAst {
    /// The generator word of each term, powers expanded.
    pub fn words(&self) -> Vec<(Rational, Vec<Gen>)> {
        self.terms
            .iter()
            .map(|t| {
                let word =
                    t.factors.iter().flat_map(|f| std::iter::repeat_n(f.gen.clone(), f.power as usize)).collect();
                (t.coeff.clone(), word)
            })
            .collect()
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    alg: &'a Algebra,
}

fn err(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse { offset, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn bytes(&self) -> &[u8] {
        self.text.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<(usize, &'a str)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| (start, &self.text[start..self.pos]))
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut terms = Vec::new();
        let mut neg = self.eat(b'-');
        loop {
            let mut t = self.term()?;
            if neg {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            match self.peek() {
                None => break,
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                Some(c) => return Err(err(self.pos, format!("expected '+' or '-', found '{}'", c as char))),
            }
            self.pos += 1;
        }
        Ok(ExprAst { terms })
    }

    fn term(&mut self) -> Result<TermAst> {
        let offset = {
            self.skip_ws();
            self.pos
        };
        let mut coeff = Rational::one();
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let (at, num) = self.digits().expect("digit present");
            let num: BigInt = num.parse().map_err(|_| err(at, "bad integer"))?;
            let mut den = BigInt::one();
            if self.eat(b'/') {
                let (at, d) = self.digits().ok_or_else(|| err(self.pos, "expected denominator"))?;
                den = d.parse().map_err(|_| err(at, "bad integer"))?;
                if den.is_zero() {
                    return Err(err(at, "zero denominator"));
                }
            }
            coeff = Rational::new(num, den);
            if !self.eat(b'*') {
                return Err(err(self.pos, "expected '*' after coefficient"));
            }
        }
        let mut factors = vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(TermAst { coeff, factors, offset })
    }

    fn factor(&mut self) -> Result<FactorAst> {
        self.skip_ws();
        let offset = self.pos;
        let gen = self.token()?;
        self.alg.check_gen(&gen).map_err(|e| err(offset, e.to_string()))?;
        let mut power = 1;
        if self.eat(b'^') {
            let (at, d) = self.digits().ok_or_else(|| err(self.pos, "expected exponent"))?;
            power = d.parse().map_err(|_| err(at, "exponent too large"))?;
            if power == 0 {
                return Err(err(at, "exponent must be positive"));
            }
        }
        Ok(FactorAst { gen, power, offset })
    }

    fn index(&mut self, letter: char) -> Result<usize> {
        let (at, d) = self.digits().ok_or_else(|| err(self.pos, format!("expected index after '{letter}'")))?;
        d.parse().map_err(|_| err(at, "index too large"))
    }

    fn token(&mut self) -> Result<Gen> {
        let start = self.pos;
        let rest = &self.text[start..];
        if rest.starts_with("pi") {
            self.pos += 2;
            return Ok(Gen::S(0));
        }
        if rest.starts_with("e(") {
            self.pos += 2;
            let close = rest.find(')').ok_or_else(|| err(start, "unclosed 'e('"))?;
            let inner = &rest[2..close];
            let orbit = self.alg.descriptor().orbit().ok_or_else(|| err(start, "algebra has no vertex idempotents"))?;
            let mut seq = Vec::new();
            if !inner.trim().is_empty() {
                let mut at = start + 2;
                for piece in inner.split(',') {
                    seq.push(orbit.parse_vertex(piece).map_err(|e| err(at, e.to_string()))?);
                    at += piece.len() + 1;
                }
            }
            self.pos = start + close + 1;
            return Ok(Gen::E(seq));
        }
        match rest.as_bytes().first() {
            Some(b'x') => {
                self.pos += 1;
                let k = self.index('x')?;
                if k == 0 {
                    return Err(err(start, "index out of range: x indices start at 1"));
                }
                Ok(Gen::X(k))
            }
            Some(b's') => {
                self.pos += 1;
                let k = self.index('s')?;
                let k = u8::try_from(k).map_err(|_| err(start, "index out of range"))?;
                Ok(Gen::S(k))
            }
            Some(&c) => Err(err(start, format!("unexpected '{}'", c as char))),
            None => Err(err(start, "unexpected end of input")),
        }
    }
}

/// Parses `text` against the generators of `alg` (KLR or VV kinds).
pub fn parse_expression(text: &str, alg: &Algebra) -> Result<ExprAst> {
    if alg.hecke().is_none() {
        return Err(Error::InvalidArgument("expressions are supported for KLR and VV algebras".into()));
    }
    let mut p = Parser { text, pos: 0, alg };
    if p.peek().is_none() {
        return Err(err(0, "empty expression"));
    }
    if text.trim() == "0" {
        return Ok(ExprAst::default());
    }
    p.expr()
}

/// Normal form of a parsed expression.
pub fn evaluate(ast: &ExprAst, alg: &Algebra) -> Result<Element> {
    let mut acc = Element::zero();
    for (c, word) in ast.words() {
        acc = acc.add(&alg.normal_form(&word, &c)?);
    }
    Ok(acc)
}

/// Parses and normalizes in one step.
pub fn eval_str(text: &str, alg: &Algebra) -> Result<Element> {
    evaluate(&parse_expression(text, alg)?, alg)
}
