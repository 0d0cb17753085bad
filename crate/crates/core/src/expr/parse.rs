//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! sum    := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' (INTEGER | atom))*
//! atom   := NUMBER | VAR | 'pi' | FUNC '(' sum ')' | '(' sum ')' | BASIS
//! NUMBER := INTEGER ('/' INTEGER)?
//! FUNC   := sin | cos | exp | recip | rho0 | rho0_<k>
//! ```
//!
//! `VAR` is `<prefix><i>` with `1 <= i <= n` (prefix `x` by default). `BASIS`
//! (`dx<i>`) is only accepted by [`parse_form_literal`], where `*` and a `^`
//! between forms mean the wedge product.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExprError, Prim, SmoothExpr};
use crate::basis::MultiIndex;
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Rat(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = text[start..i].parse().expect("digits");
                if i < bytes.len() && bytes[i] == b'/' {
                    let dstart = i + 1;
                    let mut j = dstart;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == dstart {
                        return Err(ExprError::Syntax { pos: i, msg: "expected denominator after '/'".into() });
                    }
                    let den: BigInt = text[dstart..j].parse().expect("digits");
                    if den.is_zero() {
                        return Err(ExprError::Syntax { pos: dstart, msg: "zero denominator".into() });
                    }
                    i = j;
                    out.push((Tok::Rat(Rational::new(num, den)), start));
                } else {
                    out.push((Tok::Int(num), start));
                }
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            other => {
                return Err(ExprError::Syntax { pos: i, msg: format!("unexpected character '{other}'") });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// A parsed form `Σ_I f_I dx_I` with normalized, nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FormLiteral {
    pub terms: BTreeMap<MultiIndex, SmoothExpr>,
}

impl FormLiteral {
    fn scalar(e: SmoothExpr) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex::EMPTY, e);
        FormLiteral { terms }
    }

    fn basis(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(MultiIndex::single(i), SmoothExpr::one());
        FormLiteral { terms }
    }

    /// Degree when homogeneous.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|k| k.degree());
        let first = degs.next().unwrap_or(0);
        degs.all(|d| d == first).then_some(first)
    }

    fn max_degree(&self) -> usize {
        self.terms.keys().map(|k| k.degree()).max().unwrap_or(0)
    }

    fn add(mut self, other: FormLiteral) -> Self {
        for (k, v) in other.terms {
            let e = match self.terms.remove(&k) {
                Some(old) => &old + &v,
                None => v,
            };
            self.terms.insert(k, e);
        }
        self
    }

    fn neg(self) -> Self {
        FormLiteral { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }

    fn wedge(&self, other: &FormLiteral) -> Self {
        let mut out = FormLiteral::default();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                if let Some((sign, k)) = i.wedge(*j) {
                    let mut t = a * b;
                    if sign < 0 {
                        t = -t;
                    }
                    out = out.add(FormLiteral { terms: [(k, t)].into_iter().collect() });
                }
            }
        }
        out
    }

    fn normalized(self) -> Self {
        FormLiteral {
            terms: self
                .terms
                .into_iter()
                .map(|(k, v)| (k, v.normalize()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    n: usize,
    prefix: &'a str,
    forms: bool,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn sum(&mut self) -> Result<FormLiteral, ExprError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = acc.add(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FormLiteral, ExprError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.unary()?;
            acc = acc.wedge(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FormLiteral, ExprError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<FormLiteral, ExprError> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let at = self.here();
            if let Tok::Int(k) = self.peek().clone() {
                self.bump();
                if acc.max_degree() > 0 {
                    return Err(ExprError::Syntax { pos: at, msg: "cannot raise a form to a power".into() });
                }
                let k: u32 = k
                    .try_into()
                    .map_err(|_| ExprError::Syntax { pos: at, msg: "exponent too large".into() })?;
                let base = acc.terms.remove(&MultiIndex::EMPTY).unwrap_or_else(SmoothExpr::zero);
                acc = FormLiteral::scalar(base.powi(k));
            } else {
                let rhs = self.atom()?;
                if acc.max_degree() == 0 && rhs.max_degree() == 0 {
                    return Err(ExprError::Syntax {
                        pos: at,
                        msg: "exponent must be a nonnegative integer".into(),
                    });
                }
                acc = acc.wedge(&rhs);
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<FormLiteral, ExprError> {
        let at = self.here();
        match self.bump() {
            Tok::Int(k) => Ok(FormLiteral::scalar(SmoothExpr::constant(Rational::from_integer(k)))),
            Tok::Rat(q) => Ok(FormLiteral::scalar(SmoothExpr::constant(q))),
            Tok::LParen => {
                let inner = self.sum()?;
                if *self.peek() != Tok::RParen {
                    return self.syntax("expected ')'");
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => self.identifier(&name, at),
            Tok::End => Err(ExprError::Syntax { pos: at, msg: "unexpected end of input".into() }),
            other => Err(ExprError::Syntax { pos: at, msg: format!("unexpected token {other:?}") }),
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<FormLiteral, ExprError> {
        if name == "pi" {
            return Ok(FormLiteral::scalar(SmoothExpr::pi()));
        }
        if let Some(i) = self.indexed(name, self.prefix, at)? {
            return Ok(FormLiteral::scalar(SmoothExpr::var(i)));
        }
        if self.forms {
            let basis_prefix = format!("d{}", self.prefix);
            if let Some(i) = self.indexed(name, &basis_prefix, at)? {
                return Ok(FormLiteral::basis(i));
            }
        }
        let prim = match name {
            "sin" => Prim::Sin,
            "cos" => Prim::Cos,
            "exp" => Prim::Exp,
            "recip" => Prim::Recip,
            "rho0" => Prim::Rho0(0),
            _ => match name.strip_prefix("rho0_").and_then(|k| k.parse::<u32>().ok()) {
                Some(k) => Prim::Rho0(k),
                None => return Err(ExprError::UnknownIdentifier { name: name.to_string(), pos: at }),
            },
        };
        if *self.peek() != Tok::LParen {
            return self.syntax(format!("expected '(' after {name}"));
        }
        self.bump();
        let arg = self.sum()?;
        if *self.peek() != Tok::RParen {
            return self.syntax("expected ')'");
        }
        self.bump();
        if arg.max_degree() > 0 {
            return Err(ExprError::Syntax { pos: at, msg: format!("{name} applied to a form") });
        }
        let inner = arg.terms.get(&MultiIndex::EMPTY).cloned().unwrap_or_else(SmoothExpr::zero);
        Ok(FormLiteral::scalar(SmoothExpr::apply(prim, inner)))
    }

    /// `<prefix><digits>` → 0-based index, range-checked against `n`.
    fn indexed(&self, name: &str, prefix: &str, _at: usize) -> Result<Option<usize>, ExprError> {
        let Some(digits) = name.strip_prefix(prefix) else { return Ok(None) };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Ok(None);
        }
        let index: usize = digits.parse().map_err(|_| ExprError::VariableOutOfRange { index: usize::MAX, n: self.n })?;
        if index == 0 || index > self.n {
            return Err(ExprError::VariableOutOfRange { index, n: self.n });
        }
        Ok(Some(index - 1))
    }
}

fn run(text: &str, n: usize, prefix: &str, forms: bool) -> Result<FormLiteral, ExprError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, n, prefix, forms };
    let value = p.sum()?;
    if *p.peek() != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(value)
}

/// Parse an expression over `x1..xn` into normal form.
pub fn parse(text: &str, n: usize) -> Result<SmoothExpr, ExprError> {
    parse_with_prefix(text, n, "x")
}

/// Parse with a custom variable prefix (e.g. `t` for simplex coordinates).
pub fn parse_with_prefix(text: &str, n: usize, prefix: &str) -> Result<SmoothExpr, ExprError> {
    let mut value = run(text, n, prefix, false)?;
    Ok(value
        .terms
        .remove(&MultiIndex::EMPTY)
        .map(|e| e.normalize())
        .unwrap_or_else(SmoothExpr::zero))
}

/// Parse a form literal such as `x1 * dx2 + sin(x1) * dx1^dx2`.
pub fn parse_form_literal(text: &str, n: usize) -> Result<FormLiteral, ExprError> {
    Ok(run(text, n, "x", true)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn literal_products_and_sums() {
        assert_eq!(parse("x1*x2", 2).unwrap(), (x(0) * x(1)).normalize());
        assert_eq!(parse("sin(x1)+exp(x2)", 2).unwrap(), (x(0).sin() + x(1).exp()).normalize());
    }

    #[test]
    fn out_of_range_variable() {
        assert_eq!(parse("x3", 2), Err(ExprError::VariableOutOfRange { index: 3, n: 2 }));
        assert!(matches!(parse("x0", 2), Err(ExprError::VariableOutOfRange { .. })));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("x1 + * x2", 2), Err(ExprError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("foo(x1)", 1), Err(ExprError::UnknownIdentifier { pos: 0, .. })));
        assert!(matches!(parse("(x1", 1), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("x1^x1", 1), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("1/0", 1), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse("dx1", 1), Err(ExprError::UnknownIdentifier { .. })));
    }

    #[test]
    fn rationals_powers_and_precedence() {
        let e = parse("-1/2*x1^2 + 3", 1).unwrap();
        let expect = (SmoothExpr::constant(Rational::new((-1).into(), 2.into())) * x(0).powi(2)
            + SmoothExpr::int(3))
        .normalize();
        assert_eq!(e, expect);
        assert_eq!(parse("-x1^2", 1).unwrap(), (-(x(0).powi(2))).normalize());
        assert_eq!(parse("  2 *pi* t1 ", 1).err(), Some(ExprError::UnknownIdentifier { name: "t1".into(), pos: 9 }));
        assert_eq!(
            parse_with_prefix("2*pi*t1", 1, "t").unwrap(),
            (SmoothExpr::int(2) * SmoothExpr::pi() * x(0)).normalize()
        );
    }

    #[test]
    fn form_literals() {
        let f = parse_form_literal("x1 * dx2", 2).unwrap();
        assert_eq!(f.terms.len(), 1);
        assert_eq!(f.terms[&MultiIndex::single(1)], x(0));
        let g = parse_form_literal("x1 * dx1^dx3 + x2 * dx2^dx3", 3).unwrap();
        assert_eq!(g.degree(), Some(2));
        let h = parse_form_literal("dx2^dx1 + dx1^dx2", 2).unwrap();
        assert!(h.terms.is_empty());
        assert!(parse_form_literal("dx1^2", 1).is_err());
    }
}
