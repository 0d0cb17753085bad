//! Symbolic smooth expressions: the free C∞-ring on `n` generators.
//!
//! An expression is built from the coordinate functions `x1..xn`, exact
//! rational constants, the transcendental constant `pi` and a closed library
//! of smooth primitives. Every primitive has a symbolic derivative and an
//! evaluator, so the tree is closed under composition and partial
//! differentiation.
//!
//! Normal forms canonicalize the polynomial structure over "atoms"
//! (variables, `pi`, and primitive applications with normalized arguments);
//! transcendental subtrees are compared structurally.

mod diff;
mod eval;
mod normal;
mod parse;
mod print;

pub use eval::rho0_derivative;
pub use parse::{parse, parse_form_literal, parse_with_prefix, FormLiteral};
pub use print::ExprDisplay;

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{Monomial, Polynomial};
use crate::Rational;

/// Unary smooth primitives. `Rho0(k)` is the `k`-th derivative of the smooth step.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Prim {
    Sin,
    Cos,
    Exp,
    Recip,
    Rho0(u32),
}

impl Prim {
    pub fn name(self) -> String {
        match self {
            Prim::Sin => "sin".into(),
            Prim::Cos => "cos".into(),
            Prim::Exp => "exp".into(),
            Prim::Recip => "recip".into(),
            Prim::Rho0(0) => "rho0".into(),
            Prim::Rho0(k) => format!("rho0_{k}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Node {
    Const(Rational),
    Pi,
    /// 0-based coordinate index.
    Var(usize),
    Add(Vec<SmoothExpr>),
    Mul(Vec<SmoothExpr>),
    Neg(SmoothExpr),
    Pow(SmoothExpr, u32),
    /// Application of a unary primitive. `recip` carries a nonvanishing
    /// assumption on its argument that is only checked at evaluation time.
    Apply(Prim, SmoothExpr),
    /// An `m`-ary expression (over `u1..um`) applied to `m` arguments.
    Compose(SmoothExpr, Vec<SmoothExpr>),
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SmoothExpr(Arc<Node>);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("variable index {index} out of range for {n} variables")]
    VariableOutOfRange { index: usize, n: usize },
    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("partial derivative index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("division by zero: recip argument vanishes at {point:?}")]
    DivisionByZero { point: Vec<f64> },
    #[error("dimension mismatch: expression needs {needed} coordinates, point has {got}")]
    DimensionMismatch { needed: usize, got: usize },
}

impl SmoothExpr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn from_node(n: Node) -> Self {
        SmoothExpr(Arc::new(n))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_node(Node::Const(c))
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn pi() -> Self {
        Self::from_node(Node::Pi)
    }

    /// Coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(i: usize) -> Self {
        Self::from_node(Node::Var(i))
    }

    pub fn add_all(terms: Vec<SmoothExpr>) -> Self {
        Self::from_node(Node::Add(terms))
    }

    pub fn mul_all(factors: Vec<SmoothExpr>) -> Self {
        Self::from_node(Node::Mul(factors))
    }

    pub fn powi(&self, k: u32) -> Self {
        Self::from_node(Node::Pow(self.clone(), k))
    }

    pub fn apply(p: Prim, arg: SmoothExpr) -> Self {
        Self::from_node(Node::Apply(p, arg))
    }

    pub fn sin(&self) -> Self {
        Self::apply(Prim::Sin, self.clone())
    }

    pub fn cos(&self) -> Self {
        Self::apply(Prim::Cos, self.clone())
    }

    pub fn exp(&self) -> Self {
        Self::apply(Prim::Exp, self.clone())
    }

    pub fn recip(&self) -> Self {
        Self::apply(Prim::Recip, self.clone())
    }

    pub fn rho0(&self) -> Self {
        Self::apply(Prim::Rho0(0), self.clone())
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(One::is_one)
    }

    /// Largest 0-based variable index occurring in the expression.
    pub fn max_var(&self) -> Option<usize> {
        match self.node() {
            Node::Const(_) | Node::Pi => None,
            Node::Var(i) => Some(*i),
            Node::Add(v) | Node::Mul(v) => v.iter().filter_map(SmoothExpr::max_var).max(),
            Node::Neg(a) | Node::Pow(a, _) | Node::Apply(_, a) => a.max_var(),
            // variables of the outer expression are bound by the arguments
            Node::Compose(_, args) => args.iter().filter_map(SmoothExpr::max_var).max(),
        }
    }

    /// Number of coordinates needed to evaluate this expression.
    pub fn arity(&self) -> usize {
        self.max_var().map_or(0, |i| i + 1)
    }

    pub fn check_arity(&self, n: usize) -> Result<(), ExprError> {
        match self.max_var() {
            Some(i) if i >= n => Err(ExprError::VariableOutOfRange { index: i + 1, n }),
            _ => {
                if let Some((expected, got)) = self.compose_arity_error() {
                    return Err(ExprError::ArityMismatch { expected, got });
                }
                Ok(())
            }
        }
    }

    fn compose_arity_error(&self) -> Option<(usize, usize)> {
        match self.node() {
            Node::Const(_) | Node::Pi | Node::Var(_) => None,
            Node::Add(v) | Node::Mul(v) => v.iter().find_map(SmoothExpr::compose_arity_error),
            Node::Neg(a) | Node::Pow(a, _) | Node::Apply(_, a) => a.compose_arity_error(),
            Node::Compose(g, args) => {
                if g.arity() > args.len() {
                    Some((g.arity(), args.len()))
                } else {
                    g.compose_arity_error()
                        .or_else(|| args.iter().find_map(SmoothExpr::compose_arity_error))
                }
            }
        }
    }

    /// Replace each variable `x_{i+1}` with `args[i]` (eager composition).
    pub fn substitute(&self, args: &[SmoothExpr]) -> SmoothExpr {
        match self.node() {
            Node::Const(_) | Node::Pi => self.clone(),
            Node::Var(i) => args[*i].clone(),
            Node::Add(v) => Self::add_all(v.iter().map(|t| t.substitute(args)).collect()),
            Node::Mul(v) => Self::mul_all(v.iter().map(|t| t.substitute(args)).collect()),
            Node::Neg(a) => -a.substitute(args),
            Node::Pow(a, k) => a.substitute(args).powi(*k),
            Node::Apply(p, a) => Self::apply(*p, a.substitute(args)),
            Node::Compose(g, inner) => Self::from_node(Node::Compose(
                g.clone(),
                inner.iter().map(|t| t.substitute(args)).collect(),
            )),
        }
    }

    /// Lazy composition node `g(args)`, without normalizing.
    pub fn compose_node(g: &SmoothExpr, args: Vec<SmoothExpr>) -> SmoothExpr {
        Self::from_node(Node::Compose(g.clone(), args))
    }

    /// Whether every atom is a variable or constant (no `pi`, no primitives).
    pub fn is_polynomial(&self) -> bool {
        match self.node() {
            Node::Const(_) | Node::Var(_) => true,
            Node::Pi | Node::Apply(..) => false,
            Node::Add(v) | Node::Mul(v) => v.iter().all(SmoothExpr::is_polynomial),
            Node::Neg(a) | Node::Pow(a, _) => a.is_polynomial(),
            Node::Compose(g, args) => g.is_polynomial() && args.iter().all(SmoothExpr::is_polynomial),
        }
    }

    /// Exact polynomial in `nvars` variables, when the expression is polynomial.
    pub fn to_poly(&self, nvars: usize) -> Option<Polynomial<Rational>> {
        Some(match self.node() {
            Node::Const(c) => Polynomial::constant(nvars, c.clone()),
            Node::Var(i) => {
                if *i >= nvars {
                    return None;
                }
                Polynomial::var(nvars, *i)
            }
            Node::Pi | Node::Apply(..) => return None,
            Node::Add(v) => {
                let mut acc = Polynomial::zero(nvars);
                for t in v {
                    acc = acc.add(&t.to_poly(nvars)?);
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = Polynomial::one(nvars);
                for t in v {
                    acc = acc.mul(&t.to_poly(nvars)?);
                }
                acc
            }
            Node::Neg(a) => a.to_poly(nvars)?.neg(),
            Node::Pow(a, k) => a.to_poly(nvars)?.pow(*k),
            Node::Compose(g, args) => {
                let inner: Option<Vec<_>> = args.iter().map(|a| a.to_poly(nvars)).collect();
                let inner = inner?;
                let gp = g.to_poly(args.len())?;
                compose_poly(&gp, &inner, nvars)
            }
        })
    }

    /// Normal-form expression of a polynomial.
    pub fn from_poly(p: &Polynomial<Rational>) -> SmoothExpr {
        let terms: Vec<SmoothExpr> = p
            .terms()
            .map(|(m, c)| {
                let mut factors = vec![SmoothExpr::constant(c.clone())];
                for (i, &e) in m.exponents().iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(SmoothExpr::var(i)),
                        _ => factors.push(SmoothExpr::var(i).powi(e)),
                    }
                }
                SmoothExpr::mul_all(factors)
            })
            .collect();
        SmoothExpr::add_all(terms).normalize()
    }

    pub fn display_with<'a>(&'a self, prefix: &'a str) -> ExprDisplay<'a> {
        ExprDisplay::new(self, prefix)
    }
}

fn compose_poly(
    g: &Polynomial<Rational>,
    args: &[Polynomial<Rational>],
    nvars: usize,
) -> Polynomial<Rational> {
    let mut acc = Polynomial::zero(nvars);
    for (m, c) in g.terms() {
        let mut t = Polynomial::constant(nvars, c.clone());
        for (a, &e) in args.iter().zip(m.exponents()) {
            if e > 0 {
                t = t.mul(&a.pow(e));
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Compose `g` (over `m` variables) with `args` and normalize.
pub fn compose(g: &SmoothExpr, args: &[SmoothExpr]) -> Result<SmoothExpr, ExprError> {
    if g.arity() > args.len() {
        return Err(ExprError::ArityMismatch { expected: g.arity(), got: args.len() });
    }
    Ok(g.substitute(args).normalize())
}

/// Monomial `x^e` as an expression (helper for building polynomial data).
pub fn monomial_expr(m: &Monomial) -> SmoothExpr {
    let mut factors = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(SmoothExpr::var(i)),
            _ => factors.push(SmoothExpr::var(i).powi(e)),
        }
    }
    match factors.len() {
        0 => SmoothExpr::one(),
        1 => factors.pop().expect("one factor"),
        _ => SmoothExpr::mul_all(factors),
    }
}

impl fmt::Display for SmoothExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

impl fmt::Debug for SmoothExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothExpr({self})")
    }
}

impl ops::Add for &SmoothExpr {
    type Output = SmoothExpr;
    fn add(self, rhs: &SmoothExpr) -> SmoothExpr {
        SmoothExpr::add_all(vec![self.clone(), rhs.clone()])
    }
}

impl ops::Sub for &SmoothExpr {
    type Output = SmoothExpr;
    fn sub(self, rhs: &SmoothExpr) -> SmoothExpr {
        SmoothExpr::add_all(vec![self.clone(), -rhs.clone()])
    }
}

impl ops::Mul for &SmoothExpr {
    type Output = SmoothExpr;
    fn mul(self, rhs: &SmoothExpr) -> SmoothExpr {
        SmoothExpr::mul_all(vec![self.clone(), rhs.clone()])
    }
}

impl ops::Neg for SmoothExpr {
    type Output = SmoothExpr;
    fn neg(self) -> SmoothExpr {
        SmoothExpr::from_node(Node::Neg(self))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl ops::$tr for SmoothExpr {
            type Output = SmoothExpr;
            fn $m(self, rhs: SmoothExpr) -> SmoothExpr {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn substitution_example() {
        // g = u1*u2, args = [x1+x2, x1]
        let g = x(0) * x(1);
        let r = compose(&g, &[x(0) + x(1), x(0)]).unwrap();
        assert_eq!(r, ((x(0) + x(1)) * x(0)).normalize());
    }

    #[test]
    fn nullary_operation_is_constant() {
        let g = SmoothExpr::int(7);
        assert_eq!(compose(&g, &[]).unwrap(), SmoothExpr::int(7));
    }

    #[test]
    fn arity_checked() {
        let g = x(0) * x(2);
        assert!(matches!(compose(&g, &[x(0)]), Err(ExprError::ArityMismatch { expected: 3, got: 1 })));
        assert!(x(2).check_arity(2).is_err());
        assert!(x(1).check_arity(2).is_ok());
    }

    #[test]
    fn poly_round_trip() {
        let e = (x(0) + x(1)).powi(3);
        let p = e.to_poly(2).unwrap();
        assert_eq!(SmoothExpr::from_poly(&p), e.normalize());
        assert!(x(0).sin().to_poly(2).is_none());
    }
}
