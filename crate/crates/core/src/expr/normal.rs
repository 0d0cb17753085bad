use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{Node, Prim, SmoothExpr};
use crate::Rational;

/// Product of atoms with positive exponents, sorted by atom, no repeats.
pub(crate) type Factors = Vec<(SmoothExpr, u32)>;

/// Polynomial over atoms with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Sum {
    pub(crate) terms: BTreeMap<Factors, Rational>,
}

impl Sum {
    fn constant(c: Rational) -> Sum {
        let mut s = Sum::default();
        s.add_term(Vec::new(), c);
        s
    }

    fn atom(a: SmoothExpr) -> Sum {
        let mut s = Sum::default();
        s.add_term(vec![(a, 1)], Rational::one());
        s
    }

    fn add_term(&mut self, f: Factors, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&f) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(f, s);
                }
            }
            None => {
                self.terms.insert(f, c);
            }
        }
    }

    fn add(mut self, other: Sum) -> Sum {
        for (f, c) in other.terms {
            self.add_term(f, c);
        }
        self
    }

    fn neg(self) -> Sum {
        Sum { terms: self.terms.into_iter().map(|(f, c)| (f, -c)).collect() }
    }

    fn mul(&self, other: &Sum) -> Sum {
        let mut out = Sum::default();
        for (f1, c1) in &self.terms {
            for (f2, c2) in &other.terms {
                out.add_term(mul_factors(f1, f2), c1 * c2);
            }
        }
        out
    }

    fn pow(&self, k: u32) -> Sum {
        let mut result = Sum::constant(Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub(crate) fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}

fn mul_factors(a: &Factors, b: &Factors) -> Factors {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn degree(f: &Factors) -> u32 {
    f.iter().map(|(_, e)| e).sum()
}

/// Print order: higher degree first, then terms with earlier atoms / larger exponents.
fn term_cmp(a: &Factors, b: &Factors) -> Ordering {
    degree(b).cmp(&degree(a)).then_with(|| {
        for ((aa, ae), (ba, be)) in a.iter().zip(b) {
            match aa.cmp(ba) {
                Ordering::Equal => {}
                o => return o,
            }
            match be.cmp(ae) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        b.len().cmp(&a.len())
    })
}

pub(crate) fn to_sum(e: &SmoothExpr) -> Sum {
    match e.node() {
        Node::Const(c) => Sum::constant(c.clone()),
        Node::Pi | Node::Var(_) => Sum::atom(e.clone()),
        Node::Add(v) => v.iter().fold(Sum::default(), |acc, t| acc.add(to_sum(t))),
        Node::Mul(v) => {
            let mut acc = Sum::constant(Rational::one());
            for t in v {
                acc = acc.mul(&to_sum(t));
                if acc.terms.is_empty() {
                    break;
                }
            }
            acc
        }
        Node::Neg(a) => to_sum(a).neg(),
        Node::Pow(a, k) => to_sum(a).pow(*k),
        Node::Apply(p, a) => apply_sum(*p, a),
        Node::Compose(g, args) => to_sum(&g.substitute(args)),
    }
}

fn apply_sum(p: Prim, arg: &SmoothExpr) -> Sum {
    let inner = to_sum(arg);
    if let Some(c) = inner.as_constant() {
        if let Some(folded) = fold_constant(p, &c) {
            return Sum::constant(folded);
        }
    }
    Sum::atom(SmoothExpr::apply(p, from_sum(&inner)))
}

/// Exact values of primitives at rational points, where they are rational.
fn fold_constant(p: Prim, c: &Rational) -> Option<Rational> {
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    match p {
        Prim::Sin if c.is_zero() => Some(Rational::zero()),
        Prim::Cos | Prim::Exp if c.is_zero() => Some(one),
        Prim::Recip if !c.is_zero() => Some(one / c),
        // the smooth step is exactly 1 on (-inf, 1] and 0 on [2, inf)
        Prim::Rho0(0) if *c <= one => Some(one),
        Prim::Rho0(_) if *c <= one || *c >= two => Some(Rational::zero()),
        _ => None,
    }
}

pub(crate) fn from_sum(s: &Sum) -> SmoothExpr {
    let mut terms: Vec<(&Factors, &Rational)> = s.terms.iter().collect();
    terms.sort_by(|a, b| term_cmp(a.0, b.0));
    let mut exprs: Vec<SmoothExpr> = terms.into_iter().map(|(f, c)| term_expr(f, c)).collect();
    match exprs.len() {
        0 => SmoothExpr::zero(),
        1 => exprs.pop().expect("one term"),
        _ => SmoothExpr::add_all(exprs),
    }
}

fn term_expr(f: &Factors, c: &Rational) -> SmoothExpr {
    let mut factors = Vec::with_capacity(f.len() + 1);
    if f.is_empty() || !c.is_one() {
        factors.push(SmoothExpr::constant(c.clone()));
    }
    for (atom, e) in f {
        factors.push(if *e == 1 { atom.clone() } else { atom.powi(*e) });
    }
    if factors.len() == 1 {
        factors.pop().expect("one factor")
    } else {
        SmoothExpr::mul_all(factors)
    }
}

impl SmoothExpr {
    /// Canonical form: flattened, constants folded, polynomial structure over
    /// atoms expanded and sorted. Idempotent.
    pub fn normalize(&self) -> SmoothExpr {
        from_sum(&to_sum(self))
    }

    /// Structural equality after normalization.
    pub fn equals_normalized(&self, other: &SmoothExpr) -> bool {
        to_sum(&(self - other)).terms.is_empty()
    }

    /// Whether the leading coefficient printed for this term is negative.
    pub(crate) fn has_negative_coefficient(&self) -> bool {
        match self.node() {
            Node::Const(c) => c.is_negative(),
            Node::Mul(v) => v.first().and_then(SmoothExpr::as_const).is_some_and(Signed::is_negative),
            Node::Neg(_) => true,
            _ => false,
        }
    }

    /// Split into `Σ_k T_k · P_k(x)` where `T_k` is a product of non-variable
    /// atoms and `P_k` is polynomial in the coordinates.
    pub(crate) fn split_polynomial_part(&self, nvars: usize) -> Vec<(SmoothExpr, Vec<(Vec<u32>, Rational)>)> {
        let sum = to_sum(self);
        let mut groups: BTreeMap<Factors, Vec<(Vec<(usize, u32)>, Rational)>> = BTreeMap::new();
        for (f, c) in &sum.terms {
            let mut rest = Vec::new();
            let mut vars = Vec::new();
            for (atom, e) in f {
                match atom.node() {
                    Node::Var(i) => vars.push((*i, *e)),
                    _ => rest.push((atom.clone(), *e)),
                }
            }
            groups.entry(rest).or_default().push((vars, c.clone()));
        }
        groups
            .into_iter()
            .map(|(rest, monos)| {
                let coeff = term_expr(&rest, &Rational::one());
                let monos = monos
                    .into_iter()
                    .map(|(vars, c)| {
                        let mut exps = vec![0u32; nvars];
                        for (i, e) in vars {
                            exps[i] = e;
                        }
                        (exps, c)
                    })
                    .collect();
                (coeff, monos)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn collects_like_terms() {
        assert_eq!((x(0) + x(0)).normalize(), (SmoothExpr::int(2) * x(0)).normalize());
        assert_eq!((SmoothExpr::int(2) * x(0)).normalize().to_string(), "2*x1");
    }

    #[test]
    fn expands_polynomials() {
        let e = (x(0) + x(1)).powi(2) - x(0).powi(2) - SmoothExpr::int(2) * x(0) * x(1);
        assert_eq!(e.normalize(), x(1).powi(2));
    }

    #[test]
    fn additive_identity() {
        let e = x(0).sin() + SmoothExpr::zero();
        assert_eq!(e.normalize(), x(0).sin());
    }

    #[test]
    fn transcendental_atoms_combine() {
        let s = x(0).sin();
        let e = &(&s * &s) - &s.powi(2);
        assert!(e.normalize().is_zero());
        // arguments are normalized inside atoms
        let a = (x(0) + x(0)).sin();
        let b = (SmoothExpr::int(2) * x(0)).sin();
        assert_eq!(a.normalize(), b.normalize());
    }

    #[test]
    fn constant_folding() {
        assert!(SmoothExpr::zero().sin().normalize().is_zero());
        assert!(SmoothExpr::zero().exp().normalize().is_one());
        assert_eq!(SmoothExpr::int(4).recip().normalize(), SmoothExpr::constant(Rational::new(1.into(), 4.into())));
        assert!(SmoothExpr::zero().rho0().normalize().is_one());
        assert!(SmoothExpr::int(3).rho0().normalize().is_zero());
        // no folding strictly inside the transition band
        let mid = SmoothExpr::constant(Rational::new(3.into(), 2.into())).rho0().normalize();
        assert!(mid.as_const().is_none());
    }

    #[test]
    fn idempotent_on_mixed_expression() {
        let e = (x(0).exp() + x(1)) * (x(0).exp() - SmoothExpr::int(3)) + x(1).cos().powi(2);
        let n1 = e.normalize();
        assert_eq!(n1.normalize(), n1);
    }

    #[test]
    fn splits_polynomial_part() {
        let e = (x(0).sin() * x(0) * x(1) + x(0).sin() + x(1)).normalize();
        let parts = e.split_polynomial_part(2);
        assert_eq!(parts.len(), 2);
    }
}
