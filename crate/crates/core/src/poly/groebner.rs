use std::collections::VecDeque;

use super::{Monomial, Polynomial};
use crate::scalar::Field;

/// Reduced Gröbner basis (monic, interreduced) under graded-lex order.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<C> {
    nvars: usize,
    polys: Vec<Polynomial<C>>,
}

impl<C: Field> GroebnerBasis<C> {
    pub fn new(nvars: usize, generators: &[Polynomial<C>]) -> Self {
        GroebnerBasis { nvars, polys: groebner_basis(generators) }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn polys(&self) -> &[Polynomial<C>] {
        &self.polys
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Whether the ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|g| g.leading_term().is_some_and(|(m, _)| m.degree() == 0))
    }

    pub fn normal_form(&self, p: &Polynomial<C>) -> Polynomial<C> {
        reduce(p, &self.polys)
    }

    pub fn contains(&self, p: &Polynomial<C>) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Whether `m` is a standard monomial (not divisible by any leading monomial).
    pub fn is_standard(&self, m: &Monomial) -> bool {
        self.polys
            .iter()
            .all(|g| g.leading_term().is_none_or(|(lm, _)| !lm.divides(m)))
    }
}

/// Full remainder of `f` on division by `divisors`.
pub fn reduce<C: Field>(f: &Polynomial<C>, divisors: &[Polynomial<C>]) -> Polynomial<C> {
    let nvars = f.nvars();
    let mut rem = Polynomial::zero(nvars);
    let mut p = f.clone();
    'outer: while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        for g in divisors {
            let Some((lm, lc)) = g.leading_term() else { continue };
            if lm.divides(&m) {
                let factor = c.clone() / lc.clone();
                let shift = lm.quotient_of(&m);
                p = p.sub(&g.mul_term(&shift, &factor));
                continue 'outer;
            }
        }
        rem.add_term(m.clone(), c.clone());
        p.add_term(m, -c);
    }
    rem
}

fn s_polynomial<C: Field>(f: &Polynomial<C>, g: &Polynomial<C>) -> Polynomial<C> {
    let (lf, cf) = f.leading_term().expect("nonzero");
    let (lg, cg) = g.leading_term().expect("nonzero");
    let l = lf.lcm(lg);
    let a = f.mul_term(&lf.quotient_of(&l), &(C::one() / cf.clone()));
    let b = g.mul_term(&lg.quotient_of(&l), &(C::one() / cg.clone()));
    a.sub(&b)
}

/// Buchberger's algorithm with the coprime-leading-monomial criterion,
/// followed by minimization and interreduction.
pub fn groebner_basis<C: Field>(generators: &[Polynomial<C>]) -> Vec<Polynomial<C>> {
    let mut basis: Vec<Polynomial<C>> = Vec::new();
    for g in generators {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    let mut pairs: VecDeque<(usize, usize)> = VecDeque::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push_back((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop_front() {
        let li = basis[i].leading_term().map(|(m, _)| m.clone()).expect("nonzero");
        let lj = basis[j].leading_term().map(|(m, _)| m.clone()).expect("nonzero");
        if li.is_coprime(&lj) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if r.is_zero() {
            continue;
        }
        basis.push(r.monic());
        let k = basis.len() - 1;
        if basis[k].leading_term().is_some_and(|(m, _)| m.degree() == 0) {
            return vec![Polynomial::one(basis[k].nvars())];
        }
        for i in 0..k {
            pairs.push_back((i, k));
        }
    }
    interreduce(basis)
}

fn interreduce<C: Field>(mut basis: Vec<Polynomial<C>>) -> Vec<Polynomial<C>> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Polynomial<C>> = Vec::new();
    basis.sort_by(|a, b| a.leading_term().map(|t| t.0).cmp(&b.leading_term().map(|t| t.0)));
    for g in basis {
        let lm = g.leading_term().map(|(m, _)| m.clone()).expect("nonzero");
        if keep
            .iter()
            .any(|h| h.leading_term().is_some_and(|(hm, _)| hm.divides(&lm)))
        {
            continue;
        }
        keep.push(g);
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial<C>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let r = reduce(&keep[i], &others);
        out.push(r.monic());
    }
    out.sort_by(|a, b| a.leading_term().map(|t| t.0).cmp(&b.leading_term().map(|t| t.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    type P = Polynomial<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let g = GroebnerBasis::new(2, &[x.mul(&y)]);
        assert_eq!(g.len(), 1);
        assert!(g.contains(&x.pow(2).mul(&y)));
        assert!(!g.contains(&x));
        assert_eq!(g.normal_form(&x.add(&x.mul(&y))), x);
    }

    #[test]
    fn twisted_cubic_basis() {
        // <x2 - x1^2, x3 - x1^3>
        let x = P::var(3, 0);
        let y = P::var(3, 1);
        let z = P::var(3, 2);
        let g = GroebnerBasis::new(3, &[y.sub(&x.pow(2)), z.sub(&x.pow(3))]);
        // x2^3 - x3^2 lies in the ideal
        assert!(g.contains(&y.pow(3).sub(&z.pow(2))));
        assert!(g.contains(&x.mul(&y).sub(&z)));
        assert!(!g.contains(&x.sub(&y)));
    }

    #[test]
    fn unit_ideal_detected() {
        let x = P::var(1, 0);
        let g = GroebnerBasis::new(1, &[x.clone(), x.sub(&P::one(1))]);
        assert!(g.is_unit());
        assert!(g.contains(&P::constant(1, q(7))));
    }

    #[test]
    fn circle_normal_form() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let circle = x.pow(2).add(&y.pow(2)).sub(&P::one(2));
        let g = GroebnerBasis::new(2, &[circle]);
        // x1^2 reduces to 1 - x2^2
        assert_eq!(g.normal_form(&x.pow(2)), P::one(2).sub(&y.pow(2)));
        assert!(!g.is_standard(&Monomial::from_exponents(vec![2, 0])));
        assert!(g.is_standard(&Monomial::from_exponents(vec![1, 3])));
    }
}
