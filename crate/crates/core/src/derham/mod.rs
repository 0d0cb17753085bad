//! The exterior algebra `Λ•Ω¹_C` with wedge, `d` and pullback.
//!
//! Forms are kept in the ambient basis `dx_I` with coefficients reduced in
//! the ring. The relations `dgⱼ ∧ dx_K` are only used when deciding equality,
//! since the quotient module has no confluent rewriting.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use thiserror::Error;

use crate::basis::MultiIndex;
use crate::cring::{module_member, Ring, RingElement, RingError, RingHom, Verdict};
use crate::expr::{parse_form_literal, ExprError, FormLiteral, SmoothExpr};
use crate::kaehler::{enumerate_tangent_derivations, Derivation, OneForm};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("form literal mixes degrees")]
    MixedDegree,
    #[error("forms belong to different ring presentations")]
    RingMismatch,
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
}

/// Homogeneous form `Σ_I f_I dx_I` of a fixed degree.
#[derive(Clone)]
pub struct Form {
    ring: Ring,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, RingElement>,
}

impl Form {
    pub fn zero(ring: &Ring, degree: usize) -> Form {
        Form { ring: ring.clone(), degree, coeffs: BTreeMap::new() }
    }

    /// Degree-0 form.
    pub fn scalar(a: &RingElement) -> Form {
        let mut f = Form::zero(a.ring(), 0);
        f.insert(MultiIndex::EMPTY, a.clone());
        f
    }

    /// `dx_I`; the zero form when the index set leaves `1..n`.
    pub fn basis(ring: &Ring, index: MultiIndex) -> Form {
        let mut f = Form::zero(ring, index.degree());
        if index.indices().all(|i| i < ring.n()) {
            f.insert(index, ring.one());
        }
        f
    }

    pub fn dx(ring: &Ring, i: usize) -> Form {
        Form::basis(ring, MultiIndex::single(i))
    }

    /// Build from `(I, f_I)` pairs of one degree.
    pub fn from_terms(ring: &Ring, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, RingElement)>) -> Form {
        let mut f = Form::zero(ring, degree);
        for (i, a) in terms {
            assert_eq!(i.degree(), degree, "term of the wrong degree");
            f.accumulate(i, a.rep().clone());
        }
        f.finish()
    }

    pub fn from_literal(ring: &Ring, lit: &FormLiteral) -> Result<Form, FormError> {
        let degree = lit.degree().ok_or(FormError::MixedDegree)?;
        let mut f = Form::zero(ring, degree);
        for (i, e) in &lit.terms {
            e.check_arity(ring.n())?;
            f.accumulate(*i, e.clone());
        }
        Ok(f.finish())
    }

    /// Parse a literal like `x1 * dx2 + sin(x1) * dx1^dx2`.
    pub fn parse(ring: &Ring, text: &str) -> Result<Form, FormError> {
        Self::from_literal(ring, &parse_form_literal(text, ring.n())?)
    }

    pub fn from_oneform(w: &OneForm) -> Form {
        let ring = w.presentation().ring();
        Form::from_terms(
            ring,
            1,
            w.coeffs().iter().enumerate().map(|(i, a)| (MultiIndex::single(i), a.clone())),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero coefficients by increasing multi-index.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &RingElement)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, index: MultiIndex) -> RingElement {
        self.coeffs.get(&index).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// No nonzero coefficient (before quotienting by relations).
    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn insert(&mut self, i: MultiIndex, a: RingElement) {
        if !a.is_zero() {
            self.coeffs.insert(i, a);
        }
    }

    // Unreduced accumulation; `finish` reduces every coefficient once.
    fn accumulate(&mut self, i: MultiIndex, e: SmoothExpr) {
        let cur = self.coeffs.remove(&i).map(|a| a.rep().clone());
        let sum = match cur {
            Some(c) => &c + &e,
            None => e,
        };
        self.coeffs.insert(i, RingElement::raw(&self.ring, sum));
    }

    fn finish(mut self) -> Form {
        let coeffs = std::mem::take(&mut self.coeffs);
        for (i, a) in coeffs {
            let r = self.ring.element(a.rep().clone());
            self.insert(i, r);
        }
        self
    }

    fn check_same(&self, other: &Form) -> Result<(), FormError> {
        if !self.ring.same_as(&other.ring) {
            return Err(FormError::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form, FormError> {
        self.check_same(other)?;
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        let mut out = self.clone();
        for (i, a) in &other.coeffs {
            out.accumulate(*i, a.rep().clone());
        }
        Ok(out.finish())
    }

    pub fn neg(&self) -> Form {
        self.scale_rational(&-Rational::one())
    }

    pub fn sub(&self, other: &Form) -> Result<Form, FormError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, a: &RingElement) -> Form {
        let mut out = Form::zero(&self.ring, self.degree);
        for (i, f) in &self.coeffs {
            out.insert(*i, a * f);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Form {
        let mut out = Form::zero(&self.ring, self.degree);
        for (i, f) in &self.coeffs {
            out.insert(*i, f.scale(c));
        }
        out
    }

    /// `α ∧ β` with Koszul signs.
    pub fn wedge(&self, other: &Form) -> Result<Form, FormError> {
        self.check_same(other)?;
        let mut out = Form::zero(&self.ring, self.degree + other.degree);
        for (i, f) in &self.coeffs {
            for (j, g) in &other.coeffs {
                if let Some((sign, k)) = i.wedge(*j) {
                    let t = f.rep() * g.rep();
                    out.accumulate(k, if sign < 0 { -t } else { t });
                }
            }
        }
        Ok(out.finish())
    }

    /// Exterior derivative `d(Σ f_I dx_I) = Σ ∂ᵢf_I dxᵢ ∧ dx_I`.
    pub fn d(&self) -> Form {
        let n = self.ring.n();
        let mut out = Form::zero(&self.ring, self.degree + 1);
        for (idx, f) in &self.coeffs {
            for i in 0..n {
                if let Some((sign, k)) = MultiIndex::single(i).wedge(*idx) {
                    let p = f.rep().partial_unchecked(i);
                    out.accumulate(k, if sign < 0 { -p } else { p });
                }
            }
        }
        out.finish()
    }

    /// Interior product `ι_V`, a degree −1 derivation.
    pub fn contract(&self, v: &Derivation) -> Form {
        assert!(v.ring().same_as(&self.ring), "derivation is not over this ring");
        if self.degree == 0 {
            return Form::zero(&self.ring, 0);
        }
        let mut out = Form::zero(&self.ring, self.degree - 1);
        for (idx, f) in &self.coeffs {
            for (p, i) in idx.indices().enumerate() {
                let a = &v.coeffs()[i];
                if a.is_zero() {
                    continue;
                }
                let t = f.rep() * a.rep();
                out.accumulate(idx.without(i), if p % 2 == 1 { -t } else { t });
            }
        }
        out.finish()
    }

    /// `Λ•(φ)`: `Σ φ(f_I)·d(φ x_{i₁}) ∧ … ∧ d(φ x_{i_k})`.
    pub fn pullback(&self, hom: &RingHom) -> Result<Form, FormError> {
        if !hom.source().same_as(&self.ring) {
            return Err(FormError::RingMismatch);
        }
        let target = hom.target();
        let images: Vec<Form> = hom.images().iter().map(|a| Form::scalar(a).d()).collect();
        let mut out = Form::zero(target, self.degree);
        for (idx, f) in &self.coeffs {
            let mut w = Form::scalar(&hom.apply(f));
            for i in idx.indices() {
                w = w.wedge(&images[i])?;
            }
            for (k, c) in w.coeffs {
                out.accumulate(k, c.rep().clone());
            }
        }
        Ok(out.finish())
    }

    /// Degree-1 forms as Kähler one-forms.
    pub fn to_oneform(&self, kp: &crate::kaehler::Kaehler) -> Option<OneForm> {
        if self.degree != 1 || !kp.ring().same_as(&self.ring) {
            return None;
        }
        kp.one_form((0..self.ring.n()).map(|i| self.coefficient(MultiIndex::single(i))).collect()).ok()
    }

    /// Whether this form vanishes in `Λᵏ Ω¹_C`.
    pub fn is_zero_in_quotient(&self, degree_bound: u32) -> Verdict {
        zero_verdict(self, degree_bound, 2)
    }

    /// Verdict on `α = β` in `Λᵏ Ω¹_C`.
    pub fn equal(&self, other: &Form, degree_bound: u32) -> Result<Verdict, FormError> {
        Ok(self.sub(other)?.is_zero_in_quotient(degree_bound))
    }

    /// Evaluate every coefficient at a point.
    pub fn evaluate(&self, p: &[f64]) -> Result<BTreeMap<MultiIndex, f64>, ExprError> {
        self.coeffs.iter().map(|(i, a)| Ok((*i, a.rep().evaluate(p)?))).collect()
    }

    /// Literal text accepted by [`Form::parse`].
    pub fn to_literal(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(i, a)| if i.degree() == 0 { format!("({a})") } else { format!("({a}) * {i}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub fn form_equal(a: &Form, b: &Form, degree_bound: u32) -> Result<Verdict, FormError> {
    a.equal(b, degree_bound)
}

/// Combine coefficientwise verdicts: any refutation wins, then Unknown,
/// then numeric agreement.
fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut acc = Verdict::ProvedEqual;
    for v in verdicts {
        if v.refuted() {
            return v;
        }
        acc = match (&acc, &v) {
            (Verdict::Unknown { .. }, _) => acc,
            (_, Verdict::Unknown { .. }) => v,
            (Verdict::ProvedEqual, _) => v,
            _ => acc,
        };
    }
    acc
}

fn zero_verdict(form: &Form, degree_bound: u32, contraction_depth: u32) -> Verdict {
    if form.is_zero_vector() {
        return Verdict::ProvedEqual;
    }
    let ring = form.ring();
    let k = form.degree;
    if k == 0 || ring.is_free() {
        return combine(form.coeffs.values().map(|a| ring.is_zero_verdict(a.rep())));
    }
    let n = ring.n();
    let basis = MultiIndex::all_of_degree(n, k);
    // differentials of the ambient generators (the generators reduce to 0 in the ring)
    let gens_d: Vec<Form> = ring
        .generators()
        .iter()
        .map(|g| {
            let grad = g.gradient(n).into_iter().enumerate();
            Form::from_terms(ring, 1, grad.map(|(i, e)| (MultiIndex::single(i), ring.element(e))))
        })
        .collect();
    let relations: Vec<Vec<RingElement>> = MultiIndex::all_of_degree(n, k - 1)
        .into_iter()
        .flat_map(|kk| {
            let dk = Form::basis(ring, kk);
            gens_d.iter().map(move |dg| dg.wedge(&dk).expect("same ring"))
        })
        .filter(|w| !w.is_zero_vector())
        .map(|w| basis.iter().map(|i| w.coefficient(*i)).collect())
        .collect();
    let target: Vec<RingElement> = basis.iter().map(|i| form.coefficient(*i)).collect();
    let (v, _) = module_member(ring, &relations, &target, degree_bound);
    if !matches!(v, Verdict::NotMemberUpToDegree { .. }) || contraction_depth == 0 {
        return v;
    }
    // contractions with tangent fields map the relation submodule into the
    // one of degree k - 1, so a proved nonzero contraction refutes membership
    for field in enumerate_tangent_derivations(ring, degree_bound.min(2)) {
        let c = zero_verdict(&form.contract(&field), degree_bound, contraction_depth - 1);
        if matches!(c, Verdict::ProvedUnequal { .. }) {
            return c;
        }
    }
    v
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

/// Structural equality of reduced coefficients.
impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring)
            && self.degree == other.degree
            && self.coeffs.len() == other.coeffs.len()
            && self.coeffs.iter().all(|(i, a)| other.coeffs.get(i).is_some_and(|b| a.rep() == b.rep()))
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{OracleConfig, RingPresentation};

    fn cross() -> Ring {
        RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap()
    }

    fn circle() -> Ring {
        RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap()
    }

    #[test]
    fn koszul_signs() {
        let r = RingPresentation::free(2);
        let a = Form::dx(&r, 0).wedge(&Form::dx(&r, 1)).unwrap();
        let b = Form::dx(&r, 1).wedge(&Form::dx(&r, 0)).unwrap();
        assert_eq!(a, b.neg());
        assert!(Form::dx(&r, 0).wedge(&Form::dx(&r, 0)).unwrap().is_zero_vector());
        let c = cross();
        let w = Form::parse(&c, "x1 * dx1").unwrap().wedge(&Form::parse(&c, "x2 * dx2").unwrap()).unwrap();
        assert!(w.is_zero_vector());
    }

    #[test]
    fn exterior_derivative() {
        let r = RingPresentation::free(3);
        assert_eq!(Form::parse(&r, "x1 * dx2").unwrap().d(), Form::parse(&r, "dx1^dx2").unwrap());
        let f = Form::parse(&r, "x1^3*x2 - x2*x3^2 + 7").unwrap();
        assert!(f.d().d().is_zero_vector());
        let top = Form::parse(&r, "sin(x1*x2) * dx1^dx2^dx3").unwrap();
        assert!(top.d().is_zero_vector());
        assert_eq!(top.d().degree(), 4);
    }

    #[test]
    fn pullback_examples() {
        let c = cross();
        let w = Form::parse(&c, "x1 * dx2").unwrap();
        assert_eq!(w.pullback(&RingHom::identity(&c)).unwrap(), w);
        let axis = RingPresentation::parse(2, &["x2"], OracleConfig::default()).unwrap();
        let inc = RingHom::parse(&c, &axis, &["x1", "0"]).unwrap();
        assert!(w.pullback(&inc).unwrap().is_zero_vector());
        let plane = RingPresentation::free(2);
        let line = RingPresentation::free(1);
        let polar = RingHom::parse(&plane, &line, &["cos(x1)", "sin(x1)"]).unwrap();
        let p = Form::parse(&plane, "x1 * dx2").unwrap().pullback(&polar).unwrap();
        assert_eq!(p.to_literal(), "(cos(x1)^2) * dx1");
        assert_eq!(p.evaluate(&[0.0]).unwrap()[&MultiIndex::single(0)], 1.0);
    }

    #[test]
    fn quotient_equality() {
        let c = cross();
        let rel = Form::parse(&c, "x2 * dx1 + x1 * dx2").unwrap();
        for other in ["dx1", "dx2", "x1 * dx1 + 3 * dx2"] {
            let w = rel.wedge(&Form::parse(&c, other).unwrap()).unwrap();
            assert!(w.is_zero_in_quotient(6).is_proved_equal(), "{other}");
        }
        let free = RingPresentation::free(2);
        let a = Form::parse(&free, "(x1 + x2)^2 * dx1").unwrap();
        let b = Form::parse(&free, "x1^2 * dx1 + 2*x1*x2 * dx1 + x2^2 * dx1").unwrap();
        assert!(a.equal(&b, 4).unwrap().is_proved_equal());
        assert!(a.equal(&Form::zero(&free, 1), 4).unwrap().refuted());
    }

    #[test]
    fn circle_top_form_vanishes() {
        // x1/2·(dg∧dx2) − x2/2·(dg∧dx1) = (x1² + x2²)·dx1∧dx2 ≡ dx1∧dx2
        let r = circle();
        let top = Form::parse(&r, "dx1^dx2").unwrap();
        let v = top.is_zero_in_quotient(6);
        assert!(v.is_proved_equal(), "{v}");
        let dx1 = Form::parse(&r, "dx1").unwrap();
        assert!(matches!(dx1.is_zero_in_quotient(6), Verdict::ProvedUnequal { .. }));
    }

    #[test]
    fn contraction_is_antiderivation() {
        let r = RingPresentation::free(3);
        let v = Derivation::parse(&r, &["x2", "1", "x1*x3"], 4).unwrap();
        let a = Form::parse(&r, "x1 * dx1 + x3 * dx2").unwrap();
        let b = Form::parse(&r, "dx2^dx3").unwrap();
        let lhs = a.wedge(&b).unwrap().contract(&v);
        let rhs = a.contract(&v).wedge(&b).unwrap().sub(&a.wedge(&b.contract(&v)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn literal_round_trip() {
        let r = RingPresentation::free(3);
        let w = Form::parse(&r, "(x1 + x2) * dx1^dx3 - sin(x2) * dx2^dx3").unwrap();
        assert_eq!(Form::parse(&r, &w.to_literal()).unwrap(), w);
        assert!(matches!(Form::parse(&r, "dx1 + dx1^dx2"), Err(FormError::MixedDegree)));
    }
}
