//! Smooth singular simplices into zero sets and integration of forms over
//! chains of them.
//!
//! `Δᵏ` is used in its chart `{t ∈ ℝᵏ : tᵢ ≥ 0, Σtᵢ ≤ 1}` with the standard
//! orientation. Vertices are `v₀ = 0, vᵢ = eᵢ`; face `i` is the one opposite
//! `vᵢ`, parametrized order-preservingly on the remaining vertices.

mod quadrature;

pub use quadrature::{grundmann_moller, integrate_level, integrate_simplex, subdivide, Estimate, QuadratureConfig};

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::basis::MultiIndex;
use crate::cring::{Ring, RingError, RingHom, RingPresentation};
use crate::derham::{Form, FormError};
use crate::expr::{parse_with_prefix, ExprError, SmoothExpr};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("form of degree {form} cannot be integrated over a {chain}-chain")]
    DegreeMismatch { form: usize, chain: usize },
    #[error("a {k}-simplex has no face {i}")]
    FaceIndex { k: usize, i: usize },
    #[error("a 0-chain has no boundary")]
    ZeroDimensional,
    #[error("simplex map has {got} components, the target ring has {expected} coordinates")]
    ArityMismatch { expected: usize, got: usize },
    #[error("simplex map leaves the zero set: generator {index} is {value:e} at t = {witness:?}")]
    OffZeroSet { index: usize, value: f64, witness: Vec<f64> },
    #[error("chains live in different dimensions or rings")]
    ChainMismatch,
    #[error("quadrature did not converge: error estimate {error:e} above {tolerance:e} after {level} refinements")]
    NoConvergence { error: f64, tolerance: f64, level: u32 },
}

/// Sample points of `Δᵏ`: the barycentric lattice with denominator `m`.
pub fn simplex_lattice(k: usize, m: u32) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: u32, m: u32, cur: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur.push(a as f64 / m as f64);
            rec(k, left - a, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, m, m, &mut Vec::new(), &mut out);
    out
}

/// Components of face `i` of `Δᵏ` as affine expressions in `k-1` variables.
pub fn face_map(k: usize, i: usize) -> Result<Vec<SmoothExpr>, IntegrateError> {
    if k == 0 || i > k {
        return Err(IntegrateError::FaceIndex { k, i });
    }
    let s = |j: usize| SmoothExpr::var(j);
    if i == 0 {
        let mut out = Vec::with_capacity(k);
        let sum = SmoothExpr::add_all((0..k - 1).map(s).collect());
        out.push((SmoothExpr::one() - sum).normalize());
        out.extend((0..k - 1).map(s));
        Ok(out)
    } else {
        let mut out: Vec<SmoothExpr> = (0..k - 1).map(s).collect();
        out.insert(i - 1, SmoothExpr::zero());
        Ok(out)
    }
}

/// Smooth map `σ: Δᵏ → Z(I)`, given by `n` expressions in `t₁ … t_k`.
#[derive(Clone)]
pub struct SimplexMap {
    k: usize,
    target: Ring,
    components: Vec<SmoothExpr>,
}

impl SimplexMap {
    /// Checks `σ*(g) ≈ 0` on a lattice of `Δᵏ` within the target's tolerance.
    pub fn new(k: usize, target: &Ring, components: Vec<SmoothExpr>) -> Result<Self, IntegrateError> {
        if components.len() != target.n() {
            return Err(IntegrateError::ArityMismatch { expected: target.n(), got: components.len() });
        }
        for c in &components {
            c.check_arity(k)?;
        }
        let components: Vec<SmoothExpr> = components.iter().map(SmoothExpr::normalize).collect();
        let tol = target.oracle().tolerance;
        for t in simplex_lattice(k, 6) {
            let x = components.iter().map(|c| c.evaluate(&t)).collect::<Result<Vec<f64>, _>>()?;
            for (index, g) in target.generators().iter().enumerate() {
                let value = g.evaluate(&x)?;
                if !(value.abs() <= tol) {
                    return Err(IntegrateError::OffZeroSet { index, value, witness: t });
                }
            }
        }
        Ok(SimplexMap { k, target: target.clone(), components })
    }

    /// Components written with variables `t1 … tk`.
    pub fn parse(k: usize, target: &Ring, components: &[&str]) -> Result<Self, IntegrateError> {
        let comps = components.iter().map(|s| parse_with_prefix(s, k, "t")).collect::<Result<Vec<_>, _>>()?;
        Self::new(k, target, comps)
    }

    /// The identity of `Δᵏ` viewed in `ℝᵏ`.
    pub fn standard(k: usize) -> Self {
        SimplexMap { k, target: RingPresentation::free(k), components: (0..k).map(SmoothExpr::var).collect() }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn components(&self) -> &[SmoothExpr] {
        &self.components
    }

    /// `σ ∘ dᵢ`. Lands in the same zero set, so no recheck is needed.
    pub fn face(&self, i: usize) -> Result<SimplexMap, IntegrateError> {
        if self.k == 0 {
            return Err(IntegrateError::ZeroDimensional);
        }
        let f = face_map(self.k, i)?;
        let components = self.components.iter().map(|c| c.substitute(&f).normalize()).collect();
        Ok(SimplexMap { k: self.k - 1, target: self.target.clone(), components })
    }

    pub fn evaluate(&self, t: &[f64]) -> Result<Vec<f64>, ExprError> {
        self.components.iter().map(|c| c.evaluate(t)).collect()
    }

    /// `σ*α` as an ordinary form on the chart of `Δᵏ`. Degrees above `k`
    /// give the zero form; [`Self::pullback_exceeds_dim`] tells the caller.
    pub fn pullback(&self, alpha: &Form) -> Result<Form, IntegrateError> {
        if !alpha.ring().same_as(&self.target) {
            return Err(FormError::RingMismatch.into());
        }
        let chart = RingPresentation::free(self.k);
        let images = self.components.iter().map(|c| chart.element(c.clone())).collect();
        let hom = RingHom::new_unchecked(&self.target, &chart, images);
        Ok(alpha.pullback(&hom)?)
    }

    pub fn pullback_exceeds_dim(&self, alpha: &Form) -> bool {
        alpha.degree() > self.k
    }

    /// `∫_σ α` for `α` of degree `k`.
    pub fn integrate(&self, alpha: &Form, cfg: &QuadratureConfig) -> Result<Estimate, IntegrateError> {
        if alpha.degree() != self.k {
            return Err(IntegrateError::DegreeMismatch { form: alpha.degree(), chain: self.k });
        }
        let pulled = self.pullback(alpha)?;
        let top = MultiIndex::from_bits(((1u64 << self.k) - 1) as u32);
        let density = pulled.coefficient(top).rep().clone();
        let f = |t: &[f64]| density.evaluate(t);
        Ok(integrate_simplex(self.k, &f, cfg)?)
    }
}

impl fmt::Display for SimplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.display_with("t").to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for SimplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplexMap[{}]{}", self.k, self)
    }
}

/// Finite real combination of `k`-simplices with like terms collected.
#[derive(Clone, Debug)]
pub struct Chain {
    k: usize,
    target: Ring,
    terms: BTreeMap<Vec<SmoothExpr>, f64>,
}

impl Chain {
    pub fn zero(k: usize, target: &Ring) -> Self {
        Chain { k, target: target.clone(), terms: BTreeMap::new() }
    }

    pub fn simplex(s: &SimplexMap) -> Self {
        let mut c = Chain::zero(s.k, &s.target);
        c.add_term(s.components.clone(), 1.0);
        c
    }

    fn add_term(&mut self, key: Vec<SmoothExpr>, coeff: f64) {
        let sum = self.terms.get(&key).copied().unwrap_or(0.0) + coeff;
        if sum == 0.0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (SimplexMap, f64)> + '_ {
        self.terms
            .iter()
            .map(|(c, &w)| (SimplexMap { k: self.k, target: self.target.clone(), components: c.clone() }, w))
    }

    pub fn add(&self, other: &Chain) -> Result<Chain, IntegrateError> {
        if self.k != other.k || !self.target.same_as(&other.target) {
            return Err(IntegrateError::ChainMismatch);
        }
        let mut out = self.clone();
        for (key, w) in &other.terms {
            out.add_term(key.clone(), *w);
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Chain {
        let mut out = Chain::zero(self.k, &self.target);
        for (key, w) in &self.terms {
            out.add_term(key.clone(), c * w);
        }
        out
    }

    /// `∂ = Σᵢ (-1)ⁱ σ∘dᵢ`, extended linearly.
    pub fn boundary(&self) -> Result<Chain, IntegrateError> {
        if self.k == 0 {
            return Err(IntegrateError::ZeroDimensional);
        }
        let mut out = Chain::zero(self.k - 1, &self.target);
        for (s, w) in self.terms() {
            for i in 0..=self.k {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                out.add_term(s.face(i)?.components, sign * w);
            }
        }
        Ok(out)
    }

    /// `Σ cⱼ ∫_{σⱼ} α`; errors add up.
    pub fn integrate(&self, alpha: &Form, cfg: &QuadratureConfig) -> Result<Estimate, IntegrateError> {
        if alpha.degree() != self.k {
            return Err(IntegrateError::DegreeMismatch { form: alpha.degree(), chain: self.k });
        }
        let mut value = 0.0;
        let mut error = 0.0;
        let mut level = 0;
        for (s, w) in self.terms() {
            let e = s.integrate(alpha, cfg)?;
            value += w * e.value;
            error += w.abs() * e.error;
            level = level.max(e.level);
        }
        Ok(Estimate { value, error, level })
    }
}

/// Result of comparing `∫_σ dγ` with `∫_{∂σ} γ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub lhs_error: f64,
    pub rhs_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Both sides of Stokes' formula for a `(k-1)`-form `γ` on a `k`-simplex.
///
/// Fails with [`IntegrateError::NoConvergence`] when either quadrature error
/// estimate exceeds the tolerance, since then the residual means nothing.
pub fn stokes_check(sigma: &SimplexMap, gamma: &Form, tol: f64, cfg: &QuadratureConfig) -> Result<StokesReport, IntegrateError> {
    if sigma.k == 0 {
        return Err(IntegrateError::ZeroDimensional);
    }
    if gamma.degree() + 1 != sigma.k {
        return Err(IntegrateError::DegreeMismatch { form: gamma.degree(), chain: sigma.k - 1 });
    }
    let lhs = sigma.integrate(&gamma.d(), cfg)?;
    let rhs = Chain::simplex(sigma).boundary()?.integrate(gamma, cfg)?;
    for e in [&lhs, &rhs] {
        if e.error > tol {
            return Err(IntegrateError::NoConvergence { error: e.error, tolerance: tol, level: e.level });
        }
    }
    let residual = (lhs.value - rhs.value).abs();
    Ok(StokesReport {
        lhs: lhs.value,
        rhs: rhs.value,
        residual,
        lhs_error: lhs.error,
        rhs_error: rhs.error,
        tolerance: tol,
        pass: residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::OracleConfig;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn area_and_first_moment_of_triangle() {
        let s = SimplexMap::standard(2);
        let r = s.target().clone();
        let area = s.integrate(&Form::parse(&r, "dx1^dx2").unwrap(), &cfg()).unwrap();
        assert!((area.value - 0.5).abs() < 1e-14);
        let m = s.integrate(&Form::parse(&r, "x1*dx1^dx2").unwrap(), &cfg()).unwrap();
        assert!((m.value - 1.0 / 6.0).abs() < 1e-14);
        // reversed orientation
        let rev = s.integrate(&Form::parse(&r, "dx2^dx1").unwrap(), &cfg()).unwrap();
        assert!((rev.value + 0.5).abs() < 1e-14);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        for k in 1..=4 {
            let s = SimplexMap::standard(k);
            let b = Chain::simplex(&s).boundary().unwrap();
            assert_eq!(b.len(), k + 1);
            if k >= 2 {
                assert!(b.boundary().unwrap().is_empty(), "k = {k}");
            }
        }
    }

    #[test]
    fn simplicial_identities() {
        // dᵢ∘dⱼ = dⱼ₊₁∘dᵢ for i ≤ j, as maps Δ^{k-2} → Δᵏ
        for k in 2..=4 {
            for j in 0..k {
                for i in 0..=j {
                    let lhs: Vec<SmoothExpr> =
                        face_map(k, i).unwrap().iter().map(|c| c.substitute(&face_map(k - 1, j).unwrap()).normalize()).collect();
                    let rhs: Vec<SmoothExpr> =
                        face_map(k, j + 1).unwrap().iter().map(|c| c.substitute(&face_map(k - 1, i).unwrap()).normalize()).collect();
                    assert_eq!(lhs, rhs, "k={k} i={i} j={j}");
                }
            }
        }
        assert!(face_map(2, 3).is_err());
    }

    #[test]
    fn one_simplex_faces_are_endpoints() {
        let s = SimplexMap::standard(1);
        assert_eq!(s.face(0).unwrap().components()[0], SmoothExpr::one());
        assert!(s.face(1).unwrap().components()[0].is_zero());
    }

    #[test]
    fn stokes_on_circle() {
        let circle = RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap();
        let sigma = SimplexMap::parse(1, &circle, &["cos(2*pi*t1)", "sin(2*pi*t1)"]).unwrap();
        let gamma = Form::parse(&circle, "x1*x2").unwrap();
        let rep = stokes_check(&sigma, &gamma, 1e-9, &cfg()).unwrap();
        assert!(rep.pass, "{rep:?}");
        // ∮ x1 dx2 over the unit circle is π
        let w = Form::parse(&circle, "x1*dx2").unwrap();
        let v = sigma.integrate(&w, &cfg()).unwrap();
        assert!((v.value - std::f64::consts::PI).abs() < 1e-9, "{v:?}");
    }

    #[test]
    fn stokes_on_identity_triangle() {
        let s = SimplexMap::standard(2);
        let gamma = Form::parse(s.target(), "x1*dx2").unwrap();
        let rep = stokes_check(&s, &gamma, 1e-10, &cfg()).unwrap();
        assert!((rep.lhs - 0.5).abs() < 1e-13 && rep.pass);
    }

    #[test]
    fn rejects_maps_off_the_zero_set() {
        let circle = RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap();
        let err = SimplexMap::parse(1, &circle, &["t1", "0"]).unwrap_err();
        assert!(matches!(err, IntegrateError::OffZeroSet { .. }));
    }

    #[test]
    fn degree_mismatch() {
        let s = SimplexMap::standard(2);
        let g = Form::parse(s.target(), "x1").unwrap();
        assert!(matches!(stokes_check(&s, &g, 1e-9, &cfg()), Err(IntegrateError::DegreeMismatch { .. })));
    }
}
