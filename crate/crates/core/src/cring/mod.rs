//! Finitely presented C∞-rings `C∞(ℝⁿ)/⟨g₁, …, g_k⟩`.
//!
//! Elements are represented by ambient smooth expressions. When every
//! generator is polynomial a reduced Gröbner basis is computed once at
//! construction and representatives are kept in normal form with respect to
//! it (coefficient-wise over any transcendental factors). Equality is
//! three-valued: see [`Verdict`].

mod hom;
mod membership;
mod module;
mod point;
mod sample;
mod square_zero;
mod verdict;

pub use hom::RingHom;
pub use membership::Membership;
pub use module::{ModuleElement, ModulePresentation};
pub(crate) use module::{standard_monomials, submodule_member as module_member};
#[cfg(test)]
pub(crate) use module::solve_combination;
pub use point::RPoint;
pub use sample::sample_zero_set;
pub use square_zero::{SquareZeroElement, SquareZeroRing};
pub use verdict::Verdict;

use std::fmt;
use std::ops;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{ExprError, SmoothExpr};
use crate::poly::GroebnerBasis;
use crate::{Poly, Rational};

/// Settings for the equality oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleConfig {
    /// Maximum cofactor degree for membership solves.
    pub degree_bound: u32,
    /// Number of zero-set sample points used for numeric verdicts.
    pub samples: usize,
    /// Absolute tolerance for numeric verdicts and zero-set residuals.
    pub tolerance: f64,
    /// Sampling box, one `[lo, hi]` per coordinate; empty means `[-2, 2]ⁿ`.
    #[serde(rename = "box")]
    pub region: Vec<[f64; 2]>,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { degree_bound: 8, samples: 32, tolerance: 1e-8, region: Vec::new(), seed: 0x5eed }
    }
}

impl OracleConfig {
    pub fn region_for(&self, n: usize) -> Vec<[f64; 2]> {
        if self.region.len() == n {
            self.region.clone()
        } else {
            vec![[-2.0, 2.0]; n]
        }
    }
}

/// JSON ring presentation file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingFile {
    pub n: usize,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub oracle: OracleConfig,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RingError {
    #[error("malformed generator {index}: {source}")]
    MalformedGenerator { index: usize, source: ExprError },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("elements belong to different ring presentations")]
    PresentationMismatch,
    #[error("arity mismatch: expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("generator {index} does not map to zero: {verdict}")]
    IllDefinedHom { index: usize, verdict: Verdict },
    #[error("point is off the zero set: generator {index} has value {value:e}")]
    OffZeroSet { index: usize, value: f64 },
    #[error("zero-set sampling found {found} of {requested} points")]
    SamplingFailed { found: usize, requested: usize },
    #[error("module does not belong to this ring")]
    ModuleMismatch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `C∞(ℝⁿ)/⟨gens⟩` together with its oracle settings and cached reduction data.
pub struct RingPresentation {
    n: usize,
    gens: Vec<SmoothExpr>,
    oracle: OracleConfig,
    basis: Option<GroebnerBasis<Rational>>,
    samples: OnceLock<Result<Vec<Vec<f64>>, RingError>>,
    rational_points: OnceLock<Vec<Vec<Rational>>>,
    gen_gradients: OnceLock<Vec<Vec<SmoothExpr>>>,
}

pub type Ring = Arc<RingPresentation>;

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        f.debug_struct("RingPresentation").field("n", &self.n).field("gens", &gens).finish()
    }
}

impl RingPresentation {
    /// Present `C∞(ℝⁿ)/⟨gens⟩`; an empty generator list gives the free ring.
    pub fn new(n: usize, gens: Vec<SmoothExpr>, oracle: OracleConfig) -> Result<Ring, RingError> {
        let mut normalized = Vec::with_capacity(gens.len());
        for (index, g) in gens.into_iter().enumerate() {
            g.check_arity(n).map_err(|source| RingError::MalformedGenerator { index, source })?;
            normalized.push(g.normalize());
        }
        let basis = if !normalized.is_empty() && normalized.iter().all(SmoothExpr::is_polynomial) {
            let polys: Vec<Poly> =
                normalized.iter().map(|g| g.to_poly(n).expect("polynomial generator")).collect();
            Some(GroebnerBasis::new(n, &polys))
        } else {
            None
        };
        Ok(Arc::new(RingPresentation { n, gens: normalized, oracle, basis, samples: OnceLock::new(), rational_points: OnceLock::new(), gen_gradients: OnceLock::new() }))
    }

    pub fn free(n: usize) -> Ring {
        Self::new(n, Vec::new(), OracleConfig::default()).expect("free ring")
    }

    /// Parse generator strings in the expression grammar.
    pub fn parse(n: usize, gens: &[&str], oracle: OracleConfig) -> Result<Ring, RingError> {
        let mut parsed = Vec::new();
        for (index, g) in gens.iter().enumerate() {
            parsed.push(crate::expr::parse(g, n).map_err(|source| RingError::MalformedGenerator { index, source })?);
        }
        Self::new(n, parsed, oracle)
    }

    pub fn from_file(file: &RingFile) -> Result<Ring, RingError> {
        let gens: Vec<&str> = file.generators.iter().map(String::as_str).collect();
        Self::parse(file.n, &gens, file.oracle.clone())
    }

    pub fn to_file(&self) -> RingFile {
        RingFile {
            n: self.n,
            generators: self.gens.iter().map(|g| g.to_string()).collect(),
            oracle: self.oracle.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SmoothExpr] {
        &self.gens
    }

    pub fn oracle(&self) -> &OracleConfig {
        &self.oracle
    }

    pub fn is_free(&self) -> bool {
        self.gens.is_empty()
    }

    /// Gröbner basis of the ideal, when all generators are polynomial.
    pub fn groebner(&self) -> Option<&GroebnerBasis<Rational>> {
        self.basis.as_ref()
    }

    /// Whether exact polynomial reduction applies (free, or polynomial generators).
    pub fn is_polynomial(&self) -> bool {
        self.gens.is_empty() || self.basis.is_some()
    }

    pub fn generator_polys(&self) -> Option<Vec<Poly>> {
        self.gens.iter().map(|g| g.to_poly(self.n)).collect()
    }

    pub fn same_as(&self, other: &RingPresentation) -> bool {
        std::ptr::eq(self, other) || (self.n == other.n && self.gens == other.gens)
    }

    /// Normal form of a representative modulo the cached basis.
    pub fn reduce(&self, e: &SmoothExpr) -> SmoothExpr {
        let e = e.normalize();
        let Some(basis) = &self.basis else { return e };
        if e.is_polynomial() {
            if let Some(p) = e.to_poly(self.n) {
                return SmoothExpr::from_poly(&basis.normal_form(&p));
            }
        }
        let mut parts = Vec::new();
        for (coeff, monos) in e.split_polynomial_part(self.n) {
            let p = Poly::from_terms(
                self.n,
                monos.into_iter().map(|(exps, c)| (crate::poly::Monomial::from_exponents(exps), c)),
            );
            let r = basis.normal_form(&p);
            if !r.is_zero() {
                parts.push(&coeff * &SmoothExpr::from_poly(&r));
            }
        }
        SmoothExpr::add_all(parts).normalize()
    }

    /// Normal-form polynomial of an element, when it is polynomial.
    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        match &self.basis {
            Some(b) => b.normal_form(p),
            None => p.clone(),
        }
    }

    pub fn element(self: &Arc<Self>, e: SmoothExpr) -> RingElement {
        RingElement { rep: self.reduce(&e), ring: self.clone() }
    }

    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<RingElement, RingError> {
        Ok(self.element(crate::expr::parse(text, self.n)?))
    }

    pub fn coordinate(self: &Arc<Self>, i: usize) -> RingElement {
        self.element(SmoothExpr::var(i))
    }

    pub fn coordinates(self: &Arc<Self>) -> Vec<RingElement> {
        (0..self.n).map(|i| self.coordinate(i)).collect()
    }

    pub fn constant(self: &Arc<Self>, c: Rational) -> RingElement {
        self.element(SmoothExpr::constant(c))
    }

    pub fn zero(self: &Arc<Self>) -> RingElement {
        self.element(SmoothExpr::zero())
    }

    pub fn one(self: &Arc<Self>) -> RingElement {
        self.element(SmoothExpr::one())
    }

    /// `g(elts)` computed on representatives and reduced.
    pub fn apply_op(
        self: &Arc<Self>,
        g: &SmoothExpr,
        elts: &[RingElement],
    ) -> Result<RingElement, RingError> {
        if g.arity() > elts.len() {
            return Err(RingError::ArityMismatch { expected: g.arity(), got: elts.len() });
        }
        if elts.iter().any(|e| !e.ring.same_as(self)) {
            return Err(RingError::PresentationMismatch);
        }
        let args: Vec<SmoothExpr> = elts.iter().map(|e| e.rep.clone()).collect();
        Ok(self.element(crate::expr::compose(g, &args)?))
    }

    /// Cached zero-set samples for this ring's oracle settings.
    pub fn samples(&self) -> Result<&[Vec<f64>], RingError> {
        self.samples
            .get_or_init(|| {
                sample_zero_set(self, self.oracle.samples, &self.oracle.region_for(self.n), self.oracle.seed)
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    /// Three-valued equality of two elements.
    pub fn equal(&self, a: &RingElement, b: &RingElement) -> Result<Verdict, RingError> {
        if !a.ring.same_as(self) || !b.ring.same_as(self) {
            return Err(RingError::PresentationMismatch);
        }
        Ok(self.is_zero_verdict(&(&a.rep - &b.rep)))
    }

    /// Verdict on whether an ambient expression is zero in this ring.
    pub fn is_zero_verdict(&self, e: &SmoothExpr) -> Verdict {
        let d = self.reduce(e);
        if d.is_zero() {
            return Verdict::ProvedEqual;
        }
        let exact_poly = self.is_polynomial() && d.is_polynomial();
        if exact_poly {
            if let Some(w) = self.exact_witness(&d) {
                return Verdict::ProvedUnequal { witness: Some(w) };
            }
        }
        match self.numeric_verdict(&d) {
            Verdict::NumericallyEqual { .. } if exact_poly => Verdict::Unknown {
                reason: "nonzero polynomial remainder vanishes on every sample".into(),
            },
            v => v,
        }
    }

    /// Evaluate `d` at the cached samples.
    pub(crate) fn numeric_verdict(&self, d: &SmoothExpr) -> Verdict {
        let samples = match self.samples() {
            Ok(s) => s,
            Err(e) => return Verdict::Unknown { reason: e.to_string() },
        };
        let tol = self.oracle.tolerance;
        let mut max_abs: f64 = 0.0;
        let mut used = 0;
        for p in samples {
            let Ok(v) = d.evaluate(p) else { continue };
            used += 1;
            if !v.is_finite() || v.abs() > tol + self.position_slack(d, p) {
                return Verdict::NumericallyUnequal { witness: p.clone(), value: v, seed: self.oracle.seed };
            }
            max_abs = max_abs.max(v.abs());
        }
        if used == 0 {
            return Verdict::Unknown { reason: "expression could not be evaluated at any sample".into() };
        }
        Verdict::NumericallyEqual { samples: used, max_abs_diff: max_abs, tolerance: tol, seed: self.oracle.seed }
    }

    /// How much `d` can move between a sample and the nearby true zero-set
    /// point. Near singular points of the generators the sample position is
    /// only known to about the square root of the residual.
    fn position_slack(&self, d: &SmoothExpr, p: &[f64]) -> f64 {
        let grads = self.gen_gradients.get_or_init(|| self.gens.iter().map(|g| g.gradient(self.n)).collect());
        let norm = |row: &[SmoothExpr]| -> Option<f64> {
            let mut s = 0.0;
            for e in row {
                let v = e.evaluate(p).ok()?;
                s += v * v;
            }
            Some(s.sqrt())
        };
        let mut delta: f64 = 0.0;
        for (g, row) in self.gens.iter().zip(grads) {
            let (Ok(gv), Some(gn)) = (g.evaluate(p), norm(row)) else { return f64::INFINITY };
            let dj = if gn >= 1e-4 { gv.abs() / gn } else { gv.abs().sqrt() };
            delta = delta.max(dj);
        }
        if delta == 0.0 {
            return 0.0;
        }
        let dn = norm(&d.gradient(self.n)).unwrap_or(f64::INFINITY);
        10.0 * dn * delta
    }

    /// A rational point on the zero set where the polynomial `d` is nonzero.
    pub(crate) fn exact_witness(&self, d: &SmoothExpr) -> Option<Vec<Rational>> {
        let dp = d.to_poly(self.n)?;
        self.rational_zero_points()
            .iter()
            .find(|p| !num_traits::Zero::is_zero(&eval_exact(&dp, p)))
            .cloned()
    }

    /// Exact rational points of the zero set: small grid points plus
    /// rationalized samples that satisfy every generator exactly.
    pub(crate) fn rational_zero_points(&self) -> &[Vec<Rational>] {
        self.rational_points.get_or_init(|| {
            let Some(gens) = self.generator_polys() else { return Vec::new() };
            let on_zero_set = |p: &[Rational]| gens.iter().all(|g| num_traits::Zero::is_zero(&eval_exact(g, p)));
            let mut points: Vec<Vec<Rational>> =
                candidate_points(self.n).into_iter().filter(|p| on_zero_set(p)).collect();
            if !gens.is_empty() {
                if let Ok(samples) = self.samples() {
                    for s in samples {
                        let cand: Option<Vec<Rational>> =
                            s.iter().map(|&x| crate::scalar::rational_approx(x, 1000)).collect();
                        if let Some(cand) = cand {
                            if on_zero_set(&cand) && !points.contains(&cand) {
                                points.push(cand);
                            }
                        }
                    }
                }
            }
            points
        })
    }
}

pub(crate) fn eval_exact(p: &Poly, point: &[Rational]) -> Rational {
    p.eval_with(point, Clone::clone)
}

/// Small rational grid points ordered by simplicity.
fn candidate_points(n: usize) -> Vec<Vec<Rational>> {
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let mut values = vec![q(0, 1), q(1, 1), q(-1, 1), q(2, 1), q(-2, 1), q(1, 2), q(-1, 2)];
    if n <= 3 {
        values.extend([q(3, 5), q(4, 5), q(-3, 5), q(-4, 5), q(3, 2), q(-3, 2)]);
    }
    let m = values.len();
    let total = m.checked_pow(n as u32).unwrap_or(usize::MAX).min(50_000);
    let mut idx: Vec<Vec<usize>> = (0..total)
        .map(|mut k| {
            let mut v = vec![0; n];
            for slot in v.iter_mut() {
                *slot = k % m;
                k /= m;
            }
            v
        })
        .collect();
    idx.sort_by_key(|v| (v.iter().copied().max().unwrap_or(0), v.iter().sum::<usize>()));
    idx.into_iter().map(|v| v.into_iter().map(|i| values[i].clone()).collect()).collect()
}

/// An element of a presented ring, stored by a reduced representative.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    rep: SmoothExpr,
}

impl RingElement {
    /// Wrap a representative without reducing it.
    pub(crate) fn raw(ring: &Ring, rep: SmoothExpr) -> RingElement {
        RingElement { ring: ring.clone(), rep }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rep(&self) -> &SmoothExpr {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        self.ring.element(&SmoothExpr::constant(c.clone()) * &self.rep)
    }

    pub fn pow(&self, k: u32) -> RingElement {
        self.ring.element(self.rep.powi(k))
    }

    /// Exact value at a rational point, when the representative is polynomial.
    pub fn to_poly(&self) -> Option<Poly> {
        self.rep.to_poly(self.ring.n())
    }

    fn check(&self, other: &RingElement) {
        assert!(self.ring.same_as(&other.ring), "ring elements from different presentations");
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Identical reduced representatives.
impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.rep == other.rep
    }
}

impl ops::Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.check(rhs);
        self.ring.element(&self.rep + &rhs.rep)
    }
}

impl ops::Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.check(rhs);
        self.ring.element(&self.rep - &rhs.rep)
    }
}

impl ops::Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.check(rhs);
        self.ring.element(&self.rep * &rhs.rep)
    }
}

impl ops::Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.ring.element(-self.rep.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cross() -> Ring {
        RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap()
    }

    #[test]
    fn presentations() {
        let r = cross();
        assert_eq!(r.groebner().unwrap().len(), 1);
        let f = RingPresentation::free(3);
        assert!(f.is_free() && f.groebner().is_none() && f.is_polynomial());
        let c = RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap();
        assert!(c.groebner().is_some());
        assert!(matches!(
            RingPresentation::parse(2, &["x3"], OracleConfig::default()),
            Err(RingError::MalformedGenerator { index: 0, .. })
        ));
    }

    #[test]
    fn apply_op_examples() {
        let r = cross();
        let g = crate::parse("x1*x2", 2).unwrap();
        let v = r.apply_op(&g, &r.coordinates()).unwrap();
        assert!(v.is_zero());
        let a = r.parse_element("x1 + sin(x2)").unwrap();
        let sum = crate::parse("x1 + x2", 2).unwrap();
        assert!(r.apply_op(&sum, &[a.clone(), -&a]).unwrap().is_zero());
        let five = r.apply_op(&SmoothExpr::int(5), &[]).unwrap();
        assert_eq!(five.rep(), &SmoothExpr::int(5));
        assert!(matches!(r.apply_op(&g, &[a]), Err(RingError::ArityMismatch { .. })));
        let other = RingPresentation::free(2);
        assert!(matches!(r.apply_op(&g, &other.coordinates()), Err(RingError::PresentationMismatch)));
    }

    #[test]
    fn mixed_reduction_kills_ideal_multiples() {
        let r = cross();
        let e = r.parse_element("sin(x1)*x1*x2 + x1").unwrap();
        assert_eq!(e.rep(), &SmoothExpr::var(0));
    }

    #[test]
    fn equality_examples() {
        let r = cross();
        let v = r.equal(&r.parse_element("sin(x1*x2)").unwrap(), &r.zero()).unwrap();
        assert!(matches!(v, Verdict::NumericallyEqual { .. }), "{v}");
        let v = r.equal(&r.parse_element("x1 + x2").unwrap(), &r.zero()).unwrap();
        match v {
            Verdict::ProvedUnequal { witness: Some(w) } => {
                assert!(num_traits::Zero::is_zero(&(&w[0] * &w[1])));
                assert!(!num_traits::Zero::is_zero(&(&w[0] + &w[1])));
            }
            other => panic!("{other}"),
        }
        let f = RingPresentation::free(2);
        let v = f
            .equal(&f.parse_element("(x1+x2)^2").unwrap(), &f.parse_element("x1^2 + 2*x1*x2 + x2^2").unwrap())
            .unwrap();
        assert!(v.is_proved_equal());
        assert!(matches!(r.equal(&r.zero(), &f.zero()), Err(RingError::PresentationMismatch)));
    }

    #[test]
    fn non_radical_remainder_is_unknown() {
        let r = RingPresentation::parse(1, &["x1^2"], OracleConfig::default()).unwrap();
        let v = r.equal(&r.coordinate(0), &r.zero()).unwrap();
        assert!(v.is_unknown(), "{v}");
    }

    #[test]
    fn ring_file_round_trip() {
        let json = r#"{"n": 2, "generators": ["x1*x2"], "oracle": {"samples": 10, "box": [[-1,1],[-1,1]]}}"#;
        let file: RingFile = serde_json::from_str(json).unwrap();
        assert_eq!(file.oracle.samples, 10);
        assert_eq!(file.oracle.degree_bound, 8);
        let r = RingPresentation::from_file(&file).unwrap();
        assert_eq!(r.to_file().generators, vec!["x1*x2".to_string()]);
    }
}
