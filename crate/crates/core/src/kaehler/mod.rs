//! Kähler differentials of a presented ring.
//!
//! For `C = C∞(ℝⁿ)/I` with `I = ⟨g₁, …, g_k⟩`, `Ω¹_C` is the free module on
//! `dx₁, …, dxₙ` modulo the submodule `J` generated by `dgⱼ` and `I·dxᵢ`.
//! Only the generator differentials are needed as relations: for `h` smooth,
//! `d(h·gⱼ) = h·dgⱼ + gⱼ·dh ≡ h·dgⱼ` modulo `I·Ω¹`, and coefficients are
//! already taken modulo `I`.

mod derivation;
mod psi;

pub use derivation::{enumerate_tangent_derivations, Derivation};
pub use psi::{psi_noninjectivity_report, PsiReport};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cring::{ModulePresentation, Ring, RingElement, RingError, RingHom, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KaehlerError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("vector field is not tangent to generator {index}: {verdict}")]
    NotTangent { index: usize, verdict: Verdict },
    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("objects belong to different presentations")]
    PresentationMismatch,
}

/// `Ω¹_C` as the free module on `dx₁..dxₙ` modulo the rows `dgⱼ`.
pub struct KaehlerPresentation {
    ring: Ring,
    module: Arc<ModulePresentation>,
}

pub type Kaehler = Arc<KaehlerPresentation>;

impl fmt::Debug for KaehlerPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KaehlerPresentation")
            .field("rank", &self.rank())
            .field("relations", &self.module.relations())
            .finish()
    }
}

impl KaehlerPresentation {
    pub fn new(ring: &Ring) -> Kaehler {
        let rows: Vec<Vec<RingElement>> = ring
            .generators()
            .iter()
            .map(|g| g.gradient(ring.n()).into_iter().map(|e| ring.element(e)).collect())
            .collect();
        let module = ModulePresentation::new(ring, ring.n(), rows).expect("gradient rows have rank n");
        Arc::new(KaehlerPresentation { ring: ring.clone(), module })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.ring.n()
    }

    /// Relation rows `(∂₁gⱼ, …, ∂ₙgⱼ)`.
    pub fn relations(&self) -> &[Vec<RingElement>] {
        self.module.relations()
    }

    pub fn module(&self) -> &Arc<ModulePresentation> {
        &self.module
    }

    /// Relation `j` written as a one-form.
    pub fn relation_form(self: &Arc<Self>, j: usize) -> OneForm {
        OneForm { kp: self.clone(), coeffs: self.module.relations()[j].clone() }
    }

    pub fn one_form(self: &Arc<Self>, coeffs: Vec<RingElement>) -> Result<OneForm, KaehlerError> {
        if coeffs.len() != self.rank() {
            return Err(KaehlerError::DimensionMismatch { expected: self.rank(), got: coeffs.len() });
        }
        if coeffs.iter().any(|a| !a.ring().same_as(&self.ring)) {
            return Err(KaehlerError::PresentationMismatch);
        }
        Ok(OneForm { kp: self.clone(), coeffs })
    }

    pub fn zero(self: &Arc<Self>) -> OneForm {
        OneForm { kp: self.clone(), coeffs: vec![self.ring.zero(); self.rank()] }
    }

    /// The basis differential `dxᵢ` (0-based `i`).
    pub fn dx(self: &Arc<Self>, i: usize) -> OneForm {
        let mut w = self.zero();
        w.coeffs[i] = self.ring.one();
        w
    }

    /// Universal derivation `a ↦ Σ ∂ᵢa dxᵢ`.
    pub fn d0(self: &Arc<Self>, a: &RingElement) -> OneForm {
        assert!(a.ring().same_as(&self.ring), "element is not in this ring");
        let coeffs = a.rep().gradient(self.rank()).into_iter().map(|e| self.ring.element(e)).collect();
        OneForm { kp: self.clone(), coeffs }
    }
}

/// `Σ fᵢ dxᵢ` with coefficients reduced in the ring.
#[derive(Clone)]
pub struct OneForm {
    kp: Kaehler,
    coeffs: Vec<RingElement>,
}

impl OneForm {
    pub fn presentation(&self) -> &Kaehler {
        &self.kp
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        OneForm { kp: self.kp.clone(), coeffs }
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        OneForm { kp: self.kp.clone(), coeffs }
    }

    pub fn scale(&self, a: &RingElement) -> OneForm {
        OneForm { kp: self.kp.clone(), coeffs: self.coeffs.iter().map(|c| a * c).collect() }
    }

    /// Identical coefficient vectors (no quotient by `J`).
    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    /// Membership in `J`, i.e. whether the form vanishes in `Ω¹_C`.
    ///
    /// A degree-bounded cofactor solve first; if it fails, a tangent
    /// derivation whose contraction is provably outside `I` refutes membership
    /// outright, since contractions kill every `dgⱼ`.
    pub fn member_j(&self, degree_bound: u32) -> Verdict {
        let (v, _) = self.kp.module.relation_member(&self.coeffs, degree_bound);
        if !matches!(v, Verdict::NotMemberUpToDegree { .. }) {
            return v;
        }
        let dbound = degree_bound.min(4);
        for field in enumerate_tangent_derivations(self.kp.ring(), dbound) {
            let c = field.contract(self);
            let verdict = self.kp.ring().is_zero_verdict(c.rep());
            if matches!(verdict, Verdict::ProvedUnequal { .. }) {
                return verdict;
            }
        }
        v
    }

    /// Verdict on equality in `Ω¹_C`.
    pub fn equal(&self, other: &OneForm, degree_bound: u32) -> Verdict {
        self.sub(other).member_j(degree_bound)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("({c})*dx{}", i + 1));
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Membership of a one-form in `J`.
pub fn oneform_member_j(w: &OneForm, degree_bound: u32) -> Verdict {
    w.member_j(degree_bound)
}

/// The induced map `Λ¹(φ): Ω¹_C → Ω¹_D`, `dxᵢ ↦ d(φ(xᵢ))`.
pub struct Lambda1 {
    hom: RingHom,
    source: Kaehler,
    target: Kaehler,
    images: Vec<OneForm>,
}

impl Lambda1 {
    pub fn new(hom: &RingHom) -> Lambda1 {
        let source = KaehlerPresentation::new(hom.source());
        let target = KaehlerPresentation::new(hom.target());
        let images = hom.images().iter().map(|a| target.d0(a)).collect();
        Lambda1 { hom: hom.clone(), source, target, images }
    }

    pub fn source(&self) -> &Kaehler {
        &self.source
    }

    pub fn target(&self) -> &Kaehler {
        &self.target
    }

    /// Images of the basis differentials.
    pub fn images(&self) -> &[OneForm] {
        &self.images
    }

    pub fn hom(&self) -> &RingHom {
        &self.hom
    }

    /// `Σ fᵢ dxᵢ ↦ Σ φ(fᵢ)·d(φ(xᵢ))`.
    pub fn apply(&self, w: &OneForm) -> OneForm {
        let mut out = self.target.zero();
        for (f, img) in w.coeffs.iter().zip(&self.images) {
            if !f.is_zero() {
                out = out.add(&img.scale(&self.hom.apply(f)));
            }
        }
        out
    }
}

pub fn lambda1(hom: &RingHom) -> Lambda1 {
    Lambda1::new(hom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{OracleConfig, RingPresentation};

    fn cross() -> Ring {
        RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap()
    }

    #[test]
    fn presentations() {
        let free = KaehlerPresentation::new(&RingPresentation::free(4));
        assert_eq!((free.rank(), free.relations().len()), (4, 0));
        let k = KaehlerPresentation::new(&cross());
        assert_eq!(k.relations().len(), 1);
        let row: Vec<String> = k.relations()[0].iter().map(|a| a.to_string()).collect();
        assert_eq!(row, ["x2", "x1"]);
        let circle = RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap();
        let row: Vec<String> = KaehlerPresentation::new(&circle).relations()[0].iter().map(|a| a.to_string()).collect();
        assert_eq!(row, ["2*x1", "2*x2"]);
    }

    #[test]
    fn d0_examples() {
        let r = RingPresentation::free(2);
        let k = KaehlerPresentation::new(&r);
        let w = k.d0(&r.parse_element("x1^2").unwrap());
        assert_eq!(w.to_strings(), ["2*x1", "0"]);
        assert!(k.d0(&r.parse_element("7/3").unwrap()).is_zero_vector());
        let c = cross();
        let kc = KaehlerPresentation::new(&c);
        // x1*x2 already reduces to 0, and its ambient differential is the relation
        assert!(kc.d0(&c.parse_element("x1*x2").unwrap()).is_zero_vector());
        let rel = kc.relation_form(0);
        assert_eq!(rel.to_strings(), ["x2", "x1"]);
        assert!(rel.member_j(6).is_proved_equal());
    }

    #[test]
    fn j_membership() {
        let c = cross();
        let k = KaehlerPresentation::new(&c);
        let xdy = k.dx(1).scale(&c.coordinate(0));
        assert_eq!(xdy.member_j(6), Verdict::NotMemberUpToDegree { degree: 6 });
        let free = RingPresentation::free(2);
        let kf = KaehlerPresentation::new(&free);
        assert!(matches!(kf.dx(0).member_j(6), Verdict::ProvedUnequal { .. }));
    }

    #[test]
    fn lambda1_examples() {
        let c = cross();
        let axis = RingPresentation::parse(2, &["x2"], OracleConfig::default()).unwrap();
        let f = RingHom::parse(&c, &axis, &["x1", "0"]).unwrap();
        let l = lambda1(&f);
        assert_eq!(l.images()[0].to_strings(), ["1", "0"]);
        assert!(l.images()[1].is_zero_vector());
        let line = RingPresentation::free(1);
        let s = RingHom::parse(&line, &line, &["2*x1"]).unwrap();
        let ls = lambda1(&s);
        assert_eq!(ls.apply(&ls.source().dx(0)).to_strings(), ["2"]);
    }
}
