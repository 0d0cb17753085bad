use std::fmt;

use num_traits::Zero;

use super::{KaehlerError, OneForm};
use crate::cring::{standard_monomials, Ring, RingElement, Verdict};
use crate::expr::SmoothExpr;
use crate::linalg;
use crate::poly::Monomial;
use crate::{Poly, Rational};

/// Vector field `Σ aᵢ ∂ᵢ` tangent to the ideal, with one certificate per generator.
#[derive(Clone)]
pub struct Derivation {
    ring: Ring,
    coeffs: Vec<RingElement>,
    certificates: Vec<Verdict>,
}

impl Derivation {
    /// Accepts the field only if every `V(gⱼ)` passes the membership oracle.
    pub fn new(ring: &Ring, coeffs: Vec<RingElement>, degree_bound: u32) -> Result<Self, KaehlerError> {
        if coeffs.len() != ring.n() {
            return Err(KaehlerError::DimensionMismatch { expected: ring.n(), got: coeffs.len() });
        }
        if coeffs.iter().any(|a| !a.ring().same_as(ring)) {
            return Err(KaehlerError::PresentationMismatch);
        }
        let mut certificates = Vec::new();
        for (index, g) in ring.generators().iter().enumerate() {
            let vg = apply_field(&coeffs, g);
            let verdict = ring.ideal_member(&vg, degree_bound).verdict;
            if !verdict.holds() {
                return Err(KaehlerError::NotTangent { index, verdict });
            }
            certificates.push(verdict);
        }
        Ok(Derivation { ring: ring.clone(), coeffs, certificates })
    }

    pub fn parse(ring: &Ring, coeffs: &[&str], degree_bound: u32) -> Result<Self, KaehlerError> {
        let coeffs = coeffs.iter().map(|s| ring.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(ring, coeffs, degree_bound)
    }

    /// The coordinate field `∂ᵢ` on a free ring.
    pub fn coordinate(ring: &Ring, i: usize) -> Result<Self, KaehlerError> {
        let mut coeffs = vec![ring.zero(); ring.n()];
        coeffs[i] = ring.one();
        Self::new(ring, coeffs, 0)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn certificates(&self) -> &[Verdict] {
        &self.certificates
    }

    /// `V(a) = Σ aᵢ ∂ᵢ a`, computed on the representative.
    pub fn apply(&self, a: &RingElement) -> RingElement {
        assert!(a.ring().same_as(&self.ring), "element is not in this ring");
        self.ring.element(apply_field(&self.coeffs, a.rep()))
    }

    /// `ι_V(Σ fᵢ dxᵢ) = Σ fᵢ aᵢ`.
    pub fn contract(&self, w: &OneForm) -> RingElement {
        let terms: Vec<SmoothExpr> =
            w.coeffs().iter().zip(&self.coeffs).map(|(f, a)| f.rep() * a.rep()).collect();
        self.ring.element(SmoothExpr::add_all(terms))
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|a| a.to_string()).collect();
        write!(f, "Derivation({})", parts.join(", "))
    }
}

fn apply_field(coeffs: &[RingElement], e: &SmoothExpr) -> SmoothExpr {
    let terms: Vec<SmoothExpr> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(i, a)| a.rep() * &e.partial_unchecked(i))
        .collect();
    SmoothExpr::add_all(terms).normalize()
}

/// Basis of the tangent fields with polynomial coefficients of degree at
/// most `degree_bound`, taken over standard monomials so that no basis
/// element is zero in the ring.
///
/// The condition `NF(Σᵢ aᵢ ∂ᵢgⱼ) = 0` is linear in the coefficients of the
/// `aᵢ`; the basis is the nullspace of that map. Non-polynomial rings yield
/// an empty list.
pub fn enumerate_tangent_derivations(ring: &Ring, degree_bound: u32) -> Vec<Derivation> {
    let n = ring.n();
    let Some(gens) = ring.generator_polys() else { return Vec::new() };
    let monos: Vec<Monomial> = standard_monomials(ring, degree_bound);
    let grads: Vec<Vec<Poly>> = gens.iter().map(|g| (0..n).map(|i| g.partial(i)).collect()).collect();
    let one = Rational::from_integer(1.into());
    // column for unknown (i, m): NF(m ∂ᵢgⱼ) for every j
    let mut columns: Vec<Vec<Poly>> = Vec::new();
    for i in 0..n {
        for m in &monos {
            columns.push(grads.iter().map(|row| ring.reduce_poly(&row[i].mul_term(m, &one))).collect());
        }
    }
    let mut row_index = std::collections::BTreeMap::new();
    for col in &columns {
        for (j, p) in col.iter().enumerate() {
            for (m, _) in p.terms() {
                let len = row_index.len();
                row_index.entry((j, m.clone())).or_insert(len);
            }
        }
    }
    let mut a = vec![vec![Rational::zero(); columns.len()]; row_index.len()];
    for (k, col) in columns.iter().enumerate() {
        for (j, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                a[row_index[&(j, m.clone())]][k] = c.clone();
            }
        }
    }
    linalg::nullspace(&a, columns.len())
        .into_iter()
        .map(|v| {
            let coeffs = (0..n)
                .map(|i| {
                    let p = Poly::from_terms(
                        n,
                        monos.iter().enumerate().map(|(k, m)| (m.clone(), v[i * monos.len() + k].clone())),
                    );
                    ring.element(SmoothExpr::from_poly(&p))
                })
                .collect();
            Derivation { ring: ring.clone(), coeffs, certificates: vec![Verdict::ProvedEqual; gens.len()] }
        })
        .collect()
}
