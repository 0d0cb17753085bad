use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use super::{Ring, RingElement, RingError, RingPresentation, Verdict};
use crate::expr::SmoothExpr;
use crate::linalg;
use crate::poly::Monomial;
use crate::{Poly, Rational};

/// Finitely presented module `Cʳ / ⟨relations⟩` over a presented ring.
pub struct ModulePresentation {
    ring: Ring,
    rank: usize,
    relations: Vec<Vec<RingElement>>,
}

impl fmt::Debug for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModulePresentation")
            .field("rank", &self.rank)
            .field("relations", &self.relations)
            .finish()
    }
}

impl ModulePresentation {
    pub fn new(ring: &Ring, rank: usize, relations: Vec<Vec<RingElement>>) -> Result<Arc<Self>, RingError> {
        for row in &relations {
            if row.len() != rank {
                return Err(RingError::DimensionMismatch { expected: rank, got: row.len() });
            }
            if row.iter().any(|a| !a.ring().same_as(ring)) {
                return Err(RingError::ModuleMismatch);
            }
        }
        Ok(Arc::new(ModulePresentation { ring: ring.clone(), rank, relations }))
    }

    pub fn free(ring: &Ring, rank: usize) -> Arc<Self> {
        Arc::new(ModulePresentation { ring: ring.clone(), rank, relations: Vec::new() })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<RingElement>] {
        &self.relations
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<RingElement>) -> Result<ModuleElement, RingError> {
        if coeffs.len() != self.rank {
            return Err(RingError::DimensionMismatch { expected: self.rank, got: coeffs.len() });
        }
        if coeffs.iter().any(|a| !a.ring().same_as(&self.ring)) {
            return Err(RingError::ModuleMismatch);
        }
        Ok(ModuleElement { module: self.clone(), coeffs })
    }

    pub fn zero(self: &Arc<Self>) -> ModuleElement {
        ModuleElement { module: self.clone(), coeffs: vec![self.ring.zero(); self.rank] }
    }

    pub fn basis(self: &Arc<Self>, i: usize) -> ModuleElement {
        let mut m = self.zero();
        m.coeffs[i] = self.ring.one();
        m
    }

    /// Whether `coeffs` lies in the relation submodule, with ring cofactors of
    /// degree at most `degree_bound` (taken modulo the ideal).
    pub fn relation_member(&self, coeffs: &[RingElement], degree_bound: u32) -> (Verdict, Option<Vec<RingElement>>) {
        submodule_member(&self.ring, &self.relations, coeffs, degree_bound)
    }

    pub fn same_as(&self, other: &ModulePresentation) -> bool {
        std::ptr::eq(self, other)
            || (self.ring.same_as(&other.ring) && self.rank == other.rank && self.relations == other.relations)
    }
}

/// An element of a presented module, as a coefficient vector over the free part.
#[derive(Clone)]
pub struct ModuleElement {
    module: Arc<ModulePresentation>,
    coeffs: Vec<RingElement>,
}

impl ModuleElement {
    pub fn module(&self) -> &Arc<ModulePresentation> {
        &self.module
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert!(self.module.same_as(&other.module), "module elements from different presentations");
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        ModuleElement { module: self.module.clone(), coeffs }
    }

    pub fn neg(&self) -> ModuleElement {
        ModuleElement { module: self.module.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, a: &RingElement) -> ModuleElement {
        ModuleElement { module: self.module.clone(), coeffs: self.coeffs.iter().map(|c| a * c).collect() }
    }

    /// Whether the coefficient vectors agree before quotienting by relations.
    pub fn is_zero_vector(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    /// Verdict on `self = other` in the quotient module.
    pub fn equal(&self, other: &ModuleElement, degree_bound: u32) -> Verdict {
        let diff = self.add(&other.neg());
        self.module.relation_member(&diff.coeffs, degree_bound).0
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

/// Solve `Σ xₖ·columnₖ = target` for rational `x`, componentwise in the
/// monomial basis.
pub(crate) fn solve_combination(columns: &[Vec<Poly>], target: &[Poly]) -> Option<Vec<Rational>> {
    let mut rows: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut index = |i: usize, m: &Monomial| {
        let len = rows.len();
        *rows.entry((i, m.clone())).or_insert(len)
    };
    let mut entries = Vec::new();
    for (k, col) in columns.iter().enumerate() {
        for (i, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                entries.push((index(i, m), k, c.clone()));
            }
        }
    }
    let mut b_entries = Vec::new();
    for (i, p) in target.iter().enumerate() {
        for (m, c) in p.terms() {
            b_entries.push((index(i, m), c.clone()));
        }
    }
    let nrows = rows.len();
    let mut a = vec![vec![Rational::zero(); columns.len()]; nrows];
    for (r, k, c) in entries {
        a[r][k] = c;
    }
    let mut b = vec![Rational::zero(); nrows];
    for (r, c) in b_entries {
        b[r] = c;
    }
    linalg::solve(&a, &b, columns.len())
}

/// Standard monomials modulo the ring's ideal up to a degree.
pub(crate) fn standard_monomials(ring: &RingPresentation, degree: u32) -> Vec<Monomial> {
    let all = Monomial::all_up_to_degree(ring.n(), degree);
    match ring.groebner() {
        Some(b) => all.into_iter().filter(|m| b.is_standard(m)).collect(),
        None => all,
    }
}

fn polys_of(row: &[RingElement]) -> Option<Vec<Poly>> {
    row.iter().map(RingElement::to_poly).collect()
}

/// Membership of `target` in the submodule of `Cʳ` spanned by `relations`.
pub(crate) fn submodule_member(
    ring: &Ring,
    relations: &[Vec<RingElement>],
    target: &[RingElement],
    degree_bound: u32,
) -> (Verdict, Option<Vec<RingElement>>) {
    if target.iter().all(RingElement::is_zero) {
        return (Verdict::ProvedEqual, Some(vec![ring.zero(); relations.len()]));
    }
    let rel_polys: Option<Vec<Vec<Poly>>> = relations.iter().map(|r| polys_of(r)).collect();
    if let (true, Some(rel_polys)) = (ring.is_polynomial(), rel_polys) {
        // transcendental coefficients are handled one atom-product at a time
        let mut groups: BTreeMap<SmoothExpr, Vec<Poly>> = BTreeMap::new();
        for (i, a) in target.iter().enumerate() {
            for (t, monos) in a.rep().split_polynomial_part(ring.n()) {
                let p = Poly::from_terms(ring.n(), monos.into_iter().map(|(e, c)| (Monomial::from_exponents(e), c)));
                groups.entry(t).or_insert_with(|| vec![Poly::zero(ring.n()); target.len()])[i] = p;
            }
        }
        let all_polynomial = groups.len() == 1 && groups.keys().all(|t| t.is_one());
        let monos = standard_monomials(ring, degree_bound);
        let mut columns = Vec::new();
        for rel in &rel_polys {
            for m in &monos {
                columns.push(
                    rel.iter().map(|p| ring.reduce_poly(&p.mul_term(m, &Rational::from_integer(1.into())))).collect(),
                );
            }
        }
        let mut cofactors: Vec<SmoothExpr> = vec![SmoothExpr::zero(); relations.len()];
        let mut solved = true;
        for (t, comps) in &groups {
            let reduced: Vec<Poly> = comps.iter().map(|p| ring.reduce_poly(p)).collect();
            match solve_combination(&columns, &reduced) {
                Some(x) => {
                    for (j, h) in cofactors.iter_mut().enumerate() {
                        let p = Poly::from_terms(
                            ring.n(),
                            monos.iter().enumerate().map(|(k, m)| (m.clone(), x[j * monos.len() + k].clone())),
                        );
                        *h = &*h + &(t * &SmoothExpr::from_poly(&p));
                    }
                }
                None => {
                    solved = false;
                    break;
                }
            }
        }
        if solved {
            return (Verdict::ProvedEqual, Some(cofactors.into_iter().map(|h| ring.element(h)).collect()));
        }
        if all_polynomial {
            if let Some(w) = exact_fiber_witness(ring, &rel_polys, target) {
                return (Verdict::ProvedUnequal { witness: Some(w) }, None);
            }
            return (Verdict::NotMemberUpToDegree { degree: degree_bound }, None);
        }
    }
    match numeric_fiber_witness(ring, relations, target) {
        Some(v) => (v, None),
        None => (Verdict::Unknown { reason: "no cofactors found and no fiber separates the element".into() }, None),
    }
}

/// A rational zero-set point where `target(p)` leaves the span of the relation values.
fn exact_fiber_witness(ring: &Ring, relations: &[Vec<Poly>], target: &[RingElement]) -> Option<Vec<Rational>> {
    let target: Vec<Poly> = polys_of(target)?;
    let width = target.len();
    ring.rational_zero_points().iter().find_map(|p| {
        let rows: Vec<Vec<Rational>> =
            relations.iter().map(|r| r.iter().map(|q| super::eval_exact(q, p)).collect()).collect();
        let mut with_target = rows.clone();
        with_target.push(target.iter().map(|q| super::eval_exact(q, p)).collect());
        (linalg::rank(&with_target, width) > linalg::rank(&rows, width)).then(|| p.clone())
    })
}

fn numeric_fiber_witness(ring: &Ring, relations: &[Vec<RingElement>], target: &[RingElement]) -> Option<Verdict> {
    let samples = ring.samples().ok()?;
    let tol = ring.oracle().tolerance;
    let width = target.len();
    for p in samples {
        let eval = |a: &RingElement| a.rep().evaluate(p).ok();
        let Some(f): Option<Vec<f64>> = target.iter().map(eval).collect() else { continue };
        let Some(rows): Option<Vec<Vec<f64>>> = relations.iter().map(|r| r.iter().map(eval).collect()).collect() else {
            continue;
        };
        let residual = if rows.is_empty() {
            f.iter().map(|v| v * v).sum::<f64>().sqrt()
        } else {
            let a = DMatrix::from_fn(width, rows.len(), |i, j| rows[j][i]);
            let b = DVector::from_vec(f.clone());
            let svd = a.clone().svd(true, true);
            let Ok(x) = svd.solve(&b, 1e-9) else { continue };
            (a * x - b).norm()
        };
        if residual > tol.max(1e-9) * 10.0 {
            return Some(Verdict::NumericallyUnequal { witness: p.clone(), value: residual, seed: ring.oracle().seed });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::OracleConfig;

    #[test]
    fn free_module_membership() {
        let r = RingPresentation::free(2);
        let m = ModulePresentation::free(&r, 2);
        let e = m.element(vec![r.coordinate(0), r.zero()]).unwrap();
        assert!(e.equal(&m.zero(), 4).refuted());
        assert!(e.equal(&e, 4).is_proved_equal());
    }

    #[test]
    fn relation_module_over_cross() {
        let r = RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap();
        let rel = vec![r.coordinate(1), r.coordinate(0)];
        let m = ModulePresentation::new(&r, 2, vec![rel]).unwrap();
        let twice = m.element(vec![r.parse_element("2*x2 + x1*x2^2").unwrap(), r.parse_element("2*x1").unwrap()]).unwrap();
        let (v, h) = m.relation_member(twice.coeffs(), 4);
        assert!(v.is_proved_equal());
        assert_eq!(h.unwrap()[0].rep(), &SmoothExpr::int(2));
        let xdy = m.element(vec![r.zero(), r.coordinate(0)]).unwrap();
        assert_eq!(m.relation_member(xdy.coeffs(), 6).0, Verdict::NotMemberUpToDegree { degree: 6 });
        let dx = m.basis(0);
        assert!(matches!(m.relation_member(dx.coeffs(), 6).0, Verdict::ProvedUnequal { .. }));
    }

    #[test]
    fn transcendental_coefficients_split() {
        let r = RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap();
        let m = ModulePresentation::new(&r, 2, vec![vec![r.coordinate(1), r.coordinate(0)]]).unwrap();
        let e = m
            .element(vec![r.parse_element("sin(x1)*x2").unwrap(), r.parse_element("sin(x1)*x1").unwrap()])
            .unwrap();
        assert!(m.relation_member(e.coeffs(), 2).0.is_proved_equal());
    }
}
