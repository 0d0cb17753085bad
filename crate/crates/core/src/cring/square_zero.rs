use std::sync::Arc;

use super::{ModuleElement, ModulePresentation, Ring, RingElement, RingError, Verdict};
use crate::expr::SmoothExpr;

/// The square-zero extension `C ⊕ M` with `(0, m)(0, m′) = 0`.
#[derive(Clone, Debug)]
pub struct SquareZeroRing {
    base: Ring,
    module: Arc<ModulePresentation>,
}

/// A pair `(a, m)`.
#[derive(Clone, Debug)]
pub struct SquareZeroElement {
    pub a: RingElement,
    pub m: ModuleElement,
}

impl SquareZeroRing {
    pub fn new(base: &Ring, module: &Arc<ModulePresentation>) -> Result<Self, RingError> {
        if !module.ring().same_as(base) {
            return Err(RingError::ModuleMismatch);
        }
        Ok(SquareZeroRing { base: base.clone(), module: module.clone() })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn module(&self) -> &Arc<ModulePresentation> {
        &self.module
    }

    pub fn pair(&self, a: RingElement, m: ModuleElement) -> Result<SquareZeroElement, RingError> {
        if !a.ring().same_as(&self.base) {
            return Err(RingError::PresentationMismatch);
        }
        if !m.module().same_as(&self.module) {
            return Err(RingError::ModuleMismatch);
        }
        Ok(SquareZeroElement { a, m })
    }

    pub fn one(&self) -> SquareZeroElement {
        SquareZeroElement { a: self.base.one(), m: self.module.zero() }
    }

    pub fn zero(&self) -> SquareZeroElement {
        SquareZeroElement { a: self.base.zero(), m: self.module.zero() }
    }

    /// `g((a₁,m₁),…,(a_k,m_k)) = (g(a), Σᵢ (∂ᵢg)(a)·mᵢ)`.
    pub fn apply_op(&self, g: &SmoothExpr, elts: &[SquareZeroElement]) -> Result<SquareZeroElement, RingError> {
        let k = elts.len();
        if g.arity() > k {
            return Err(RingError::ArityMismatch { expected: g.arity(), got: k });
        }
        let args: Vec<RingElement> = elts.iter().map(|e| e.a.clone()).collect();
        let a = self.base.apply_op(g, &args)?;
        let mut m = self.module.zero();
        for (i, e) in elts.iter().enumerate() {
            let di = g.partial_unchecked(i);
            if di.normalize().is_zero() {
                continue;
            }
            let coeff = self.base.apply_op(&di, &args)?;
            m = m.add(&e.m.scale(&coeff));
        }
        Ok(SquareZeroElement { a, m })
    }

    pub fn mul(&self, x: &SquareZeroElement, y: &SquareZeroElement) -> SquareZeroElement {
        SquareZeroElement { a: &x.a * &y.a, m: x.m.scale(&y.a).add(&y.m.scale(&x.a)) }
    }

    pub fn add(&self, x: &SquareZeroElement, y: &SquareZeroElement) -> SquareZeroElement {
        SquareZeroElement { a: &x.a + &y.a, m: x.m.add(&y.m) }
    }

    /// Equality of both components; the module part is decided up to `degree_bound`.
    pub fn equal(&self, x: &SquareZeroElement, y: &SquareZeroElement, degree_bound: u32) -> Result<Verdict, RingError> {
        let va = self.base.equal(&x.a, &y.a)?;
        if !va.holds() {
            return Ok(va);
        }
        let vm = x.m.equal(&y.m, degree_bound);
        Ok(if vm.is_proved_equal() { va } else { vm })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{OracleConfig, RingPresentation};
    use crate::parse;

    fn setup() -> SquareZeroRing {
        let r = RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap();
        let m = ModulePresentation::new(&r, 2, vec![vec![r.coordinate(1), r.coordinate(0)]]).unwrap();
        SquareZeroRing::new(&r, &m).unwrap()
    }

    #[test]
    fn nilpotent_module_part() {
        let s = setup();
        let r = s.base().clone();
        let m1 = s.module().element(vec![r.coordinate(0), r.one()]).unwrap();
        let m2 = s.module().element(vec![r.parse_element("x2^2").unwrap(), r.zero()]).unwrap();
        let p = s.mul(&s.pair(r.zero(), m1).unwrap(), &s.pair(r.zero(), m2).unwrap());
        assert!(p.a.is_zero() && p.m.is_zero_vector());
    }

    #[test]
    fn unit_and_product_formula() {
        let s = setup();
        let r = s.base().clone();
        let x = s.pair(r.parse_element("x1 + 3").unwrap(), s.module().basis(0)).unwrap();
        let y = s.pair(r.parse_element("sin(x2)").unwrap(), s.module().basis(1)).unwrap();
        let u = s.mul(&s.one(), &x);
        assert!(s.equal(&u, &x, 2).unwrap().is_proved_equal());
        let via_op = s.apply_op(&parse("x1*x2", 2).unwrap(), &[x.clone(), y.clone()]).unwrap();
        let direct = s.mul(&x, &y);
        assert_eq!(via_op.a, direct.a);
        assert_eq!(via_op.m.coeffs(), direct.m.coeffs());
    }

    #[test]
    fn mismatched_module_rejected() {
        let s = setup();
        let other = RingPresentation::free(2);
        let m = ModulePresentation::free(&other, 1);
        assert!(matches!(SquareZeroRing::new(s.base(), &m), Err(RingError::ModuleMismatch)));
    }
}
