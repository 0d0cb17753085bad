use super::{BasicOpen, GeometryError, Section, Space};
use crate::cring::RingHom;
use crate::expr::SmoothExpr;

/// A smooth map between zero-set spaces, with its pullback `f_#(h) = h ∘ f`.
#[derive(Clone, Debug)]
pub struct RingedSpaceMap {
    source: Space,
    target: Space,
    components: Vec<SmoothExpr>,
    hom: RingHom,
}

impl RingedSpaceMap {
    /// Checks that source samples land on the target zero set and that the
    /// target generators pull back to zero in the source ring.
    pub fn new(source: &Space, target: &Space, components: Vec<SmoothExpr>) -> Result<Self, GeometryError> {
        if components.len() != target.n() {
            return Err(GeometryError::DimensionMismatch { expected: target.n(), got: components.len() });
        }
        let tol = target.ring().oracle().tolerance;
        for p in source.samples() {
            let q = components.iter().map(|c| c.evaluate(p)).collect::<Result<Vec<f64>, _>>()?;
            for g in target.ring().generators() {
                let value = g.evaluate(&q)?;
                if !(value.abs() <= tol) {
                    return Err(GeometryError::OffTarget { witness: p.clone(), value });
                }
            }
        }
        let images = components.iter().map(|c| source.ring().element(c.clone())).collect();
        let hom = RingHom::new(target.ring(), source.ring(), images)?;
        Ok(RingedSpaceMap { source: source.clone(), target: target.clone(), components, hom })
    }

    pub fn parse(source: &Space, target: &Space, components: &[&str]) -> Result<Self, GeometryError> {
        let comps = components.iter().map(|s| crate::parse(s, source.n())).collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, comps)
    }

    pub fn identity(space: &Space) -> Self {
        let comps = (0..space.n()).map(SmoothExpr::var).collect();
        Self::new(space, space, comps).expect("identity map")
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn components(&self) -> &[SmoothExpr] {
        &self.components
    }

    /// The ring map on global functions, target ring to source ring.
    pub fn hom(&self) -> &RingHom {
        &self.hom
    }

    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>, GeometryError> {
        Ok(self.components.iter().map(|c| c.evaluate(p)).collect::<Result<Vec<f64>, _>>()?)
    }

    /// Preimage of an open set of the target.
    pub fn preimage(&self, v: &BasicOpen) -> BasicOpen {
        let mut out: Option<BasicOpen> = None;
        for clause in v.clauses() {
            let mut o = self.source.whole();
            for h in clause {
                o = o.intersect(&self.source.positivity(h.substitute(&self.components)));
            }
            out = Some(match out {
                Some(acc) => acc.union(&o),
                None => o,
            });
        }
        out.unwrap_or_else(|| self.source.positivity(SmoothExpr::int(-1)))
    }

    /// `f_#(s) = s ∘ f` on the preimage of the section's open.
    pub fn pullback_section(&self, s: &Section) -> Result<Section, GeometryError> {
        if !std::sync::Arc::ptr_eq(s.open.space(), &self.target) {
            return Err(GeometryError::SpaceMismatch);
        }
        Ok(Section::new(self.preimage(&s.open), s.rep.substitute(&self.components)))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &RingedSpaceMap) -> Result<RingedSpaceMap, GeometryError> {
        if !std::sync::Arc::ptr_eq(&first.target, &self.source) {
            return Err(GeometryError::SpaceMismatch);
        }
        let components = self.components.iter().map(|c| c.substitute(&first.components).normalize()).collect();
        RingedSpaceMap::new(&first.source, &self.target, components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{OracleConfig, RingPresentation};
    use crate::geometry::DiffSpace;

    fn space(gens: &[&str]) -> Space {
        let r = RingPresentation::parse(2, gens, OracleConfig::default()).unwrap();
        DiffSpace::new(&r, vec![[-2.0, 2.0]; 2], 60, 5).unwrap()
    }

    #[test]
    fn axis_inclusion() {
        let axis = space(&["x2"]);
        let cross = space(&["x1*x2"]);
        let f = RingedSpaceMap::parse(&axis, &cross, &["x1", "0"]).unwrap();
        let s = Section::new(cross.whole(), crate::parse("x2", 2).unwrap());
        assert!(f.pullback_section(&s).unwrap().rep.is_zero());
        let bad = RingedSpaceMap::parse(&axis, &cross, &["x1", "1"]);
        assert!(matches!(bad, Err(GeometryError::OffTarget { .. })));
    }

    #[test]
    fn identity_and_composition() {
        let circle = space(&["x1^2 + x2^2 - 1"]);
        let id = RingedSpaceMap::identity(&circle);
        let s = Section::new(circle.parse_open(&["x1"]).unwrap(), crate::parse("x1*x2", 2).unwrap());
        let back = id.pullback_section(&s).unwrap();
        assert_eq!(back.rep, s.rep);
        let rot = RingedSpaceMap::parse(&circle, &circle, &["3/5*x1 - 4/5*x2", "4/5*x1 + 3/5*x2"]).unwrap();
        let dbl = RingedSpaceMap::parse(&circle, &circle, &["x1^2 - x2^2", "2*x1*x2"]).unwrap();
        let comp = dbl.after(&rot).unwrap();
        let lhs = comp.pullback_section(&s).unwrap();
        let rhs = rot.pullback_section(&dbl.pullback_section(&s).unwrap()).unwrap();
        for p in circle.samples() {
            assert_eq!(lhs.open.contains(p), rhs.open.contains(p));
            assert!((lhs.eval(p).unwrap() - rhs.eval(p).unwrap()).abs() <= 1e-12);
            let q = comp.apply(p).unwrap();
            assert!((lhs.eval(p).unwrap() - s.eval(&q).unwrap()).abs() <= 1e-12);
        }
    }
}
