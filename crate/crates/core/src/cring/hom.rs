use std::fmt;

use super::{Ring, RingElement, RingError};
use crate::expr::SmoothExpr;

/// Homomorphism of presented rings, fixed by the images of the source coordinates.
#[derive(Clone)]
pub struct RingHom {
    source: Ring,
    target: Ring,
    images: Vec<RingElement>,
}

impl RingHom {
    /// Checks that every source generator is sent to zero in the target.
    pub fn new(source: &Ring, target: &Ring, images: Vec<RingElement>) -> Result<Self, RingError> {
        if images.len() != source.n() {
            return Err(RingError::ArityMismatch { expected: source.n(), got: images.len() });
        }
        if images.iter().any(|a| !a.ring().same_as(target)) {
            return Err(RingError::PresentationMismatch);
        }
        let args: Vec<SmoothExpr> = images.iter().map(|a| a.rep().clone()).collect();
        for (index, g) in source.generators().iter().enumerate() {
            let pushed = crate::expr::compose(g, &args)?;
            let verdict = target.is_zero_verdict(&pushed);
            if !verdict.holds() {
                return Err(RingError::IllDefinedHom { index, verdict });
            }
        }
        Ok(RingHom { source: source.clone(), target: target.clone(), images })
    }

    /// Skip the generator check; the caller has verified it another way.
    pub(crate) fn new_unchecked(source: &Ring, target: &Ring, images: Vec<RingElement>) -> Self {
        RingHom { source: source.clone(), target: target.clone(), images }
    }

    pub fn parse(source: &Ring, target: &Ring, images: &[&str]) -> Result<Self, RingError> {
        let images = images.iter().map(|s| target.parse_element(s)).collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    pub fn identity(ring: &Ring) -> Self {
        RingHom { source: ring.clone(), target: ring.clone(), images: ring.coordinates() }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[RingElement] {
        &self.images
    }

    /// `φ(a) = a(φ(x₁), …, φ(xₙ))`.
    pub fn apply(&self, a: &RingElement) -> RingElement {
        assert!(a.ring().same_as(&self.source), "element is not in the source ring");
        self.apply_expr(a.rep())
    }

    /// Image of an ambient expression over the source variables.
    pub fn apply_expr(&self, e: &SmoothExpr) -> RingElement {
        let args: Vec<SmoothExpr> = self.images.iter().map(|a| a.rep().clone()).collect();
        self.target.element(e.substitute(&args))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &RingHom) -> Result<RingHom, RingError> {
        if !first.target.same_as(&self.source) {
            return Err(RingError::PresentationMismatch);
        }
        let images = first.images.iter().map(|a| self.apply(a)).collect();
        Ok(RingHom { source: first.source.clone(), target: self.target.clone(), images })
    }
}

impl fmt::Debug for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingHom{:?}", self.images)
    }
}
