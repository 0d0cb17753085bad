use super::{Ring, RingElement, RingError};

/// Evaluation functional `ev_p` at an (approximate) point of the zero set.
#[derive(Clone, Debug)]
pub struct RPoint {
    ring: Ring,
    point: Vec<f64>,
}

impl RPoint {
    /// Fails when some generator exceeds the oracle tolerance at `point`.
    pub fn new(ring: &Ring, point: Vec<f64>) -> Result<Self, RingError> {
        if point.len() != ring.n() {
            return Err(RingError::DimensionMismatch { expected: ring.n(), got: point.len() });
        }
        let tol = ring.oracle().tolerance;
        for (index, g) in ring.generators().iter().enumerate() {
            let value = g.evaluate(&point)?;
            if !(value.abs() <= tol) {
                return Err(RingError::OffZeroSet { index, value });
            }
        }
        Ok(RPoint { ring: ring.clone(), point })
    }

    pub fn point(&self) -> &[f64] {
        &self.point
    }

    pub fn eval(&self, a: &RingElement) -> Result<f64, RingError> {
        if !a.ring().same_as(&self.ring) {
            return Err(RingError::PresentationMismatch);
        }
        Ok(a.rep().evaluate(&self.point)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{OracleConfig, RingPresentation};

    #[test]
    fn cross_points() {
        let r = RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap();
        let p = RPoint::new(&r, vec![0.0, 2.0]).unwrap();
        assert_eq!(p.eval(&r.coordinate(1)).unwrap(), 2.0);
        assert!(matches!(RPoint::new(&r, vec![1.0, 1.0]), Err(RingError::OffZeroSet { index: 0, .. })));
    }
}
