use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BasicOpen, GeometryError, Section, Space};
use crate::expr::SmoothExpr;
use crate::scalar::rational_from_f64;

/// A closed set known through sample points.
#[derive(Clone, Debug, Default)]
pub struct ClosedSet {
    pub points: Vec<Vec<f64>>,
}

impl ClosedSet {
    pub fn from_points(points: Vec<Vec<f64>>) -> Self {
        ClosedSet { points }
    }

    /// Rejection samples of `{p in box : h(p) >= 0 for every h}`.
    pub fn sample_where(conds: &[SmoothExpr], region: &[[f64; 2]], count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::new();
        for _ in 0..count.saturating_mul(200) {
            if points.len() >= count {
                break;
            }
            let p: Vec<f64> = region.iter().map(|[lo, hi]| rng.random_range(*lo..=*hi)).collect();
            if conds.iter().all(|h| h.evaluate(&p).is_ok_and(|v| v >= 0.0)) {
                points.push(p);
            }
        }
        ClosedSet { points }
    }

    /// Carrier samples outside an open set.
    pub fn complement_of(open: &BasicOpen) -> Self {
        let points = open.space().samples().iter().filter(|p| !open.contains(p)).cloned().collect();
        ClosedSet { points }
    }
}

fn constant(x: f64) -> SmoothExpr {
    SmoothExpr::constant(rational_from_f64(x).expect("finite value"))
}

/// `ρ₀(2 − h/δ)`: zero where `h ≤ 0`, one where `h ≥ δ`, positive exactly where `h > 0`.
///
/// Written this way rather than as `1 − ρ₀(1 + h/δ)` so that small positive
/// values near `h = 0` do not cancel to zero in floating point.
pub fn smooth_step_cutoff(h: &SmoothExpr, delta: f64) -> SmoothExpr {
    let arg = SmoothExpr::int(2) - h * &constant(1.0 / delta);
    arg.rho0().normalize()
}

/// Bump `τ(y) = ρ₀(1 + (|y − x|² − r_in²)/(r_out² − r_in²))`: one on the
/// closed ball of radius `r_in`, zero outside the open ball of radius `r_out`.
///
/// Every sample of `closed` must lie at distance at least `r_out` from `x`.
pub fn bump(x: &[f64], closed: &ClosedSet, r_in: f64, r_out: f64) -> Result<SmoothExpr, GeometryError> {
    if !(r_in >= 0.0 && r_in < r_out && r_out.is_finite()) {
        return Err(GeometryError::BadRadii { r_in, r_out });
    }
    for p in &closed.points {
        if p.len() != x.len() {
            return Err(GeometryError::DimensionMismatch { expected: x.len(), got: p.len() });
        }
        let distance = p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if distance < r_out * (1.0 - 1e-12) {
            return Err(GeometryError::PointTooClose { witness: p.clone(), distance, r_out });
        }
    }
    let dist2 = SmoothExpr::add_all(
        x.iter().enumerate().map(|(i, &xi)| (SmoothExpr::var(i) - constant(xi)).powi(2)).collect(),
    );
    let scale = constant(1.0 / (r_out * r_out - r_in * r_in));
    let arg = SmoothExpr::one() + (dist2 - constant(r_in * r_in)) * scale;
    Ok(arg.rho0().normalize())
}

/// A bump on a zero-set space, as a global section.
pub fn bump_on_space(
    space: &Space,
    closed: &ClosedSet,
    x: &[f64],
    r_in: f64,
    r_out: f64,
) -> Result<Section, GeometryError> {
    if x.len() != space.n() {
        return Err(GeometryError::DimensionMismatch { expected: space.n(), got: x.len() });
    }
    Ok(Section::new(space.whole(), bump(x, closed, r_in, r_out)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn one_dimensional_example() {
        let closed = ClosedSet::sample_where(&[parse("x1^2 - 4", 1).unwrap()], &[[-5.0, 5.0]], 50, 1);
        let tau = bump(&[0.0], &closed, 1.0, 2.0).unwrap();
        assert_eq!(tau.evaluate(&[0.0]).unwrap(), 1.0);
        assert_eq!(tau.evaluate(&[3.0]).unwrap(), 0.0);
        assert_eq!(tau.evaluate(&[-3.0]).unwrap(), 0.0);
        assert!(closed.points.iter().all(|p| tau.evaluate(p).unwrap() == 0.0));
    }

    #[test]
    fn too_close_is_rejected() {
        let closed = ClosedSet::from_points(vec![vec![1.5]]);
        assert!(matches!(bump(&[0.0], &closed, 1.0, 2.0), Err(GeometryError::PointTooClose { .. })));
        assert!(matches!(bump(&[0.0], &ClosedSet::default(), 2.0, 1.0), Err(GeometryError::BadRadii { .. })));
    }

    #[test]
    fn cutoff_signs() {
        let h = parse("x1", 1).unwrap();
        let c = smooth_step_cutoff(&h, 0.5);
        assert_eq!(c.evaluate(&[-0.1]).unwrap(), 0.0);
        assert_eq!(c.evaluate(&[0.7]).unwrap(), 1.0);
        assert!(c.evaluate(&[0.01]).unwrap() > 0.0);
    }
}
