use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RingError, RingPresentation};
use crate::expr::SmoothExpr;

const RESIDUAL: f64 = 1e-13;
const NEWTON_STEPS: usize = 120;
const ATTEMPTS_PER_POINT: usize = 40;

/// Seeded points on the zero set inside `region`.
///
/// Random starts in the box are projected onto the zero set by damped
/// minimum-norm Newton steps; a start is kept when every generator is below
/// `1e-13` in absolute value and the point is still in the box. The free ring
/// gets uniform points.
pub fn sample_zero_set(
    ring: &RingPresentation,
    count: usize,
    region: &[[f64; 2]],
    seed: u64,
) -> Result<Vec<Vec<f64>>, RingError> {
    let n = ring.n();
    if region.len() != n {
        return Err(RingError::DimensionMismatch { expected: n, got: region.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let uniform = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        region.iter().map(|[lo, hi]| rng.random_range(*lo..=*hi)).collect()
    };
    let gens = ring.generators();
    if gens.is_empty() {
        return Ok((0..count).map(|_| uniform(&mut rng)).collect());
    }
    let grads: Vec<Vec<SmoothExpr>> = gens.iter().map(|g| g.gradient(n)).collect();
    let mut out = Vec::with_capacity(count);
    let budget = count.max(1) * ATTEMPTS_PER_POINT;
    for _ in 0..budget {
        if out.len() >= count {
            break;
        }
        let start = uniform(&mut rng);
        if let Some(p) = project(gens, &grads, start) {
            let inside = p.iter().zip(region).all(|(x, [lo, hi])| *x >= lo - 1e-9 && *x <= hi + 1e-9);
            if inside {
                out.push(p);
            }
        }
    }
    if out.len() < count {
        return Err(RingError::SamplingFailed { found: out.len(), requested: count });
    }
    Ok(out)
}

fn residual(gens: &[SmoothExpr], p: &[f64]) -> Option<DVector<f64>> {
    let vals: Option<Vec<f64>> = gens.iter().map(|g| g.evaluate(p).ok()).collect();
    vals.filter(|v| v.iter().all(|x| x.is_finite())).map(DVector::from_vec)
}

/// Levenberg–Marquardt style projection onto `{g = 0}`.
fn project(gens: &[SmoothExpr], grads: &[Vec<SmoothExpr>], mut p: Vec<f64>) -> Option<Vec<f64>> {
    let n = p.len();
    let k = gens.len();
    let mut r = residual(gens, &p)?;
    let mut lambda = 1e-6;
    for _ in 0..NEWTON_STEPS {
        if r.amax() <= RESIDUAL {
            return Some(p);
        }
        let mut jac = DMatrix::zeros(k, n);
        for (j, row) in grads.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                jac[(j, i)] = e.evaluate(&p).ok()?;
            }
        }
        let jjt = &jac * jac.transpose();
        let mut improved = false;
        for _ in 0..30 {
            let damped = &jjt + DMatrix::identity(k, k) * lambda;
            let Some(y) = damped.lu().solve(&r) else {
                lambda *= 10.0;
                continue;
            };
            let step = jac.transpose() * y;
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(x, s)| x - s).collect();
            if let Some(rt) = residual(gens, &trial) {
                if rt.norm() < r.norm() {
                    p = trial;
                    r = rt;
                    lambda = (lambda * 0.1).max(1e-15);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    (r.amax() <= RESIDUAL).then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::OracleConfig;

    #[test]
    fn cross_samples_hit_both_axes() {
        let r = RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).unwrap();
        let pts = sample_zero_set(&r, 40, &[[-2.0, 2.0]; 2], 7).unwrap();
        assert_eq!(pts.len(), 40);
        assert!(pts.iter().all(|p| (p[0] * p[1]).abs() <= 1e-10));
        assert!(pts.iter().any(|p| p[0].abs() > 0.1));
        assert!(pts.iter().any(|p| p[1].abs() > 0.1));
    }

    #[test]
    fn circle_samples() {
        let r = RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).unwrap();
        let pts = sample_zero_set(&r, 25, &[[-2.0, 2.0]; 2], 1).unwrap();
        assert!(pts.iter().all(|p| (p[0] * p[0] + p[1] * p[1] - 1.0).abs() <= 1e-10));
    }

    #[test]
    fn deterministic_and_free() {
        let r = RingPresentation::free(3);
        let a = sample_zero_set(&r, 5, &[[0.0, 1.0]; 3], 3).unwrap();
        let b = sample_zero_set(&r, 5, &[[0.0, 1.0]; 3], 3).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().flatten().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn empty_zero_set_fails() {
        let r = RingPresentation::parse(1, &["x1^2 + 1"], OracleConfig::default()).unwrap();
        assert!(matches!(
            sample_zero_set(&r, 3, &[[-2.0, 2.0]], 0),
            Err(RingError::SamplingFailed { found: 0, .. })
        ));
    }
}
