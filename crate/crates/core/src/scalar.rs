//! Scalar traits shared by the exact and floating-point layers.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, ToPrimitive, Zero};

/// Floating-point scalar used by evaluation, sampling and quadrature: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an exact rational.
    fn from_rational(q: &BigRational) -> Self {
        Self::from_f64(q.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(Self::nan)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Coefficient field for polynomials and linear solves.
///
/// Exact work uses [`BigRational`]; the `f64` instance exists for quick
/// numerical experiments and treats tiny pivots as zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Whether the value should be treated as zero when pivoting.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Field for BigRational {}

impl Field for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() < 1e-12
    }
}

/// Exact rational from a finite `f64` (binary expansion, no rounding).
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Nearest rational with denominator at most `max_den`, via continued fractions.
pub fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x.abs();
    for _ in 0..64 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i64;
        let p2 = a.checked_mul(p1).and_then(|t| t.checked_add(p0));
        let q2 = a.checked_mul(q1).and_then(|t| t.checked_add(q0));
        let (Some(p2), Some(q2)) = (p2, q2) else { break };
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let r = BigRational::new(p1.into(), q1.into());
    Some(if x < 0.0 { -r } else { r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approx_recovers_simple_fractions() {
        let r = rational_approx(0.6, 100).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 5.into()));
        let r = rational_approx(-0.25, 100).unwrap();
        assert_eq!(r, BigRational::new((-1).into(), 4.into()));
        assert_eq!(rational_approx(1e-18, 1000).unwrap(), BigRational::zero());
    }

    #[test]
    fn from_rational_is_close() {
        let q = BigRational::new(1.into(), 3.into());
        assert!((f64::from_rational(&q) - 1.0 / 3.0).abs() < 1e-16);
        assert!((f32::from_rational(&q) - 1.0f32 / 3.0).abs() < 1e-7);
    }
}
