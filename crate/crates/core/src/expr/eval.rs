use super::{ExprError, Node, Prim, SmoothExpr};
use crate::scalar::Scalar;

impl SmoothExpr {
    /// Value of the expression at `point`.
    pub fn evaluate<T: Scalar>(&self, point: &[T]) -> Result<T, ExprError> {
        let needed = self.arity();
        if needed > point.len() {
            return Err(ExprError::DimensionMismatch { needed, got: point.len() });
        }
        self.eval_unchecked(point)
    }

    fn eval_unchecked<T: Scalar>(&self, p: &[T]) -> Result<T, ExprError> {
        Ok(match self.node() {
            Node::Const(c) => T::from_rational(c),
            Node::Pi => T::from_f64(std::f64::consts::PI).expect("pi"),
            Node::Var(i) => p[*i],
            Node::Add(v) => {
                let mut acc = T::zero();
                for t in v {
                    acc = acc + t.eval_unchecked(p)?;
                }
                acc
            }
            Node::Mul(v) => {
                let mut acc = T::one();
                for t in v {
                    acc = acc * t.eval_unchecked(p)?;
                }
                acc
            }
            Node::Neg(a) => -a.eval_unchecked(p)?,
            Node::Pow(a, k) => a.eval_unchecked(p)?.powi(*k as i32),
            Node::Apply(prim, a) => {
                let v = a.eval_unchecked(p)?;
                match prim {
                    Prim::Sin => v.sin(),
                    Prim::Cos => v.cos(),
                    Prim::Exp => v.exp(),
                    Prim::Recip => {
                        if v == T::zero() {
                            return Err(ExprError::DivisionByZero {
                                point: p.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
                            });
                        }
                        T::one() / v
                    }
                    Prim::Rho0(k) => rho0_derivative(*k, v),
                }
            }
            Node::Compose(g, args) => {
                let vals: Result<Vec<T>, _> = args.iter().map(|a| a.eval_unchecked(p)).collect();
                g.evaluate(&vals?)?
            }
        })
    }
}

/// Truncated Taylor series `Σ c_j ε^j` around a base point.
type Jet<T> = Vec<T>;

fn jet_recip<T: Scalar>(a: &Jet<T>) -> Jet<T> {
    let n = a.len();
    let mut r = vec![T::zero(); n];
    r[0] = T::one() / a[0];
    for k in 1..n {
        let mut s = T::zero();
        for j in 1..=k {
            s = s + a[j] * r[k - j];
        }
        r[k] = -s * r[0];
    }
    r
}

fn jet_mul<T: Scalar>(a: &Jet<T>, b: &Jet<T>) -> Jet<T> {
    let n = a.len();
    let mut r = vec![T::zero(); n];
    for i in 0..n {
        for j in 0..n - i {
            r[i + j] = r[i + j] + a[i] * b[j];
        }
    }
    r
}

fn jet_exp<T: Scalar>(c: &Jet<T>) -> Jet<T> {
    let n = c.len();
    let mut e = vec![T::zero(); n];
    e[0] = c[0].exp();
    for k in 1..n {
        let mut s = T::zero();
        for j in 1..=k {
            s = s + T::from_usize(j).expect("usize") * c[j] * e[k - j];
        }
        e[k] = s / T::from_usize(k).expect("usize");
    }
    e
}

/// Jet of the flat function `f(s) = exp(-1/s)` for `s > 0`, `0` otherwise.
fn flat_jet<T: Scalar>(s: &Jet<T>) -> Jet<T> {
    if s[0] <= T::zero() {
        return vec![T::zero(); s.len()];
    }
    let inv = jet_recip(s);
    let neg: Jet<T> = inv.into_iter().map(|v| -v).collect();
    jet_exp(&neg)
}

/// `k`-th derivative of the smooth step `ρ₀`, where
/// `ρ₀(t) = f(2 - t) / (f(2 - t) + f(t - 1))` with `f(s) = exp(-1/s)` for `s > 0`.
/// `ρ₀ = 1` on `t ≤ 1`, `ρ₀ = 0` on `t ≥ 2`, strictly decreasing in between.
pub fn rho0_derivative<T: Scalar>(k: u32, t: T) -> T {
    let one = T::one();
    let two = one + one;
    if t <= one {
        return if k == 0 { one } else { T::zero() };
    }
    if t >= two {
        return T::zero();
    }
    let len = k as usize + 1;
    let mut u = vec![T::zero(); len];
    let mut v = vec![T::zero(); len];
    u[0] = two - t;
    v[0] = t - one;
    if len > 1 {
        u[1] = -one;
        v[1] = one;
    }
    let fu = flat_jet(&u);
    let fv = flat_jet(&v);
    let denom: Jet<T> = fu.iter().zip(&fv).map(|(a, b)| *a + *b).collect();
    let q = jet_mul(&fu, &jet_recip(&denom));
    let mut fact = one;
    for j in 2..=k {
        fact = fact * T::from_u32(j).expect("u32");
    }
    q[len - 1] * fact
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn product_at_point() {
        assert_eq!((x(0) * x(1)).evaluate(&[2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(SmoothExpr::zero().exp().evaluate::<f64>(&[]).unwrap(), 1.0);
    }

    #[test]
    fn smooth_step_values() {
        assert_eq!(x(0).rho0().evaluate(&[0.0]).unwrap(), 1.0);
        assert_eq!(x(0).rho0().evaluate(&[3.0]).unwrap(), 0.0);
        let mid = x(0).rho0().evaluate(&[1.5f64]).unwrap();
        assert!((mid - 0.5).abs() < 1e-15);
        assert!(rho0_derivative(0, 1.2f64) > rho0_derivative(0, 1.8f64));
    }

    #[test]
    fn smooth_step_derivatives_match_finite_differences() {
        for &t in &[1.1f64, 1.37, 1.5, 1.83] {
            for k in 0..3 {
                let h = 1e-5;
                let fd = (rho0_derivative(k, t + h) - rho0_derivative(k, t - h)) / (2.0 * h);
                let exact = rho0_derivative(k + 1, t);
                assert!((fd - exact).abs() <= 1e-5 * (1.0 + exact.abs()), "k={k} t={t}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn recip_zero_is_an_error() {
        let e = x(0).recip();
        assert!(matches!(e.evaluate(&[0.0]), Err(ExprError::DivisionByZero { .. })));
        assert_eq!(e.evaluate(&[4.0]).unwrap(), 0.25);
    }

    #[test]
    fn dimension_checked() {
        assert!(matches!(x(2).evaluate(&[1.0, 2.0]), Err(ExprError::DimensionMismatch { .. })));
    }

    #[test]
    fn single_precision_instance() {
        let v: f32 = (x(0).sin() + x(1).exp()).evaluate(&[0.5f32, 0.25]).unwrap();
        assert!((v - (0.5f32.sin() + 0.25f32.exp())).abs() < 1e-6);
    }
}
