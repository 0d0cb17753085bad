use super::{ExprError, Node, Prim, SmoothExpr};

/// Chain rule applied structurally; the result is not normalized.
fn diff(e: &SmoothExpr, i: usize) -> SmoothExpr {
    match e.node() {
        Node::Const(_) | Node::Pi => SmoothExpr::zero(),
        Node::Var(j) => {
            if *j == i {
                SmoothExpr::one()
            } else {
                SmoothExpr::zero()
            }
        }
        Node::Add(v) => SmoothExpr::add_all(v.iter().map(|t| diff(t, i)).collect()),
        Node::Mul(v) => {
            let mut terms = Vec::with_capacity(v.len());
            for k in 0..v.len() {
                let dk = diff(&v[k], i);
                if dk.is_zero() {
                    continue;
                }
                let mut factors: Vec<SmoothExpr> = Vec::with_capacity(v.len());
                for (l, f) in v.iter().enumerate() {
                    factors.push(if l == k { dk.clone() } else { f.clone() });
                }
                terms.push(SmoothExpr::mul_all(factors));
            }
            SmoothExpr::add_all(terms)
        }
        Node::Neg(a) => -diff(a, i),
        Node::Pow(a, k) => match k {
            0 => SmoothExpr::zero(),
            1 => diff(a, i),
            _ => SmoothExpr::mul_all(vec![SmoothExpr::int(*k as i64), a.powi(k - 1), diff(a, i)]),
        },
        Node::Apply(p, a) => {
            let da = diff(a, i);
            if da.is_zero() {
                return SmoothExpr::zero();
            }
            let outer = match p {
                Prim::Sin => a.cos(),
                Prim::Cos => -a.sin(),
                Prim::Exp => a.exp(),
                Prim::Recip => -a.recip().powi(2),
                Prim::Rho0(k) => SmoothExpr::apply(Prim::Rho0(k + 1), a.clone()),
            };
            &outer * &da
        }
        Node::Compose(g, args) => {
            let mut terms = Vec::new();
            for (j, arg) in args.iter().enumerate() {
                let da = diff(arg, i);
                if da.is_zero() {
                    continue;
                }
                let dg = diff(g, j);
                terms.push(&SmoothExpr::compose_node(&dg, args.clone()) * &da);
            }
            SmoothExpr::add_all(terms)
        }
    }
}

impl SmoothExpr {
    /// Exact symbolic partial derivative `∂e/∂x_{i+1}`, normalized. `n` is the
    /// ambient variable count used to validate the index.
    pub fn partial(&self, i: usize, n: usize) -> Result<SmoothExpr, ExprError> {
        if i >= n {
            return Err(ExprError::IndexOutOfRange { index: i + 1, n });
        }
        Ok(self.partial_unchecked(i))
    }

    pub(crate) fn partial_unchecked(&self, i: usize) -> SmoothExpr {
        diff(self, i).normalize()
    }

    /// `(∂₁e, …, ∂ₙe)`.
    pub fn gradient(&self, n: usize) -> Vec<SmoothExpr> {
        (0..n).map(|i| self.partial_unchecked(i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> SmoothExpr {
        SmoothExpr::var(i)
    }

    #[test]
    fn power_rule() {
        let e = x(0).powi(2) * x(1);
        assert_eq!(e.partial(0, 2).unwrap(), (SmoothExpr::int(2) * x(0) * x(1)).normalize());
    }

    #[test]
    fn chain_rule_sin() {
        let e = (x(0) * x(1)).sin();
        let expect = ((x(0) * x(1)).cos() * x(0)).normalize();
        assert_eq!(e.partial(1, 2).unwrap(), expect);
    }

    #[test]
    fn index_checked() {
        assert!(matches!(x(0).partial(2, 2), Err(ExprError::IndexOutOfRange { .. })));
    }

    #[test]
    fn recip_rule() {
        let a = SmoothExpr::one() + x(0).powi(2);
        let lhs = a.recip().partial(0, 1).unwrap();
        let rhs = (-(a.recip().powi(2) * (SmoothExpr::int(2) * x(0)))).normalize();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_node_chain_rule() {
        // g(u1,u2) = u1*sin(u2) applied to (x1^2, x1+x2)
        let g = x(0) * x(1).sin();
        let args = vec![x(0).powi(2), x(0) + x(1)];
        let lazy = SmoothExpr::compose_node(&g, args.clone());
        let eager = g.substitute(&args);
        assert_eq!(lazy.partial(0, 2).unwrap(), eager.partial(0, 2).unwrap());
    }

    #[test]
    fn rho0_derivative_order_increments() {
        let e = x(0).rho0();
        let d = e.partial(0, 1).unwrap();
        assert_eq!(d, SmoothExpr::apply(Prim::Rho0(1), x(0)));
    }
}
