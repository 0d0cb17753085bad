use num_traits::Zero;

use super::module::solve_combination;
use super::{RingPresentation, Verdict};
use crate::expr::SmoothExpr;
use crate::poly::Monomial;
use crate::{Poly, Rational};

/// Answer to an ideal-membership question, with cofactors when found.
#[derive(Clone, Debug)]
pub struct Membership {
    pub verdict: Verdict,
    /// `hⱼ` with `e = Σ hⱼ gⱼ` in the ambient ring.
    pub cofactors: Option<Vec<SmoothExpr>>,
}

impl Membership {
    fn bare(verdict: Verdict) -> Self {
        Membership { verdict, cofactors: None }
    }
}

impl RingPresentation {
    /// Decide `e ∈ ⟨g₁, …, g_k⟩`, searching polynomial cofactors of degree at most `degree_bound`.
    pub fn ideal_member(&self, e: &SmoothExpr, degree_bound: u32) -> Membership {
        let e = e.normalize();
        if e.is_zero() {
            return Membership { verdict: Verdict::ProvedEqual, cofactors: Some(vec![SmoothExpr::zero(); self.gens.len()]) };
        }
        if self.gens.is_empty() {
            return Membership::bare(self.is_zero_verdict(&e));
        }
        if let (Some(gens), Some(ep)) = (self.generator_polys(), e.to_poly(self.n)) {
            if let Some(h) = polynomial_cofactors(self.n, &gens, &ep, degree_bound) {
                return Membership { verdict: Verdict::ProvedEqual, cofactors: Some(h) };
            }
            let remainder = self.reduce_poly(&ep);
            if remainder.is_zero() {
                // a member whose cofactors need a higher degree
                return Membership::bare(Verdict::ProvedEqual);
            }
            let d = SmoothExpr::from_poly(&remainder);
            if let Some(w) = self.exact_witness(&d) {
                return Membership::bare(Verdict::ProvedUnequal { witness: Some(w) });
            }
            return match self.numeric_verdict(&d) {
                v @ Verdict::NumericallyUnequal { .. } => Membership::bare(v),
                _ => Membership::bare(Verdict::NotMemberUpToDegree { degree: degree_bound }),
            };
        }
        if self.is_polynomial() && self.reduce(&e).is_zero() {
            return Membership::bare(Verdict::ProvedEqual);
        }
        if let Some(h) = structural_cofactors(&self.gens, &e) {
            return Membership { verdict: Verdict::ProvedEqual, cofactors: Some(h) };
        }
        Membership::bare(self.numeric_verdict(&self.reduce(&e)))
    }
}

/// Smallest-degree polynomial cofactors with `Σ hⱼ gⱼ = e` exactly.
pub(crate) fn polynomial_cofactors(nvars: usize, gens: &[Poly], e: &Poly, degree_bound: u32) -> Option<Vec<SmoothExpr>> {
    let edeg = e.total_degree().unwrap_or(0);
    let gmax = gens.iter().filter_map(Poly::total_degree).max().unwrap_or(0);
    let start = edeg.saturating_sub(gmax);
    for d in start..=degree_bound {
        let monos = Monomial::all_up_to_degree(nvars, d);
        let mut columns = Vec::new();
        for g in gens {
            for m in &monos {
                columns.push(vec![g.mul_term(m, &Rational::from_integer(1.into()))]);
            }
        }
        if let Some(x) = solve_combination(&columns, std::slice::from_ref(e)) {
            let h = gens
                .iter()
                .enumerate()
                .map(|(j, _)| {
                    let p = Poly::from_terms(
                        nvars,
                        monos
                            .iter()
                            .enumerate()
                            .map(|(k, m)| (m.clone(), x[j * monos.len() + k].clone()))
                            .filter(|(_, c)| !c.is_zero()),
                    );
                    SmoothExpr::from_poly(&p)
                })
                .collect();
            return Some(h);
        }
    }
    None
}

/// Cofactors read off when `e` is visibly `Σ cⱼ·gⱼ` after normalization,
/// tried for a single generator dividing every term structurally.
fn structural_cofactors(gens: &[SmoothExpr], e: &SmoothExpr) -> Option<Vec<SmoothExpr>> {
    for (j, g) in gens.iter().enumerate() {
        if let crate::expr::Node::Mul(fs) = e.node() {
            if let Some(pos) = fs.iter().position(|f| f == g) {
                let mut rest = fs.clone();
                rest.remove(pos);
                let mut h = vec![SmoothExpr::zero(); gens.len()];
                h[j] = SmoothExpr::mul_all(rest).normalize();
                return Some(h);
            }
        }
        if e == g {
            let mut h = vec![SmoothExpr::zero(); gens.len()];
            h[j] = SmoothExpr::one();
            return Some(h);
        }
    }
    None
}
