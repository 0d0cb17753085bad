use serde::Serialize;

use super::bump::smooth_step_cutoff;
use super::{BasicOpen, GeometryError, GermRep, Section};
use crate::expr::SmoothExpr;
use crate::scalar::rational_approx;
use crate::Rational;

/// `s|_V`, after checking `V ⊆ U` on samples.
pub fn presheaf_restrict(s: &Section, v: &BasicOpen) -> Result<Section, GeometryError> {
    if !std::sync::Arc::ptr_eq(s.open.space(), v.space()) {
        return Err(GeometryError::SpaceMismatch);
    }
    v.included_in(&s.open).map_err(|witness| GeometryError::NotIncluded { witness })?;
    let degenerate = v.samples().is_empty();
    let rep = if degenerate { SmoothExpr::zero() } else { s.rep.clone() };
    Ok(Section { open: v.clone(), rep, degenerate })
}

/// Record of a successful gluing.
#[derive(Clone, Debug, Serialize)]
pub struct GlueCertificate {
    pub pairs_checked: usize,
    pub overlap_samples: usize,
    /// Largest sampled disagreement between two sections on an overlap.
    pub max_disagreement: f64,
    /// Largest sampled difference between the glued section and an input on its open.
    pub max_blend_error: f64,
    pub tolerance: f64,
    pub seed: u64,
}

/// Glue a compatible family by a partition-of-unity blend.
///
/// With `φᵢ` a smooth cutoff positive exactly on the `i`-th open, the glued
/// representative is `Σ φᵢ sᵢ / Σ φⱼ`; it restricts to `sᵢ` wherever the
/// family agrees. Each open must be a single positivity clause.
pub fn glue(sections: &[Section], tol: f64, delta: f64) -> Result<(Section, GlueCertificate), GeometryError> {
    let Some(first) = sections.first() else { return Err(GeometryError::EmptyCover) };
    let space = first.open.space().clone();
    if sections.iter().any(|s| !std::sync::Arc::ptr_eq(s.open.space(), &space)) {
        return Err(GeometryError::SpaceMismatch);
    }
    let mut pairs = 0;
    let mut overlap_samples = 0;
    let mut max_dis: f64 = 0.0;
    for i in 0..sections.len() {
        for j in i + 1..sections.len() {
            pairs += 1;
            let common = sections[i].open.intersect(&sections[j].open);
            for p in common.samples() {
                overlap_samples += 1;
                let diff = (sections[i].eval(&p)? - sections[j].eval(&p)?).abs();
                if !(diff <= tol) {
                    return Err(GeometryError::IncompatibleFamily { pair: (i, j), witness: p, difference: diff });
                }
                max_dis = max_dis.max(diff);
            }
        }
    }
    let mut union = first.open.clone();
    let mut weights = Vec::new();
    for s in sections {
        if !std::ptr::eq(s, first) {
            union = union.union(&s.open);
        }
        let w = SmoothExpr::mul_all(
            s.open
                .clauses()
                .iter()
                .flat_map(|c| c.iter().map(|h| smooth_step_cutoff(h, delta)))
                .collect(),
        );
        weights.push(w.normalize());
    }
    let rep = if sections.len() == 1 {
        first.rep.clone()
    } else {
        let numer = SmoothExpr::add_all(weights.iter().zip(sections).map(|(w, s)| w * &s.rep).collect());
        let denom = SmoothExpr::add_all(weights.clone());
        (numer * denom.recip()).normalize()
    };
    let glued = Section::new(union, rep);
    let mut blend: f64 = 0.0;
    for s in sections {
        for p in s.open.samples() {
            blend = blend.max((glued.eval(&p)? - s.eval(&p)?).abs());
        }
    }
    let cert = GlueCertificate {
        pairs_checked: pairs,
        overlap_samples,
        max_disagreement: max_dis,
        max_blend_error: blend,
        tolerance: tol,
        seed: space.seed(),
    };
    Ok((glued, cert))
}

/// Inverse germ of `g` at a point where `a = g(x) ≠ 0`.
///
/// With `b` a rational close to `a`, `η(t) = b + (t − b)·τ(t)` equals `t` for
/// `|t − b| ≤ |b|/2` and never vanishes (`τ` cuts off before `|t − b|`
/// reaches `3|b|/4`), so `1/η(g)` is smooth everywhere and inverts `g` on
/// `V = g⁻¹(b/2, 3b/2)`.
pub fn germ_invert(g: &GermRep) -> Result<GermRep, GeometryError> {
    let a = g.value()?;
    if !(a.abs() > 1e-300) {
        return Err(GeometryError::ZeroValue { point: g.point.clone() });
    }
    let b = rational_approx(a, 1 << 20)
        .filter(|q| {
            use num_traits::ToPrimitive;
            q.to_f64().is_some_and(|v| v != 0.0 && ((v - a) / a).abs() < 1e-3)
        })
        .or_else(|| crate::scalar::rational_from_f64(a))
        .ok_or(GeometryError::ZeroValue { point: g.point.clone() })?;
    let bc = SmoothExpr::constant(b.clone());
    let gs = &g.section.rep;
    let shifted = gs - &bc;
    let inner = &b * &b / Rational::from_integer(4.into());
    let outer = &b * &b * Rational::new(9.into(), 16.into());
    let scale = SmoothExpr::constant(Rational::from_integer(1.into()) / (outer - inner.clone()));
    let tau = (SmoothExpr::one() + (shifted.powi(2) - SmoothExpr::constant(inner.clone())) * scale).rho0();
    let eta = &bc + &(&shifted * &tau);
    let zeta = eta.recip().normalize();
    let v = g.section.open.space().positivity(SmoothExpr::constant(inner) - shifted.powi(2));
    let open = g.section.open.intersect(&v);
    GermRep::new(g.point.clone(), Section::new(open, zeta))
}
