//! Worked examples checked against independent oracles.

use std::f64::consts::PI;

use cinfty::basis::MultiIndex;
use cinfty::cring::{RingHom, RingPresentation, Verdict};
use cinfty::derham::Form;
use cinfty::geometry::{germ_invert, DiffSpace, GermRep, RingedSpaceMap, Section};
use cinfty::integrate::{simplex_lattice, stokes_check, QuadratureConfig, SimplexMap};
use cinfty::kaehler::{enumerate_tangent_derivations, KaehlerPresentation};
use cinfty::selfcheck::{circle_ring, cross_ring};
use cinfty::{parse, SmoothExpr};

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

#[test]
fn axes_relation_and_obstruction() {
    let ring = cross_ring();
    let k = KaehlerPresentation::new(&ring);
    let x = ring.parse_element("x1").unwrap();
    let y = ring.parse_element("x2").unwrap();
    // x dy + y dx = d(xy) = 0
    let rel = k.one_form(vec![y.clone(), x.clone()]).unwrap();
    assert_eq!(rel.member_j(6), Verdict::ProvedEqual);
    let xdy = k.one_form(vec![ring.zero(), x]).unwrap();
    assert_eq!(xdy.member_j(6), Verdict::NotMemberUpToDegree { degree: 6 });
}

#[test]
fn tangent_fields_on_the_axes_vanish_at_the_origin() {
    // V = a₁∂x + a₂∂y tangent to xy = 0 has a₁(0, y) = 0 and a₂(x, 0) = 0
    let ring = cross_ring();
    let zero = SmoothExpr::zero();
    for v in enumerate_tangent_derivations(&ring, 3) {
        let a1 = v.coeffs()[0].rep().substitute(&[zero.clone(), SmoothExpr::var(1)]);
        let a2 = v.coeffs()[1].rep().substitute(&[SmoothExpr::var(0), zero.clone()]);
        assert!(a1.normalize().is_zero() && a2.normalize().is_zero(), "{:?}", v.coeffs());
        // ι_V(x dy) = x a₂ lies in ⟨xy⟩
        let c = (SmoothExpr::var(0) * v.coeffs()[1].rep().clone()).normalize();
        assert!(ring.ideal_member(&c, 6).verdict.is_proved_equal());
    }
}

#[test]
fn polar_pullback() {
    let plane = RingPresentation::free(2);
    let line = RingPresentation::free(1);
    let hom = RingHom::parse(&plane, &line, &["cos(x1)", "sin(x1)"]).unwrap();
    let w = Form::parse(&plane, "x1 * dx2").unwrap().pullback(&hom).unwrap();
    let c = w.coefficient(MultiIndex::single(0));
    for t in [0.0f64, 0.3, 1.1, -2.0] {
        let expected = t.cos() * t.cos();
        assert!((c.rep().evaluate(&[t]).unwrap() - expected).abs() < 1e-14);
    }
    assert_eq!(c.rep().evaluate(&[0.0]).unwrap(), 1.0);
}

#[test]
fn circle_pullback_density() {
    let circle = circle_ring();
    let sigma = SimplexMap::parse(1, &circle, &["cos(2*pi*t1)", "sin(2*pi*t1)"]).unwrap();
    let alpha = Form::parse(&circle, "x1 * dx2").unwrap();
    let dens = sigma.pullback(&alpha).unwrap().coefficient(MultiIndex::single(0));
    for t in [0.0f64, 0.1, 0.25, 0.7] {
        let expected = 2.0 * PI * (2.0 * PI * t).cos().powi(2);
        assert!((dens.rep().evaluate(&[t]).unwrap() - expected).abs() < 1e-12);
    }
    // representatives differing by a relation pull back to the same density on Δ¹
    let shifted = Form::parse(&circle, "(x1 + x2*(x1^2 + x2^2 - 1)) * dx2 + (x1^2 + x2^2 - 1) * dx1").unwrap();
    let d2 = sigma.pullback(&shifted).unwrap().coefficient(MultiIndex::single(0));
    for t in simplex_lattice(1, 19) {
        assert!((dens.rep().evaluate(&t).unwrap() - d2.rep().evaluate(&t).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn monomial_integrals_over_simplices() {
    let cfg = QuadratureConfig::default();
    for (n, exps) in [(2usize, vec![1u32, 0]), (2, vec![2, 3]), (3, vec![1, 1, 1]), (3, vec![0, 4, 2])] {
        let sigma = SimplexMap::standard(n);
        let r = sigma.target().clone();
        let mono = exps
            .iter()
            .enumerate()
            .map(|(i, &e)| format!("x{}^{e}", i + 1))
            .collect::<Vec<_>>()
            .join("*");
        let top = (1..=n).map(|i| format!("dx{i}")).collect::<Vec<_>>().join("^");
        let alpha = Form::parse(&r, &format!("{mono} * {top}")).unwrap();
        let got = sigma.integrate(&alpha, &cfg).unwrap().value;
        // Dirichlet integral: ∏ aᵢ! / (n + Σaᵢ)!
        let total: u32 = exps.iter().sum();
        let expected = exps.iter().map(|&e| factorial(e)).product::<f64>() / factorial(n as u32 + total);
        assert!((got - expected).abs() < 1e-14, "{mono}: {got} vs {expected}");
    }
}

#[test]
fn constant_simplex_integrates_to_zero() {
    let r = RingPresentation::free(2);
    let sigma = SimplexMap::parse(1, &r, &["1/2", "3"]).unwrap();
    let alpha = Form::parse(&r, "x1 * dx1 + exp(x2) * dx2").unwrap();
    assert_eq!(sigma.integrate(&alpha, &QuadratureConfig::default()).unwrap().value, 0.0);
}

#[test]
fn stokes_for_exact_forms() {
    let r = RingPresentation::free(2);
    let sigma = SimplexMap::parse(2, &r, &["t1 + t2^2", "sin(t2) + t1*t2"]).unwrap();
    let f = Form::parse(&r, "exp(x1) * x2^2").unwrap();
    let gamma = f.d();
    assert!(gamma.d().is_zero_vector());
    let rep = stokes_check(&sigma, &gamma, 1e-8, &QuadratureConfig::default()).unwrap();
    assert!(rep.pass && rep.lhs == 0.0, "{rep:?}");
    // the 1-simplex version is the fundamental theorem of calculus
    let path = SimplexMap::parse(1, &r, &["cos(t1)", "t1^2"]).unwrap();
    let rep = stokes_check(&path, &f, 1e-10, &QuadratureConfig::default()).unwrap();
    let expected = 1f64.cos().exp() - 0.0;
    assert!((rep.rhs - expected).abs() < 1e-12 && rep.pass);
}

#[test]
fn axis_inclusion_kills_the_other_coordinate() {
    let line = DiffSpace::new(&RingPresentation::free(1), vec![[-2.0, 2.0]], 40, 1).unwrap();
    let cross = DiffSpace::new(&cross_ring(), vec![[-2.0, 2.0]; 2], 40, 1).unwrap();
    let inc = RingedSpaceMap::parse(&line, &cross, &["x1", "0"]).unwrap();
    let s = Section::new(cross.whole(), parse("x2", 2).unwrap());
    assert!(inc.pullback_section(&s).unwrap().rep.normalize().is_zero());
    assert!(RingedSpaceMap::parse(&line, &cross, &["x1", "1"]).is_err());
}

#[test]
fn germ_inverses() {
    let plane = DiffSpace::new(&RingPresentation::free(1), vec![[-1.0, 1.0]], 100, 3).unwrap();
    let two = GermRep::new(vec![0.3], Section::new(plane.whole(), SmoothExpr::int(2))).unwrap();
    let inv = germ_invert(&two).unwrap();
    for p in plane.samples() {
        assert_eq!(inv.section.eval(p).unwrap(), 0.5);
    }
    let g = GermRep::new(vec![0.0], Section::new(plane.whole(), parse("1 + x1^2", 1).unwrap())).unwrap();
    let inv = germ_invert(&g).unwrap();
    for p in inv.section.open.samples() {
        let expected = 1.0 / (1.0 + p[0] * p[0]);
        assert!((inv.section.eval(&p).unwrap() - expected).abs() < 1e-12);
    }
}
