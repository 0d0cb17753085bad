//! Runners for the acceptance suite and the randomized identity checks.
//!
//! Each runner is deterministic in its seed. The CLI `selfcheck` command and
//! the `acceptance` test target share these.

use std::time::Instant;

use serde::Serialize;

use crate::basis::MultiIndex;
use crate::cring::{OracleConfig, Ring, RingHom, RingPresentation, SquareZeroRing, Verdict};
use crate::derham::{form_equal, Form, FormError};
use crate::expr::{compose, SmoothExpr};
use crate::geometry::{bump, germ_invert, glue, presheaf_restrict, ClosedSet, DiffSpace, GeometryError, GermRep, RingedSpaceMap, Section};
use crate::integrate::{stokes_check, Chain, QuadratureConfig, SimplexMap};
use crate::kaehler::{enumerate_tangent_derivations, psi_noninjectivity_report, KaehlerPresentation};
use crate::random::ExprGen;
use crate::Rational;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub checks: usize,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: Option<u128>,
}

pub const CRITERIA: [(u32, &str, Option<u128>); 9] = [
    (1, "xy=0 example suite", Some(5_000)),
    (2, "free-ring Kaehler module", Some(5_000)),
    (3, "CDGA laws", Some(30_000)),
    (4, "Stokes", Some(60_000)),
    (5, "square-zero extension", None),
    (6, "inverse derivative identity", None),
    (7, "bump functions", None),
    (8, "sheaf layer", None),
    (9, "ringed-space functoriality", None),
];

type Outcome = Result<(usize, String), String>;

/// Run criterion `id` (1 to 9).
pub fn run_criterion(id: u32, seed: u64) -> CriterionResult {
    let (_, name, limit_ms) = CRITERIA[(id as usize).saturating_sub(1).min(8)];
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => xy_zero_suite(),
        2 => free_kaehler(seed),
        3 => cdga_laws(seed, 100),
        4 => stokes_suite(seed),
        5 => square_zero(seed),
        6 => inverse_derivative(seed),
        7 => bump_suite(seed),
        8 => sheaf_suite(seed),
        9 => ringed_suite(seed),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed_ms = start.elapsed().as_millis();
    let in_time = limit_ms.is_none_or(|l| elapsed_ms <= l);
    let (pass, checks, detail) = match outcome {
        Ok((checks, detail)) if in_time => (true, checks, detail),
        Ok((checks, detail)) => (false, checks, format!("{detail}; over time limit")),
        Err(e) => (false, 0, e),
    };
    CriterionResult { id, name, pass, checks, detail, elapsed_ms, limit_ms }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|(id, _, _)| run_criterion(*id, seed)).collect()
}

pub fn cross_ring() -> Ring {
    RingPresentation::parse(2, &["x1*x2"], OracleConfig::default()).expect("cross ring")
}

pub fn circle_ring() -> Ring {
    RingPresentation::parse(2, &["x1^2 + x2^2 - 1"], OracleConfig::default()).expect("circle ring")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn xy_zero_suite() -> Outcome {
    let ring = cross_ring();
    let k = KaehlerPresentation::new(&ring);
    let a = k.one_form(vec![ring.parse_element("x2").map_err(err)?, ring.parse_element("x1").map_err(err)?]).map_err(err)?;
    let va = a.member_j(6);
    ensure(va.is_proved_equal(), || format!("x2 dx1 + x1 dx2: {}", va.label()))?;
    let w = k.one_form(vec![ring.zero(), ring.parse_element("x1").map_err(err)?]).map_err(err)?;
    let vb = w.member_j(6);
    ensure(matches!(vb, Verdict::NotMemberUpToDegree { degree: 6 }), || format!("x1 dx2: {}", vb.label()))?;
    let fields = enumerate_tangent_derivations(&ring, 4);
    ensure(!fields.is_empty(), || "no tangent derivations".into())?;
    for v in &fields {
        let c = v.contract(&w);
        let m = ring.ideal_member(c.rep(), 8);
        ensure(m.verdict.is_proved_equal(), || format!("contraction {c} not in the ideal: {}", m.verdict.label()))?;
    }
    let rep = psi_noninjectivity_report(&w, 6);
    ensure(rep.witness, || "psi report found no witness".into())?;
    Ok((2 + fields.len(), format!("{} tangent fields of degree <= 4, all contractions in I", fields.len())))
}

fn free_kaehler(seed: u64) -> Outcome {
    let mut checks = 0;
    for n in 1..=5 {
        let k = KaehlerPresentation::new(&RingPresentation::free(n));
        ensure(k.rank() == n && k.relations().is_empty(), || format!("free ring n={n}: rank {}, {} relations", k.rank(), k.relations().len()))?;
        checks += 1;
    }
    let mut gen = ExprGen::new(seed);
    let kps: Vec<_> = (1..=5).map(|n| KaehlerPresentation::new(&RingPresentation::free(n))).collect();
    for _ in 0..100 {
        let n = gen.int(1, 5) as usize;
        let m = gen.int(1, 3) as usize;
        let k = &kps[n - 1];
        let ring = k.ring().clone();
        let g = gen.polynomial(m, 3, 3);
        let args: Vec<SmoothExpr> = (0..m).map(|_| gen.polynomial(n, 2, 3)).collect();
        let lhs = k.d0(&ring.element(compose(&g, &args).map_err(err)?));
        let mut rhs = k.zero();
        for (j, aj) in args.iter().enumerate() {
            let coeff = ring.element(g.partial(j, m).map_err(err)?.substitute(&args));
            rhs = rhs.add(&k.d0(&ring.element(aj.clone())).scale(&coeff));
        }
        let v = lhs.equal(&rhs, 4);
        ensure(v.is_proved_equal(), || format!("chain rule for g = {g}: {}", v.label()))?;
        checks += 1;
    }
    Ok((checks, "ranks n, no relations; chain rule exact on 100 ops".into()))
}

/// Result of one randomized law.
#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub law: &'static str,
    pub trials: usize,
    pub proved: usize,
    pub numeric: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LawReport {
    fn new(law: &'static str) -> Self {
        LawReport { law, trials: 0, proved: 0, numeric: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, v: &Verdict, what: impl FnOnce() -> String) {
        self.trials += 1;
        if v.is_proved_equal() {
            self.proved += 1;
        } else if v.holds() {
            self.numeric += 1;
        } else {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(format!("{}: {}", what(), v.label()));
            }
        }
    }

    pub fn all_exact(&self) -> bool {
        self.proved == self.trials
    }
}

/// Some ring endomorphism; tries several families and keeps the first that
/// is well defined.
pub fn random_endomorphism(ring: &Ring, gen: &mut ExprGen) -> RingHom {
    let n = ring.n();
    if ring.is_free() {
        let images = (0..n).map(|_| ring.element(gen.polynomial(n, 2, 2))).collect();
        return RingHom::new(ring, ring, images).expect("free rings accept any images");
    }
    let x = |i: usize| SmoothExpr::var(i);
    for _ in 0..24 {
        let images: Vec<SmoothExpr> = match gen.int(0, 4) {
            // coordinatewise x_i p_i(x_i), fine for monomial ideals
            0 => (0..n).map(|i| x(i) * gen.polynomial(1, 2, 2).substitute(&[x(i)])).collect(),
            1 if n == 2 => {
                let (a, b, c) = [(3, 4, 5), (5, 12, 13), (8, 15, 17)][gen.index(3)];
                let s = gen.nonzero_int(1);
                let r = |p: i64| SmoothExpr::constant(Rational::new(p.into(), c.into()));
                vec![r(a) * x(0) - r(s * b) * x(1), r(s * b) * x(0) + r(a) * x(1)]
            }
            2 if n == 2 => vec![x(0).powi(2) - x(1).powi(2), SmoothExpr::int(2) * x(0) * x(1)],
            3 => {
                let c = gen.rational();
                (0..n).map(|i| &c * &x(i)).collect()
            }
            _ => {
                let mut p: Vec<usize> = (0..n).collect();
                p.rotate_left(gen.index(n.max(1)));
                p.into_iter().map(x).collect()
            }
        };
        let images = images.into_iter().map(|e| ring.element(e)).collect();
        if let Ok(h) = RingHom::new(ring, ring, images) {
            return h;
        }
    }
    RingHom::identity(ring)
}

fn random_pair(ring: &Ring, gen: &mut ExprGen) -> (Form, Form) {
    let n = ring.n();
    let p = gen.int(0, n as i64) as usize;
    let q = gen.int(0, (n - p) as i64) as usize;
    (gen.poly_form(ring, p, 2), gen.poly_form(ring, q, 2))
}

fn sign(k: usize) -> Rational {
    Rational::from_integer(if k % 2 == 0 { 1.into() } else { (-1).into() })
}

/// `form_equal`, retrying with larger cofactor degrees when the first bound
/// is too small to find a certificate.
fn decide(a: &Form, b: &Form, degree_bound: u32) -> Result<Verdict, FormError> {
    let mut v = form_equal(a, b, degree_bound)?;
    for factor in 2..=3 {
        if !matches!(v, Verdict::NotMemberUpToDegree { .. }) {
            break;
        }
        v = form_equal(a, b, degree_bound * factor)?;
    }
    Ok(v)
}

/// The CDGA laws plus the chain rule for `d`, on `trials` random instances each.
pub fn identity_suite(ring: &Ring, seed: u64, trials: usize, degree_bound: u32) -> Result<Vec<LawReport>, FormError> {
    let mut gen = ExprGen::new(seed);
    let names = ["d_squared", "graded_leibniz", "graded_commutativity", "pullback_d", "pullback_wedge", "pullback_functor", "chain_rule"];
    let mut reports: Vec<LawReport> = names.iter().map(|l| LawReport::new(l)).collect();
    let n = ring.n();
    for _ in 0..trials {
        let (a, b) = random_pair(ring, &mut gen);
        let (p, q) = (a.degree(), b.degree());

        let v = a.d().d().is_zero_in_quotient(degree_bound);
        reports[0].record(&v, || format!("d(d({a}))"));

        let lhs = a.wedge(&b)?.d();
        let rhs = a.d().wedge(&b)?.add(&a.wedge(&b.d())?.scale_rational(&sign(p)))?;
        let v = decide(&lhs, &rhs, degree_bound)?;
        reports[1].record(&v, || format!("d({a} ^ {b})"));

        let v = decide(&a.wedge(&b)?, &b.wedge(&a)?.scale_rational(&sign(p * q)), degree_bound)?;
        reports[2].record(&v, || format!("{a} ^ {b}"));

        let phi = random_endomorphism(ring, &mut gen);
        let psi = random_endomorphism(ring, &mut gen);
        let v = decide(&a.d().pullback(&phi)?, &a.pullback(&phi)?.d(), degree_bound)?;
        reports[3].record(&v, || format!("pullback of d({a})"));

        let v = decide(&a.wedge(&b)?.pullback(&phi)?, &a.pullback(&phi)?.wedge(&b.pullback(&phi)?)?, degree_bound)?;
        reports[4].record(&v, || format!("pullback of {a} ^ {b}"));

        let composite = phi.after(&psi)?;
        let v = decide(&a.pullback(&composite)?, &a.pullback(&psi)?.pullback(&phi)?, degree_bound)?;
        reports[5].record(&v, || format!("functor law on {a}"));

        let m = gen.int(1, 3) as usize;
        let g = gen.polynomial(m, 3, 3);
        let args: Vec<_> = (0..m).map(|_| ring.element(gen.polynomial(n, 2, 2))).collect();
        let lhs = Form::scalar(&ring.apply_op(&g, &args)?).d();
        let mut rhs = Form::zero(ring, 1);
        for (j, aj) in args.iter().enumerate() {
            let dj = ring.apply_op(&g.partial_unchecked(j), &args)?;
            rhs = rhs.add(&Form::scalar(aj).d().scale(&dj))?;
        }
        let v = decide(&lhs, &rhs, degree_bound)?;
        reports[6].record(&v, || format!("chain rule for {g}"));
    }
    Ok(reports)
}

fn cdga_laws(seed: u64, trials: usize) -> Outcome {
    let rings = [("free", RingPresentation::free(3)), ("cross", cross_ring()), ("circle", circle_ring())];
    let mut checks = 0;
    for (label, ring) in &rings {
        let reports = identity_suite(ring, seed, trials, ring.oracle().degree_bound).map_err(err)?;
        for r in reports.iter().filter(|r| r.law != "chain_rule") {
            ensure(r.all_exact(), || {
                format!("{label} ring, {}: {} of {} exact; {}", r.law, r.proved, r.trials, r.first_failure.clone().unwrap_or_default())
            })?;
            checks += r.trials;
        }
    }
    Ok((checks, format!("{trials} exact checks per law on free, cross and circle rings")))
}

fn stokes_suite(seed: u64) -> Outcome {
    let tol = 1e-6;
    let cfg = QuadratureConfig::default();
    let mut gen = ExprGen::new(seed);
    let mut cases: Vec<(SimplexMap, Form)> = Vec::new();
    let tri = SimplexMap::standard(2);
    let plane = tri.target().clone();
    cases.push((tri.clone(), Form::parse(&plane, "x1 * dx2").map_err(err)?));
    cases.push((tri.clone(), Form::scalar(&plane.element(gen.smooth(2, 2))).d()));

    let circle = circle_ring();
    let two_pi = SmoothExpr::int(2) * SmoothExpr::pi();
    for _ in 0..6 {
        let winding = SmoothExpr::int(gen.nonzero_int(2));
        let theta = &two_pi * &(winding * SmoothExpr::var(0) + gen.rational());
        let sigma = SimplexMap::new(1, &circle, vec![theta.cos(), theta.sin()]).map_err(err)?;
        let gamma = Form::scalar(&circle.element(gen.smooth(2, 1)));
        cases.push((sigma, gamma));
    }
    for _ in 0..4 {
        let theta = gen.polynomial(2, 2, 3);
        let sigma = SimplexMap::new(2, &circle, vec![theta.cos(), theta.sin()]).map_err(err)?;
        cases.push((sigma, gen.poly_form(&circle, 1, 2)));
    }
    let r2 = RingPresentation::free(2);
    for _ in 0..5 {
        let quarter = SmoothExpr::constant(Rational::new(1.into(), 4.into()));
        let comps = (0..2).map(|_| &quarter * &gen.polynomial(2, 2, 3)).collect();
        let sigma = SimplexMap::new(2, &r2, comps).map_err(err)?;
        let gamma = Form::from_terms(&r2, 1, (0..2).map(|i| (MultiIndex::single(i), r2.element(gen.smooth(2, 1)))));
        cases.push((sigma, gamma));
    }
    let r3 = RingPresentation::free(3);
    for _ in 0..3 {
        let half = SmoothExpr::constant(Rational::new(1.into(), 2.into()));
        let comps = (0..3).map(|_| &half * &gen.polynomial(3, 2, 2)).collect();
        let sigma = SimplexMap::new(3, &r3, comps).map_err(err)?;
        cases.push((sigma, gen.poly_form(&r3, 2, 2)));
    }
    let mut worst: f64 = 0.0;
    for (i, (sigma, gamma)) in cases.iter().enumerate() {
        let rep = stokes_check(sigma, gamma, tol, &cfg).map_err(|e| format!("case {i} {sigma} {gamma}: {e}"))?;
        ensure(rep.pass, || format!("case {i} {sigma}: residual {:e}", rep.residual))?;
        if i == 0 {
            ensure((rep.lhs - 0.5).abs() <= 1e-8 && (rep.rhs - 0.5).abs() <= 1e-8, || format!("triangle: {} vs {}", rep.lhs, rep.rhs))?;
        }
        worst = worst.max(rep.residual);
    }
    for k in 2..=4 {
        let bb = Chain::simplex(&SimplexMap::standard(k)).boundary().and_then(|b| b.boundary()).map_err(err)?;
        ensure(bb.is_empty(), || format!("boundary of boundary nonzero for k={k}"))?;
    }
    Ok((cases.len() + 3, format!("{} cases, worst residual {worst:.2e}; boundary^2 = 0 for k <= 4", cases.len())))
}

fn square_zero(seed: u64) -> Outcome {
    let ring = cross_ring();
    let k = KaehlerPresentation::new(&ring);
    let sz = SquareZeroRing::new(&ring, k.module()).map_err(err)?;
    let xy = crate::parse("x1*x2", 2).map_err(err)?;
    let mut gen = ExprGen::new(seed);
    let el = |gen: &mut ExprGen| ring.element(gen.polynomial(2, 2, 3));
    for i in 0..50 {
        let m = k.module().element(vec![el(&mut gen), el(&mut gen)]).map_err(err)?;
        let m2 = k.module().element(vec![el(&mut gen), el(&mut gen)]).map_err(err)?;
        let (a, b) = (el(&mut gen), el(&mut gen));
        let p = sz.pair(ring.zero(), m.clone()).map_err(err)?;
        let q = sz.pair(ring.zero(), m2.clone()).map_err(err)?;
        let v = sz.equal(&sz.mul(&p, &q), &sz.zero(), 6).map_err(err)?;
        ensure(v.is_proved_equal(), || format!("trial {i}: (0,m)(0,m') = {}", v.label()))?;
        let x = sz.pair(a.clone(), m.clone()).map_err(err)?;
        let y = sz.pair(b.clone(), m2.clone()).map_err(err)?;
        let via_op = sz.apply_op(&xy, &[x.clone(), y.clone()]).map_err(err)?;
        let expected = sz.pair(&a * &b, m2.scale(&a).add(&m.scale(&b))).map_err(err)?;
        let v = sz.equal(&via_op, &expected, 6).map_err(err)?;
        ensure(v.is_proved_equal(), || format!("trial {i}: f(x,y)=xy formula: {}", v.label()))?;
        let v = sz.equal(&via_op, &sz.mul(&x, &y), 6).map_err(err)?;
        ensure(v.is_proved_equal(), || format!("trial {i}: product: {}", v.label()))?;
    }
    Ok((150, "square-zero product and the xy operation agree on 50 random pairs".into()))
}

fn inverse_derivative(seed: u64) -> Outcome {
    let mut gen = ExprGen::new(seed);
    let n = 2;
    for t in 0..20 {
        let a = gen.invertible(n);
        let b = a.recip();
        for i in 0..n {
            let lhs = b.partial(i, n).map_err(err)?;
            let rhs = b.powi(2) * a.partial(i, n).map_err(err)?;
            let sum = (lhs + rhs).normalize();
            ensure(sum.is_zero(), || format!("trial {t}, d/dx{}: {sum} for a = {a}", i + 1))?;
        }
    }
    Ok((40, "w(1/a) + (1/a)^2 w(a) normalizes to 0 for 20 expressions and both coordinate fields".into()))
}

fn bump_suite(seed: u64) -> Outcome {
    let mut gen = ExprGen::new(seed);
    let (r_in, r_out) = (0.5, 1.0);
    let tol = 1e-12;
    let mut checks = 0;
    for trial in 0..5 {
        let x = gen.point(2, 1.0);
        let dist2 = |c: f64| {
            SmoothExpr::add_all((0..2).map(|i| (SmoothExpr::var(i) - SmoothExpr::constant(rat(x[i]))).powi(2)).collect())
                - SmoothExpr::constant(rat(c * c))
        };
        let closed = ClosedSet::sample_where(&[dist2(r_out)], &[[-3.0, 3.0]; 2], 200, seed ^ trial);
        let tau = bump(&x, &closed, r_in, r_out).map_err(err)?;
        for _ in 0..1000 {
            let p = gen.point(2, 3.0);
            let v = tau.evaluate(&p).map_err(err)?;
            ensure((-tol..=1.0 + tol).contains(&v), || format!("tau({p:?}) = {v}"))?;
            checks += 1;
        }
        for _ in 0..100 {
            let d = gen.point(2, 1.0);
            let scale = r_in * gen.unit().abs() / (d[0].hypot(d[1]).max(1e-9));
            let p = vec![x[0] + d[0] * scale, x[1] + d[1] * scale];
            let v = tau.evaluate(&p).map_err(err)?;
            ensure((v - 1.0).abs() <= tol, || format!("tau = {v} inside the inner ball at {p:?}"))?;
            checks += 1;
        }
        for p in &closed.points {
            let v = tau.evaluate(p).map_err(err)?;
            ensure(v.abs() <= tol, || format!("tau = {v} on the closed set at {p:?}"))?;
            checks += 1;
        }
    }
    Ok((checks, "range, inner-ball and closed-set checks for 5 bumps".into()))
}

fn rat(x: f64) -> Rational {
    crate::scalar::rational_from_f64(x).expect("finite")
}

fn sheaf_suite(seed: u64) -> Outcome {
    let circle = circle_ring();
    let space = DiffSpace::new(&circle, vec![[-2.0, 2.0]; 2], 300, seed).map_err(err)?;
    let opens = [
        space.parse_open(&["x1 + 3/10"]).map_err(err)?,
        space.parse_open(&["-1/2*x1 + 433/500*x2 + 3/10"]).map_err(err)?,
        space.parse_open(&["-1/2*x1 - 433/500*x2 + 3/10"]).map_err(err)?,
    ];
    for p in space.samples() {
        ensure(opens.iter().any(|o| o.contains(p)), || format!("cover misses {p:?}"))?;
    }
    let mut gen = ExprGen::new(seed);
    let mut checks = 0;
    for _ in 0..3 {
        let f = gen.smooth(2, 1);
        let family: Vec<Section> = opens.iter().map(|o| Section::new(o.clone(), f.clone())).collect();
        let (glued, cert) = glue(&family, 1e-12, 0.1).map_err(err)?;
        ensure(cert.max_disagreement == 0.0, || format!("disagreement {} for identical representatives", cert.max_disagreement))?;
        ensure(cert.max_blend_error <= 1e-10, || format!("blend error {}", cert.max_blend_error))?;
        for s in &family {
            let back = presheaf_restrict(&glued, &s.open).map_err(err)?;
            let diff = back.max_difference(s).map_err(err)?;
            ensure(diff <= 1e-10, || format!("restriction of the glued section differs by {diff}"))?;
        }
        // representatives that differ by multiples of the relation
        let shifted: Vec<Section> = opens
            .iter()
            .map(|o| Section::new(o.clone(), &f + &(gen.polynomial(2, 1, 2) * circle.generators()[0].clone())))
            .collect();
        let (_, cert) = glue(&shifted, 1e-12, 0.1).map_err(err)?;
        ensure(cert.max_disagreement <= 1e-12, || format!("disagreement {} modulo the relation", cert.max_disagreement))?;
        let mut bad = family.clone();
        bad[1] = Section::new(opens[1].clone(), &f + &SmoothExpr::constant(Rational::new(1.into(), 10.into())));
        match glue(&bad, 1e-9, 0.1) {
            Err(GeometryError::IncompatibleFamily { witness, .. }) => ensure(opens[1].contains(&witness), || "witness off the overlap".into())?,
            other => return Err(format!("inconsistent family was accepted: {:?}", other.map(|(_, c)| c))),
        }
        checks += 4;
    }
    let plane = DiffSpace::new(&RingPresentation::free(2), vec![[-1.0, 1.0]; 2], 200, seed).map_err(err)?;
    for t in 0..20 {
        let x = gen.point(2, 0.8);
        let mut g = gen.smooth(2, 1);
        if g.evaluate(&x).map_err(err)?.abs() < 0.1 {
            g = g + SmoothExpr::int(1);
        }
        if g.evaluate(&x).map_err(err)?.abs() < 0.1 {
            g = g + SmoothExpr::int(1);
        }
        let germ = GermRep::new(x.clone(), Section::new(plane.whole(), g.clone())).map_err(err)?;
        let inv = germ_invert(&germ).map_err(|e| format!("germ {t} ({g}): {e}"))?;
        ensure(inv.section.open.contains(&x), || format!("germ {t}: base point outside V"))?;
        let mut near: Vec<Vec<f64>> = inv.section.open.samples();
        for _ in 0..50 {
            let d = gen.point(2, 1e-2);
            near.push(vec![x[0] + d[0], x[1] + d[1]]);
        }
        for p in near.iter().filter(|p| inv.section.open.contains(p)) {
            let prod = g.evaluate(p).map_err(err)? * inv.section.eval(p).map_err(err)?;
            ensure((prod - 1.0).abs() <= 1e-10, || format!("germ {t}: g * inverse = {prod} at {p:?}"))?;
            checks += 1;
        }
    }
    Ok((checks, "three-arc gluing, incompatible family rejected, 20 inverse germs".into()))
}

fn ringed_suite(seed: u64) -> Outcome {
    let line = DiffSpace::new(&RingPresentation::free(1), vec![[-2.0, 2.0]], 60, seed).map_err(err)?;
    let circle = circle_ring();
    let b = DiffSpace::new(&circle, vec![[-2.0, 2.0]; 2], 60, seed).map_err(err)?;
    let c = DiffSpace::new(&circle, vec![[-2.0, 2.0]; 2], 60, seed + 1).map_err(err)?;
    let f = RingedSpaceMap::parse(&line, &b, &["cos(x1)", "sin(x1)"]).map_err(err)?;
    let g = RingedSpaceMap::parse(&b, &c, &["x1^2 - x2^2", "2*x1*x2"]).map_err(err)?;
    let gf = g.after(&f).map_err(err)?;
    let mut gen = ExprGen::new(seed);
    let tol = 1e-10;
    let mut checks = 0;
    for _ in 0..20 {
        let s = Section::new(c.whole(), gen.smooth(2, 2));
        let direct = gf.pullback_section(&s).map_err(err)?;
        let stepwise = f.pullback_section(&g.pullback_section(&s).map_err(err)?).map_err(err)?;
        for q in line.samples() {
            let (u, v) = (direct.eval(q).map_err(err)?, stepwise.eval(q).map_err(err)?);
            ensure((u - v).abs() <= tol * (1.0 + u.abs()), || format!("I(g.f) and I(g)I(f) differ at {q:?}: {u} vs {v}"))?;
            checks += 1;
        }
    }
    for _ in 0..20 {
        let h = Section::new(b.whole(), gen.smooth(2, 2));
        let q = gen.point(1, 2.0);
        let pulled = f.pullback_section(&h).map_err(err)?.eval(&q).map_err(err)?;
        let direct = h.eval(&f.apply(&q).map_err(err)?).map_err(err)?;
        ensure((pulled - direct).abs() <= tol * (1.0 + direct.abs()), || format!("psi(h)(q) = {pulled}, h(f(q)) = {direct}"))?;
        checks += 1;
    }
    Ok((checks, "functor law on 20 sections, psi(h) = h o f at 20 points".into()))
}
