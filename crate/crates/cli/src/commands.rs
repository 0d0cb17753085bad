use std::path::Path;

use serde_json::{json, Value};

use cinfty::cring::{Ring, RingFile, RingPresentation};
use cinfty::derham::Form;
use cinfty::expr::parse_with_prefix;
use cinfty::geometry::{germ_invert, glue, GermRep, Section, SpaceFile};
use cinfty::integrate::{stokes_check, IntegrateError, QuadratureConfig, SimplexMap};
use cinfty::kaehler::{psi_noninjectivity_report, KaehlerPresentation};
use cinfty::selfcheck::{identity_suite, run_criterion, CRITERIA};

use crate::report::{CliError, Row, RunReport};
use crate::Globals;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_ring(path: &Path) -> Result<Ring, CliError> {
    let file: RingFile = read_json(path)?;
    RingPresentation::from_file(&file).map_err(CliError::input)
}

fn report(command: &'static str, g: &Globals, inputs: Value, verdicts: Vec<Row>, residuals: Vec<f64>, details: Value) -> RunReport {
    let pass = verdicts.iter().all(|r| r.pass);
    RunReport { command, inputs, pass, seed: g.seed, verdicts, residuals, details, wall_time_ms: 0 }
}

pub fn ring(g: &Globals, path: &Path) -> Result<RunReport, CliError> {
    let ring = load_ring(path)?;
    let k = KaehlerPresentation::new(&ring);
    let relations: Vec<Vec<String>> =
        k.relations().iter().map(|row| row.iter().map(|a| a.to_string()).collect()).collect();
    let groebner = ring.groebner().map(|b| b.polys().len());
    let details = json!({
        "n": ring.n(),
        "generators": ring.generators().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "groebner_basis_size": groebner,
        "kaehler": { "rank": k.rank(), "relations": relations },
    });
    let rows = vec![
        Row::new("rank", true, k.rank().to_string()),
        Row::new("relations", true, k.relations().len().to_string()),
        Row::new("groebner basis", true, groebner.map_or("none (non-polynomial)".into(), |s| s.to_string())),
    ];
    Ok(report("ring", g, json!({ "ring": path }), rows, Vec::new(), details))
}

pub fn identities(g: &Globals, path: &Path, trials: usize) -> Result<RunReport, CliError> {
    let ring = load_ring(path)?;
    let d = g.degree_bound.unwrap_or(ring.oracle().degree_bound);
    let laws = identity_suite(&ring, g.seed, trials, d).map_err(CliError::input)?;
    let rows = laws
        .iter()
        .map(|l| {
            let mut result = format!("{} proved, {} numeric, {} failed of {}", l.proved, l.numeric, l.failures, l.trials);
            if let Some(f) = &l.first_failure {
                result.push_str(&format!("; first: {f}"));
            }
            Row::new(l.law, l.failures == 0, result)
        })
        .collect();
    let details = serde_json::to_value(&laws).expect("laws serialize");
    Ok(report("identities", g, json!({ "ring": path, "trials": trials, "degree_bound": d }), rows, Vec::new(), details))
}

pub fn psi(g: &Globals, path: &Path, form: &str) -> Result<RunReport, CliError> {
    let ring = load_ring(path)?;
    let d = g.degree_bound.unwrap_or(6);
    let f = Form::parse(&ring, form).map_err(CliError::input)?;
    if f.degree() != 1 {
        return Err(CliError::Inconsistent(format!("expected a one-form, got degree {}", f.degree())));
    }
    let k = KaehlerPresentation::new(&ring);
    let w = f.to_oneform(&k).ok_or_else(|| CliError::Inconsistent("form is not over this ring".into()))?;
    let rep = psi_noninjectivity_report(&w, d);
    let rows = vec![
        Row::new("omega in J", true, rep.in_j.to_string()),
        Row::new("tangent fields", true, rep.derivations_checked.to_string()),
        Row::new("contractions in I", true, rep.all_contractions_in_i.to_string()),
        Row::new("witness", true, rep.witness.to_string()),
    ];
    Ok(report("psi", g, json!({ "ring": path, "form": form, "degree_bound": d }), rows, Vec::new(), rep.to_json()))
}

/// Smallest `k` for which every component parses in `t1..tk`.
fn infer_dim(components: &[&str]) -> Option<usize> {
    (0..=16).find(|&k| components.iter().all(|c| parse_with_prefix(c, k, "t").is_ok()))
}

pub fn stokes(g: &Globals, path: &Path, sigma: &str, gamma: &str, dim: Option<usize>) -> Result<RunReport, CliError> {
    let ring = load_ring(path)?;
    let tol = g.tol.unwrap_or(1e-6);
    let comps: Vec<&str> = sigma.split(',').map(str::trim).collect();
    let k = match dim {
        Some(k) => k,
        None => infer_dim(&comps).ok_or_else(|| CliError::Input(format!("cannot parse sigma components {comps:?}")))?,
    };
    let map = SimplexMap::parse(k, &ring, &comps).map_err(|e| match e {
        IntegrateError::ArityMismatch { .. } | IntegrateError::OffZeroSet { .. } => CliError::Inconsistent(e.to_string()),
        other => CliError::input(other),
    })?;
    let form = Form::parse(&ring, gamma).map_err(CliError::input)?;
    let rep = stokes_check(&map, &form, tol, &QuadratureConfig::default()).map_err(|e| match e {
        IntegrateError::DegreeMismatch { .. } | IntegrateError::ZeroDimensional | IntegrateError::NoConvergence { .. } => {
            CliError::Inconsistent(e.to_string())
        }
        other => CliError::input(other),
    })?;
    let rows = vec![
        Row::new("lhs  int_sigma d(gamma)", true, format!("{:.12} (+/- {:.1e})", rep.lhs, rep.lhs_error)),
        Row::new("rhs  int_boundary gamma", true, format!("{:.12} (+/- {:.1e})", rep.rhs, rep.rhs_error)),
        Row::new("residual", rep.pass, format!("{:.3e} <= {tol:e}", rep.residual)),
    ];
    let inputs = json!({ "ring": path, "sigma": comps, "gamma": gamma, "dim": k, "tol": tol });
    let details = serde_json::to_value(&rep).expect("report serializes");
    Ok(report("stokes", g, inputs, rows, vec![rep.residual], details))
}

pub fn sheaf(g: &Globals, path: &Path, section: &str, point: Option<&str>) -> Result<RunReport, CliError> {
    let file: SpaceFile = read_json(path)?;
    let (space, opens) = file.load().map_err(CliError::input)?;
    if opens.is_empty() {
        return Err(CliError::Inconsistent("the space file lists no opens".into()));
    }
    let tol = g.tol.unwrap_or(1e-9);
    let f = cinfty::parse(section, space.n()).map_err(CliError::input)?;
    let uncovered = space.samples().iter().filter(|p| !opens.iter().any(|o| o.contains(p))).count();
    let family: Vec<Section> = opens.iter().map(|o| Section::new(o.clone(), f.clone())).collect();
    let mut rows = vec![Row::new("cover", uncovered == 0, format!("{uncovered} of {} samples uncovered", space.samples().len()))];
    let mut residuals = Vec::new();
    let (glued, cert) = glue(&family, tol, 0.1).map_err(CliError::input)?;
    rows.push(Row::new("glue", cert.max_blend_error <= tol, format!("disagreement {:e}, blend error {:e}", cert.max_disagreement, cert.max_blend_error)));
    residuals.push(cert.max_blend_error);
    let mut details = json!({ "glued": glued.rep.to_string(), "certificate": cert });
    if let Some(pt) = point {
        let x = pt
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::Input(format!("point: {e}")))?;
        let germ = GermRep::new(x, Section::new(space.whole(), f.clone())).map_err(CliError::input)?;
        let inv = germ_invert(&germ).map_err(|e| CliError::Inconsistent(e.to_string()))?;
        let mut worst: f64 = 0.0;
        let samples = inv.section.open.samples();
        for p in &samples {
            let prod = f.evaluate(p).map_err(CliError::input)? * inv.section.eval(p).map_err(CliError::input)?;
            worst = worst.max((prod - 1.0).abs());
        }
        rows.push(Row::new("germ inverse", worst <= 1e-10, format!("max |g * inverse - 1| = {worst:e} on {} samples", samples.len())));
        residuals.push(worst);
        details["inverse"] = json!(inv.section.rep.to_string());
    }
    let inputs = json!({ "space": path, "section": section, "point": point, "tol": tol });
    Ok(report("sheaf", g, inputs, rows, residuals, details))
}

pub fn selfcheck(g: &Globals, only: &[u32]) -> Result<RunReport, CliError> {
    let ids: Vec<u32> = if only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| i == 0 || i as usize > CRITERIA.len()) {
        return Err(CliError::Input(format!("no criterion {bad}")));
    }
    let results: Vec<_> = ids.iter().map(|&id| run_criterion(id, g.seed)).collect();
    let rows = results
        .iter()
        .map(|r| Row::new(format!("{} {}", r.id, r.name), r.pass, format!("{} checks, {} ms: {}", r.checks, r.elapsed_ms, r.detail)))
        .collect();
    let details = serde_json::to_value(&results).expect("results serialize");
    Ok(report("selfcheck", g, json!({ "only": ids }), rows, Vec::new(), details))
}
