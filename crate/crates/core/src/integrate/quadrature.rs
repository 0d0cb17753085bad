use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Quadrature settings: Grundmann–Möller rule of odd `degree`, refined by
/// uniform subdivision into `2^(k·level)` cells until two successive levels
/// agree to `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub degree: u32,
    pub max_levels: u32,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { degree: 7, max_levels: 6, tolerance: 1e-11 }
    }
}

/// A value with its refinement-difference error estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub level: u32,
}

/// Nodes (chart coordinates) and weights on `Δⁿ`; weights sum to `1/n!`.
pub fn grundmann_moller(n: usize, degree: u32) -> Vec<(Vec<f64>, f64)> {
    assert!(degree % 2 == 1, "Grundmann–Möller rules have odd degree");
    let s = (degree - 1) / 2;
    let d = degree as f64;
    let nf = n as f64;
    let mut out = Vec::new();
    for i in 0..=s {
        let denom = d + nf - 2.0 * i as f64;
        let mut w = 2f64.powi(-2 * s as i32) * denom.powi(degree as i32);
        w /= factorial(i as u64) * factorial((degree as u64) + n as u64 - i as u64);
        if i % 2 == 1 {
            w = -w;
        }
        for beta in compositions(s - i, n + 1) {
            // barycentric coordinates; chart coordinates drop the first one
            let point = beta[1..].iter().map(|&b| (2.0 * b as f64 + 1.0) / denom).collect();
            out.push((point, w));
        }
    }
    out
}

fn factorial(k: u64) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// All `parts`-tuples of nonnegative integers summing to `total`.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Vertices of the cells of the uniform subdivision of `Δⁿ` into `mⁿ`
/// simplices (Freudenthal–Kuhn), in chart coordinates.
///
/// In the coordinates `yⱼ = Σ_{i≥j} tᵢ` the simplex is `1 ≥ y₁ ≥ … ≥ yₙ ≥ 0`,
/// one Kuhn simplex of the unit cube; refining the cube grid and keeping the
/// Kuhn cells inside it subdivides the simplex. The change of coordinates is
/// unimodular, so every cell has volume `1/(mⁿ n!)`.
pub fn subdivide(n: usize, m: usize) -> Vec<Vec<Vec<f64>>> {
    let perms = permutations(n);
    let mut cells = Vec::new();
    let total = m.pow(n as u32);
    for c in 0..total {
        let mut corner = vec![0usize; n];
        let mut r = c;
        for v in corner.iter_mut() {
            *v = r % m;
            r /= m;
        }
        for perm in &perms {
            let mut verts_y: Vec<Vec<usize>> = vec![corner.clone()];
            for &axis in perm {
                let mut next = verts_y.last().expect("nonempty").clone();
                next[axis] += 1;
                verts_y.push(next);
            }
            // centroid test: 1 ≥ y₁ ≥ y₂ ≥ … ≥ yₙ ≥ 0 (scaled by m(n+1))
            let sums: Vec<usize> = (0..n).map(|j| verts_y.iter().map(|v| v[j]).sum()).collect();
            let inside = sums.windows(2).all(|w| w[0] >= w[1]) && sums.first().is_none_or(|&s| s <= m * (n + 1));
            if !inside {
                continue;
            }
            let verts_t = verts_y
                .iter()
                .map(|y| (0..n).map(|j| (y[j] as f64 - y.get(j + 1).copied().unwrap_or(0) as f64) / m as f64).collect())
                .collect();
            cells.push(verts_t);
        }
    }
    cells
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Integrate `f` over `Δⁿ` (chart convention) with a fixed subdivision level.
pub fn integrate_level<F>(n: usize, f: &F, degree: u32, level: u32) -> Result<f64, crate::ExprError>
where
    F: Fn(&[f64]) -> Result<f64, crate::ExprError> + Sync,
{
    if n == 0 {
        return f(&[]);
    }
    let rule = grundmann_moller(n, degree);
    let m = 1usize << level;
    let cells = subdivide(n, m);
    let scale = 1.0 / (m.pow(n as u32) as f64);
    let per_cell: Vec<Result<f64, crate::ExprError>> = cells
        .par_iter()
        .map(|verts| {
            let mut acc = 0.0;
            let mut p = vec![0.0; n];
            for (node, w) in &rule {
                let l0 = 1.0 - node.iter().sum::<f64>();
                for (j, pj) in p.iter_mut().enumerate() {
                    *pj = l0 * verts[0][j] + node.iter().zip(&verts[1..]).map(|(l, v)| l * v[j]).sum::<f64>();
                }
                acc += w * f(&p)?;
            }
            Ok(acc * scale)
        })
        .collect();
    // fixed-order summation keeps results independent of the thread count
    let mut total = 0.0;
    for v in per_cell {
        total += v?;
    }
    Ok(total)
}

/// Refine until the error estimate drops below the tolerance (relative to
/// `max(1, |value|)`), or the level cap is reached.
///
/// Halving the cell size shrinks the error of a degree-`d` rule by about
/// `2^(d+1)`, so the estimate is the level difference scaled by `1/(2^(d+1) - 1)`.
pub fn integrate_simplex<F>(n: usize, f: &F, cfg: &QuadratureConfig) -> Result<Estimate, crate::ExprError>
where
    F: Fn(&[f64]) -> Result<f64, crate::ExprError> + Sync,
{
    let mut prev = integrate_level(n, f, cfg.degree, 0)?;
    if n == 0 {
        return Ok(Estimate { value: prev, error: 0.0, level: 0 });
    }
    let richardson = 2f64.powi(cfg.degree as i32 + 1) - 1.0;
    let mut last = Estimate { value: prev, error: f64::INFINITY, level: 0 };
    for level in 1..=cfg.max_levels {
        let cur = integrate_level(n, f, cfg.degree, level)?;
        let err = (cur - prev).abs() / richardson;
        last = Estimate { value: cur, error: err, level };
        if err <= cfg.tolerance * cur.abs().max(1.0) {
            break;
        }
        prev = cur;
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_monomial(a: &[u32]) -> f64 {
        let n = a.len() as u64;
        let tot: u64 = a.iter().map(|&v| v as u64).sum();
        a.iter().map(|&v| factorial(v as u64)).product::<f64>() / factorial(n + tot)
    }

    #[test]
    fn weights_sum_to_volume() {
        for n in 1..=4 {
            for d in [1, 3, 5, 7] {
                let s: f64 = grundmann_moller(n, d).iter().map(|(_, w)| w).sum();
                assert!((s - 1.0 / factorial(n as u64)).abs() < 1e-13, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn exact_on_low_degree_monomials() {
        let rule = grundmann_moller(3, 7);
        for a in [[0, 0, 0], [1, 2, 0], [3, 0, 4], [2, 2, 2], [7, 0, 0]] {
            let q: f64 = rule
                .iter()
                .map(|(p, w)| w * p.iter().zip(&a).map(|(x, &e)| x.powi(e as i32)).product::<f64>())
                .sum();
            assert!((q - exact_monomial(&a)).abs() < 1e-14, "{a:?}");
        }
    }

    #[test]
    fn subdivision_counts_and_volume() {
        for n in 1..=3 {
            for m in [1, 2, 3] {
                let cells = subdivide(n, m);
                assert_eq!(cells.len(), m.pow(n as u32), "n={n} m={m}");
                for c in &cells {
                    for v in c {
                        assert!(v.iter().all(|&x| x >= -1e-15) && v.iter().sum::<f64>() <= 1.0 + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_converges_on_smooth_integrand() {
        let f = |p: &[f64]| -> Result<f64, crate::ExprError> { Ok((p[0] * 3.0).sin() * p[1].exp()) };
        let est = integrate_simplex(2, &f, &QuadratureConfig::default()).unwrap();
        // ∫₀¹ sin(3x) (e^{1-x} - 1) dx in closed form
        let e = std::f64::consts::E;
        let exact = (3.0 * e - 3f64.sin() - 3.0 * 3f64.cos()) / 10.0 - (1.0 - 3f64.cos()) / 3.0;
        assert!((est.value - exact).abs() < 1e-10, "{} vs {exact}", est.value);
        assert!(est.error < 1e-10);
    }
}
