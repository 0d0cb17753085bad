//! Dense Gaussian elimination over a [`Field`].
//!
//! Membership in ideals and relation submodules, and the space of tangent
//! derivations, all reduce to these three solves.

use crate::scalar::Field;

/// Row-reduced echelon form; returns the pivot column of each nonzero row.
fn rref<C: Field>(m: &mut [Vec<C>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_negligible()) else {
            continue;
        };
        m.swap(row, p);
        let inv = C::one() / m[row][col].clone();
        for v in m[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_negligible() {
                continue;
            }
            let f = other[col].clone();
            for (v, pv) in other.iter_mut().zip(&pivot_row) {
                if !pv.is_negligible() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// A particular solution of `a x = b` (free variables set to zero), if any.
pub fn solve<C: Field>(a: &[Vec<C>], b: &[C], ncols: usize) -> Option<Vec<C>> {
    assert_eq!(a.len(), b.len());
    let mut aug: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.resize(ncols, C::zero());
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![C::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[row][ncols].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace<C: Field>(a: &[Vec<C>], ncols: usize) -> Vec<Vec<C>> {
    let mut m: Vec<Vec<C>> = a
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.resize(ncols, C::zero());
            r
        })
        .collect();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![C::zero(); ncols];
        v[free] = C::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn rank<C: Field>(a: &[Vec<C>], ncols: usize) -> usize {
    let mut m = a.to_vec();
    rref(&mut m, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn solves_consistent_system() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let x = solve(&a, &[q(3), q(1)], 2).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&a, &[q(1), q(3)], 2).is_none());
    }

    #[test]
    fn nullspace_vectors_are_solutions() {
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let s = row
                    .iter()
                    .zip(v)
                    .fold(q(0), |acc, (r, x)| acc + r.clone() * x.clone());
                assert_eq!(s, q(0));
            }
        }
        assert_eq!(rank(&a, 3), 1);
    }

    #[test]
    fn float_instance() {
        let a = vec![vec![2.0, 0.0], vec![0.0, 4.0]];
        assert_eq!(solve(&a, &[1.0, 1.0], 2).unwrap(), vec![0.5, 0.25]);
    }
}
