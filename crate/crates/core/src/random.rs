//! Seeded generators of random expressions and forms for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::MultiIndex;
use crate::cring::Ring;
use crate::derham::Form;
use crate::expr::SmoothExpr;
use crate::Rational;

pub struct ExprGen {
    rng: ChaCha8Rng,
}

impl ExprGen {
    pub fn new(seed: u64) -> Self {
        ExprGen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        let v = self.rng.random_range(1..=bound);
        if self.rng.random_bool(0.5) {
            -v
        } else {
            v
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.random_range(-1.0..1.0)
    }

    pub fn point(&mut self, n: usize, half_width: f64) -> Vec<f64> {
        (0..n).map(|_| self.rng.random_range(-half_width..half_width)).collect()
    }

    /// Random monomial of total degree at most `max_degree` in `n` variables.
    pub fn monomial(&mut self, n: usize, max_degree: u32) -> SmoothExpr {
        let deg = self.rng.random_range(0..=max_degree);
        let mut factors = vec![SmoothExpr::one()];
        for _ in 0..deg {
            factors.push(SmoothExpr::var(self.index(n)));
        }
        SmoothExpr::mul_all(factors).normalize()
    }

    /// Integer-coefficient polynomial with up to `max_terms` terms.
    pub fn polynomial(&mut self, n: usize, max_degree: u32, max_terms: usize) -> SmoothExpr {
        let terms = self.rng.random_range(1..=max_terms);
        let parts = (0..terms).map(|_| SmoothExpr::int(self.nonzero_int(4)) * self.monomial(n, max_degree)).collect();
        SmoothExpr::add_all(parts).normalize()
    }

    /// Small rational constant `p/q`.
    pub fn rational(&mut self) -> SmoothExpr {
        let p = self.int(-5, 5);
        let q = self.int(1, 4);
        SmoothExpr::constant(Rational::new(p.into(), q.into()))
    }

    /// Polynomials mixed with `sin`, `cos`, `exp` of polynomials, nested up to `depth`.
    pub fn smooth(&mut self, n: usize, depth: u32) -> SmoothExpr {
        if depth == 0 || self.rng.random_bool(0.3) {
            return self.polynomial(n, 2, 3);
        }
        let inner = self.smooth(n, depth - 1);
        let wrapped = match self.rng.random_range(0..4) {
            0 => inner.sin(),
            1 => inner.cos(),
            2 => (inner * SmoothExpr::constant(Rational::new(1.into(), 4.into()))).exp(),
            _ => inner,
        };
        let other = self.polynomial(n, 1, 2);
        if self.rng.random_bool(0.5) {
            wrapped * other
        } else {
            wrapped + other
        }
    }

    /// An expression bounded away from zero everywhere.
    pub fn invertible(&mut self, n: usize) -> SmoothExpr {
        let p = self.smooth(n, 1);
        match self.rng.random_range(0..3) {
            0 => SmoothExpr::one() + p.powi(2),
            1 => p.exp(),
            _ => SmoothExpr::int(2) + p.sin(),
        }
    }

    /// Random `degree`-form over `ring` with polynomial coefficients.
    pub fn poly_form(&mut self, ring: &Ring, degree: usize, max_degree: u32) -> Form {
        let n = ring.n();
        let mut terms = Vec::new();
        for i in MultiIndex::all_of_degree(n, degree) {
            if self.rng.random_bool(0.6) {
                terms.push((i, ring.element(self.polynomial(n, max_degree, 2))));
            }
        }
        Form::from_terms(ring, degree, terms)
    }
}
