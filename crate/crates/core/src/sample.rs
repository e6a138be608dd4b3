//! Seeded generators of points of G(k,n)≥0.
//!
//! Positive points come from Vandermonde matrices `V_ij = x_j^{i−1}` with increasing positive
//! nodes, which have all maximal minors positive, multiplied on the right by random elementary
//! bidiagonal factors `I + a·E_{i,i+1}` or `I + a·E_{i+1,i}` with `a > 0`. Such factors are totally
//! nonnegative, so by Cauchy–Binet every minor stays positive. Boundary points zero out a column of
//! a positive matrix, or push `[I_k | 0]` through a few factors and keep the result only if some
//! coordinate is still zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chamber::ChamberPoint;
use crate::error::Result;
use crate::exterior::{MultiVector, SignClass};
use crate::linalg::Row;
use crate::plucker::{plucker_of_matrix, PlaneMatrix};
use crate::rational::{self, Rational};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn ratio(&mut self) -> Rational {
        rational::frac(self.rng.gen_range(1..=6), self.rng.gen_range(1..=6))
    }

    fn apply_factors(&mut self, rows: &mut [Row], count: usize) {
        let n = rows.first().map_or(0, Vec::len);
        if n < 2 {
            return;
        }
        for _ in 0..count {
            let i = self.rng.gen_range(0..n - 1);
            let a = self.ratio();
            // right multiplication by I + a·E_{i,i+1} adds a·col i to col i+1, and by the
            // lower factor adds a·col i+1 to col i
            let (src, dst) = if self.rng.gen_bool(0.5) { (i, i + 1) } else { (i + 1, i) };
            for r in rows.iter_mut() {
                let add = &a * &r[src];
                r[dst] += add;
            }
        }
    }

    /// A k×n matrix with all maximal minors positive.
    pub fn positive_matrix(&mut self, k: usize, n: usize) -> Result<PlaneMatrix> {
        let mut node = 0i64;
        let nodes: Vec<i64> = (0..n)
            .map(|_| {
                node += self.rng.gen_range(1..=3);
                node
            })
            .collect();
        let mut rows: Vec<Row> = (0..k)
            .map(|i| nodes.iter().map(|&x| rational::int(x.pow(i as u32))).collect())
            .collect();
        let count = self.rng.gen_range(0..=2 * n);
        self.apply_factors(&mut rows, count);
        PlaneMatrix::new(n, rows)
    }

    pub fn positive_point(&mut self, k: usize, n: usize) -> Result<ChamberPoint> {
        let m = self.positive_matrix(k, n)?;
        ChamberPoint::new(plucker_of_matrix(&m).normalize()?)
    }

    /// A point with at least one zero coordinate. Requires `0 < k < n`.
    pub fn boundary_point(&mut self, k: usize, n: usize) -> Result<ChamberPoint> {
        loop {
            let w = if self.rng.gen_bool(0.5) {
                let m = self.positive_matrix(k, n)?;
                let mut rows = m.rows().to_vec();
                if k < n {
                    let j = self.rng.gen_range(0..n);
                    rows.iter_mut().for_each(|r| r[j] = rational::zero());
                }
                plucker_of_matrix(&PlaneMatrix::new(n, rows)?)
            } else {
                let mut rows: Vec<Row> = (0..k).map(|i| crate::linalg::unit(n, i)).collect();
                let count = self.rng.gen_range(0..=n);
                self.apply_factors(&mut rows, count);
                plucker_of_matrix(&PlaneMatrix::new(n, rows)?)
            };
            let w = w.normalize()?;
            if w.classify_sign() == SignClass::Nonnegative || k == 0 || k == n {
                return ChamberPoint::new(w);
            }
        }
    }

    /// Positive or boundary with equal probability.
    pub fn nonneg_point(&mut self, k: usize, n: usize) -> Result<ChamberPoint> {
        if self.rng.gen_bool(0.5) {
            self.positive_point(k, n)
        } else {
            self.boundary_point(k, n)
        }
    }

    /// A k-vector with independent small rational coefficients of either sign.
    pub fn multivector(&mut self, n: usize, k: usize) -> MultiVector {
        let vals: Vec<Rational> = (0..crate::exterior::binomial(n, k))
            .map(|_| {
                if self.rng.gen_bool(0.2) {
                    rational::zero()
                } else {
                    rational::frac(self.rng.gen_range(-5..=5), self.rng.gen_range(1..=4))
                }
            })
            .collect();
        MultiVector::from_dense(n, k, &vals).expect("length matches")
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}
