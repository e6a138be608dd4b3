//! Seeded fixtures shared by the benchmarks.

use nngr_core::convexoid::ConstantFiber;
use nngr_core::{ChamberPoint, Convexoid, ConvexoidConfig, HPolytope, MultiVector, Sampler};

/// `count` positive points of G(k,n)≥0 drawn from a fixed seed.
pub fn positive_points(k: usize, n: usize, count: usize) -> Vec<ChamberPoint> {
    let mut s = Sampler::new(0xBE);
    (0..count).map(|_| s.positive_point(k, n).expect("sampler")).collect()
}

/// `count` random k-vectors in Λᵏℝⁿ.
pub fn multivectors(n: usize, k: usize, count: usize) -> Vec<MultiVector> {
    let mut s = Sampler::new(0xBF);
    (0..count).map(|_| s.multivector(n, k)).collect()
}

/// The square [0,1]×[−1,1] as a convexoid over the unit interval.
pub fn square() -> Convexoid<ConstantFiber> {
    let fiber = HPolytope::cuboid(&[-1.0], &[1.0]);
    Convexoid::new(ConstantFiber { base_dim: 1, fiber }, ConvexoidConfig::default()).expect("square")
}
