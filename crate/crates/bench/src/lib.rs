//! Seeded workloads shared by the benchmarks.

use std::f64::consts::{PI, TAU};

use armik_core::{ArmGeometry, TargetPose, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn reference_geometry() -> ArmGeometry {
    ArmGeometry::new(3.0, 3.0, 1.0).expect("valid lengths")
}

/// `n` poses whose wrist lies strictly inside the reachable shell of `geom`.
pub fn reachable_targets(geom: &ArmGeometry, n: usize, seed: u64) -> Vec<TargetPose> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (geom.min_reach(), geom.max_reach());
    (0..n)
        .map(|_| {
            let reach = lo + rng.random_range(0.05..0.95) * (hi - lo);
            let z: f64 = rng.random_range(-1.0..1.0);
            let phi = rng.random_range(0.0..TAU);
            let s = (1.0 - z * z).sqrt();
            let wrist = Vec3::new(s * phi.cos(), s * phi.sin(), z) * reach;
            let (polar, azimuth) = (rng.random_range(0.0..PI), rng.random_range(0.0..TAU));
            let hand = Vec3::new(
                polar.sin() * azimuth.cos(),
                polar.sin() * azimuth.sin(),
                polar.cos(),
            );
            TargetPose::new(wrist - hand * geom.hand, polar, azimuth)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use armik_core::decouple::wrist_from_target;

    #[test]
    fn targets_are_reachable_and_seeded() {
        let g = reference_geometry();
        let a = reachable_targets(&g, 200, 1);
        assert_eq!(a, reachable_targets(&g, 200, 1));
        for t in &a {
            let w = wrist_from_target(t, &g).unwrap().point.norm();
            assert!(w > g.min_reach() && w < g.max_reach());
        }
    }
}
