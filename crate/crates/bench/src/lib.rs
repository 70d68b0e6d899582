//! Deterministic inputs for the benchmarks.

use anglelab::content::{DyadicGrid, DEFAULT_CELL_BUDGET};
use anglelab::ifs::{gasket_ifs, iterate_cloud, HomotheticIfs, DEFAULT_POINT_BUDGET};
use anglelab::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gasket(n: usize, delta: f64) -> HomotheticIfs {
    gasket_ifs(n, delta).expect("valid gasket")
}

/// The gasket iterated `depth` times from its vertices.
pub fn gasket_cloud(n: usize, delta: f64, depth: usize) -> PointCloud {
    let ifs = gasket(n, delta);
    iterate_cloud(&ifs, depth, &ifs.centers(), DEFAULT_POINT_BUDGET).expect("within budget")
}

/// `count` uniform points of `[0,1]^d`.
pub fn uniform_cloud(count: usize, d: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..count).map(|_| (0..d).map(|_| rng.random()).collect()).collect();
    PointCloud::from_coords(d, pts).expect("finite points")
}

/// `side × side` grid spanning the unit square.
pub fn unit_grid(side: usize) -> PointCloud {
    let s = (side - 1) as f64;
    let pts = (0..side).flat_map(|i| (0..side).map(move |j| vec![i as f64 / s, j as f64 / s])).collect();
    PointCloud::from_coords(2, pts).expect("finite points")
}

/// Level-`m` cells of the normalized gasket cloud.
pub fn gasket_grid(depth: usize, m: u32) -> DyadicGrid {
    let (unit, _) = gasket_cloud(2, 0.25, depth).normalized().expect("non-degenerate");
    DyadicGrid::from_points(&unit, m, DEFAULT_CELL_BUDGET).expect("within budget")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_have_expected_sizes() {
        assert_eq!(gasket_cloud(2, 0.25, 1).len(), 9);
        assert_eq!(uniform_cloud(100, 3, 1).len(), 100);
        assert_eq!(uniform_cloud(5, 2, 9), uniform_cloud(5, 2, 9));
        assert_eq!(unit_grid(8).len(), 64);
        assert!(!gasket_grid(4, 4).is_empty());
    }
}
