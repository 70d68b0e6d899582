use serde::{Deserialize, Serialize};

use super::packing::greedy_indices;
use crate::error::{Error, Result};
use crate::geom::PointCloud;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiEstimate {
    pub slope: f64,
    /// `(k, P(A, 2^-k))` for the scales used in the fit.
    pub scales: Vec<(i32, usize)>,
    /// Root mean square residual of the fit, in log2 units.
    pub residual: f64,
}

/// Least-squares slope of `log2 P(A, 2^-k)` against `k` for `k_min..=k_max`,
/// after mapping the cloud into the unit cube. Scales where the packing
/// already holds every point carry no information and are dropped.
pub fn minkowski_dimension_estimate(cloud: &PointCloud, k_min: i32, k_max: i32) -> Result<MinkowskiEstimate> {
    if k_min >= k_max {
        return Err(Error::InvalidScales { k: k_max, l: k_min });
    }
    let (unit, _) = cloud.normalized()?;
    let scales: Vec<(i32, usize)> = (k_min..=k_max)
        .map(|k| (k, greedy_indices(&unit, (-k as f64).exp2()).len()))
        .filter(|&(_, p)| p < unit.len())
        .collect();
    if scales.len() < 2 {
        return Err(Error::DegenerateRange);
    }
    let xs: Vec<f64> = scales.iter().map(|&(k, _)| k as f64).collect();
    let ys: Vec<f64> = scales.iter().map(|&(_, p)| (p as f64).log2()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    // P is nondecreasing in k up to greedy noise; clamp the rare negative fit
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(MinkowskiEstimate { slope: slope.max(0.0), scales, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{gasket_ifs, iterate_cloud, DEFAULT_POINT_BUDGET};
    use proptest::prelude::*;

    #[test]
    fn segment_is_one_dimensional() {
        let pts = (0..4096).map(|i| vec![i as f64 / 4095.0, 0.0]).collect();
        let cloud = PointCloud::from_coords(2, pts).unwrap();
        let e = minkowski_dimension_estimate(&cloud, 2, 8).unwrap();
        assert!((e.slope - 1.0).abs() < 0.05, "{e:?}");
    }

    fn unit_grid(side: usize) -> PointCloud {
        let mut pts = Vec::new();
        for i in 0..side {
            for j in 0..side {
                let s = (side - 1) as f64;
                pts.push(vec![i as f64 / s, j as f64 / s]);
            }
        }
        PointCloud::from_coords(2, pts).unwrap()
    }

    fn fitted_slope(pairs: &[(f64, f64)]) -> f64 {
        let n = pairs.len() as f64;
        let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn square_grid_is_two_dimensional() {
        // A unit square packs about (2^(k-1) + 1)^2 points at radius 2^-k; the
        // +1 boundary row keeps coarse-scale slopes well below 2.
        let coarse = minkowski_dimension_estimate(&unit_grid(64), 2, 5).unwrap();
        let model: Vec<(f64, f64)> =
            (2..=5).map(|k| (k as f64, 2.0 * (((k - 1) as f64).exp2() + 1.0).log2())).collect();
        assert!((coarse.slope - fitted_slope(&model)).abs() < 0.05, "{coarse:?}");

        let fine = minkowski_dimension_estimate(&unit_grid(256), 4, 7).unwrap();
        assert!((fine.slope - 2.0).abs() < 0.1, "{fine:?}");
        assert!(fine.slope > coarse.slope);
    }

    #[test]
    fn gasket_matches_similarity_dimension() {
        let g = gasket_ifs(2, 0.25).unwrap();
        let cloud = iterate_cloud(&g, 6, &g.centers(), DEFAULT_POINT_BUDGET).unwrap();
        let e = minkowski_dimension_estimate(&cloud, 2, 6).unwrap();
        let expected = 3f64.ln() / 4f64.ln();
        assert!((e.slope - expected).abs() < 0.08, "{e:?}");
    }

    #[test]
    fn degenerate_ranges() {
        let cloud = PointCloud::from_coords(1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert_eq!(minkowski_dimension_estimate(&cloud, 1, 6), Err(Error::DegenerateRange));
        assert!(matches!(minkowski_dimension_estimate(&cloud, 4, 4), Err(Error::InvalidScales { .. })));
    }

    proptest! {
        #[test]
        fn similarity_invariant(
            pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 20..200),
            power in -4i32..6,
            shift in (-64i32..64, -64i32..64),
        ) {
            let cloud = PointCloud::from_coords(2, pts).unwrap();
            let moved = cloud
                .transformed((power as f64).exp2(), &[shift.0 as f64 * 0.5, shift.1 as f64 * 0.25])
                .unwrap();
            let a = minkowski_dimension_estimate(&cloud, 1, 7);
            let b = minkowski_dimension_estimate(&moved, 1, 7);
            match (a, b) {
                (Ok(a), Ok(b)) => prop_assert!((a.slope - b.slope).abs() < 1e-9),
                (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
            }
        }
    }
}
