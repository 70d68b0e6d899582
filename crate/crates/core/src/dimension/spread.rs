use serde::{Deserialize, Serialize};

use super::packing::{greedy_indices, GridIndex};
use crate::error::{Error, Result};
use crate::geom::{dist, Point, PointCloud};

/// A subset whose pairwise distances all lie in `[2^(-k+1), 2^(-l+2)]`,
/// measured in the unit-cube normalization of the input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellSpreadResult {
    /// Normalized coordinates.
    pub points: Vec<Point>,
    /// Indices into the input cloud.
    pub indices: Vec<usize>,
    pub k: i32,
    pub l: i32,
    pub t: f64,
    /// Whether `points.len() > 2^((k-l)t)`.
    pub count_condition_met: bool,
}

impl WellSpreadResult {
    pub fn distance_window(&self) -> (f64, f64) {
        (((1 - self.k) as f64).exp2(), ((2 - self.l) as f64).exp2())
    }

    pub fn verify(&self) -> bool {
        let (lo, hi) = self.distance_window();
        let p = &self.points;
        (0..p.len()).all(|i| {
            (i + 1..p.len()).all(|j| {
                let d = p[i].distance(&p[j]);
                lo <= d && d <= hi
            })
        })
    }
}

fn check_scales(k: i32, l: i32) -> Result<()> {
    if l <= 0 || l >= k {
        return Err(Error::InvalidScales { k, l });
    }
    Ok(())
}

/// Maximal `2^-k` packing `S`, maximal `2^-l` packing of centers, then the
/// largest group of `S` inside one doubled ball `B(x_i, 2^(-l+1))`. Each
/// member of `S` joins the lowest-index center that covers it; ties between
/// equally large groups go to the lowest center index.
pub fn well_spread_subset(cloud: &PointCloud, t: f64, k: i32, l: i32) -> Result<WellSpreadResult> {
    check_scales(k, l)?;
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("t must be positive, got {t}")));
    }
    let (unit, _) = cloud.normalized()?;
    let mut buckets = buckets(&unit, k, l);
    let mut best = 0;
    for (slot, b) in buckets.iter().enumerate() {
        if b.len() > buckets[best].len() {
            best = slot;
        }
    }
    let indices = std::mem::take(&mut buckets[best]);
    let threshold = ((k - l) as f64 * t).exp2();
    Ok(WellSpreadResult {
        points: indices.iter().map(|&i| unit.point(i).clone()).collect(),
        count_condition_met: indices.len() as f64 > threshold,
        indices,
        k,
        l,
        t,
    })
}

/// Every bucket of the construction, indexed by coarse center. `unit` must
/// already be normalized. Each bucket satisfies the distance window.
pub(crate) fn buckets(unit: &PointCloud, k: i32, l: i32) -> Vec<Vec<usize>> {
    let fine = greedy_indices(unit, (-k as f64).exp2());
    let coarse = greedy_indices(unit, (-l as f64).exp2());
    let radius = ((1 - l) as f64).exp2();

    let mut grid = GridIndex::new(unit.dimension(), radius);
    for (slot, &c) in coarse.iter().enumerate() {
        grid.insert(unit.point(c).coords(), slot);
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); coarse.len()];
    for &s in &fine {
        let x = unit.point(s).coords();
        let owner = grid
            .neighbors(x)
            .filter(|&slot| dist(x, unit.point(coarse[slot]).coords()) <= radius)
            .min()
            .expect("maximal packing covers every point");
        buckets[owner].push(s);
    }
    buckets
}

/// Runs [`well_spread_subset`] at `(k, k - gap)` for every `k` in the range and
/// reports each result; the count bound typically holds only at some scales.
pub fn scan_scales(cloud: &PointCloud, t: f64, ks: std::ops::RangeInclusive<i32>, gap: i32) -> Result<Vec<WellSpreadResult>> {
    ks.map(|k| well_spread_subset(cloud, t, k, k - gap)).collect()
}
