use serde::{Deserialize, Serialize};

use super::ramsey::{find_monochromatic_triangle, RegularityParams};
use crate::dimension::{buckets, greedy_indices};
use crate::error::{Error, Result};
use crate::geom::{dist, Point, PointCloud};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleWitness {
    pub vertices: [Point; 3],
    /// Indices in the source cloud (or point list).
    pub indices: [usize; 3],
    /// Longest over shortest side.
    pub side_ratio: f64,
    /// Index of the distance interval shared by all three sides.
    pub color: usize,
}

pub fn side_ratio(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    let s = [dist(a, b), dist(b, c), dist(a, c)];
    let hi = s.iter().copied().fold(f64::MIN, f64::max);
    let lo = s.iter().copied().fold(f64::MAX, f64::min);
    hi / lo
}

impl TriangleWitness {
    pub fn recompute_ratio(&self) -> f64 {
        let [a, b, c] = &self.vertices;
        side_ratio(a.coords(), b.coords(), c.coords())
    }

    pub fn verify(&self, tol: f64) -> bool {
        (self.recompute_ratio() - self.side_ratio).abs() <= tol
    }
}

/// Colours each edge by which of the `N = ⌈3/delta⌉` half-open intervals of
/// `[a, 4a]` holds its length (the last interval closed) and returns the first
/// monochromatic triangle, in lexicographic order, whose side ratio is at most
/// `1 + delta`. Every pairwise distance must lie in `[a, 4a]`.
///
/// If that colouring has no usable triangle, a second colouring with bin
/// edges shifted by half a bin is tried. Its bins are no wider and start no
/// lower, so the ratio bound still holds; it catches triangles whose sides
/// straddle an edge of the first colouring.
pub fn regular_triangle_in_window(points: &[Point], a: f64, delta: f64) -> Result<Option<TriangleWitness>> {
    let params = RegularityParams::new(delta)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidParameter(format!("window base must be positive, got {a}")));
    }
    let n = points.len();
    let mut lengths = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = points[i].distance(&points[j]);
            if !(a <= d && d <= 4.0 * a) {
                return Err(Error::InvalidParameter(format!(
                    "distance {d} between points {i} and {j} lies outside [{a}, {}]",
                    4.0 * a
                )));
            }
            lengths[i * n + j] = d;
        }
    }
    let colors = params.colors as usize;
    let width = 3.0 * a / colors as f64;
    for shift in [0.0, 0.5] {
        let palette: Vec<usize> = lengths
            .iter()
            .map(|&d| (((d - a) / width + shift).floor() as usize).min(colors - 1 + (shift > 0.0) as usize))
            .collect();
        if let Some(w) = first_regular(points, palette, colors + 1, delta) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn first_regular(points: &[Point], mut palette: Vec<usize>, used: usize, delta: f64) -> Option<TriangleWitness> {
    let n = points.len();
    let limit = 1.0 + delta;
    let coords: Vec<&[f64]> = points.iter().map(|p| p.coords()).collect();
    // Sides in one bin have ratio at most 1 + delta, but a side that rounds
    // onto a bin edge can exceed it by an ulp; such a triangle is masked by
    // giving one of its edges a fresh colour, and the search continues.
    let mut fresh = used;
    loop {
        let [i, j, k] = find_monochromatic_triangle(n, |i, j| palette[i * n + j])?;
        let ratio = side_ratio(coords[i], coords[j], coords[k]);
        if ratio <= limit {
            return Some(TriangleWitness {
                vertices: [points[i].clone(), points[j].clone(), points[k].clone()],
                indices: [i, j, k],
                side_ratio: ratio,
                color: palette[i * n + j],
            });
        }
        palette[j * n + k] = fresh;
        fresh += 1;
    }
}

/// Extracts well-spread subsets with `l = k - 1` (distances in `[a, 4a]`,
/// `a = 2^(-k+1)` in the unit-cube normalization) for every useful `k`, and
/// searches them from the largest down (ties: smaller `k`, then lower bucket)
/// for an almost regular triangle. Indices refer to `cloud`.
pub fn almost_regular_triangle(cloud: &PointCloud, delta: f64) -> Result<Option<TriangleWitness>> {
    if cloud.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: cloud.len() });
    }
    RegularityParams::new(delta)?;
    let (unit, _) = cloud.normalized()?;
    let mut candidates = Vec::new();
    for k in 2..=60 {
        for (slot, b) in buckets(&unit, k, k - 1).into_iter().enumerate() {
            if b.len() >= 3 {
                candidates.push((b.len(), k, slot, b));
            }
        }
        // past this scale every point is its own packing center
        if greedy_indices(&unit, (-k as f64).exp2()).len() == unit.len() {
            break;
        }
    }
    candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for (_, k, _, members) in candidates {
        let a = ((1 - k) as f64).exp2();
        let pts: Vec<Point> = members.iter().map(|&i| unit.point(i).clone()).collect();
        if let Some(w) = regular_triangle_in_window(&pts, a, delta)? {
            let indices = w.indices.map(|i| members[i]);
            let vertices = indices.map(|i| cloud.point(i).clone());
            let [p, q, r] = &vertices;
            let ratio = side_ratio(p.coords(), q.coords(), r.coords());
            // normalization rounding could in principle move the ratio
            if ratio <= 1.0 + delta {
                return Ok(Some(TriangleWitness { side_ratio: ratio, vertices, indices, color: w.color }));
            }
        }
    }
    Ok(None)
}
