use serde::{Deserialize, Serialize};

use crate::dimension::well_spread_subset;
use crate::error::{Error, Result};
use crate::geom::{dist, dot, sub, unit, PointCloud, TripleWitness, ABSOLUTE_DEGENERACY};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RightAngleWitness {
    /// Apex `Q1`, arms `P` and `Q2`.
    pub triple: TripleWitness,
    /// `|angle - 90|` in degrees.
    pub deviation: f64,
    pub k: i32,
    pub l: i32,
    /// Size of the well-spread subset the pair came from.
    pub subset_size: usize,
}

/// Takes the well-spread subset `S` at scales `(k, l)`, its first point `O`
/// and the cloud point `P` farthest from `O` (lowest index on ties), then the
/// pair `Q1, Q2` of `S \ {P}` whose projections onto the line `OP` are
/// closest. The segment `Q1Q2` is then nearly perpendicular to `OP`, and `P`
/// is far enough away that `Q1P` runs nearly along `OP`.
pub fn near_right_witness(cloud: &PointCloud, k: i32, l: i32) -> Result<RightAngleWitness> {
    if l <= 0 || l >= k {
        return Err(Error::InvalidScales { k, l });
    }
    if cloud.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: cloud.len() });
    }
    let spread = well_spread_subset(cloud, 1.0, k, l)?;
    let (unit_cloud, _) = cloud.normalized()?;
    let pts = unit_cloud.points();
    let o = spread.indices[0];
    let origin = pts[o].coords();

    let mut far = o;
    let mut far_dist = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let d = dist(origin, p.coords());
        if d > far_dist {
            far = i;
            far_dist = d;
        }
    }
    if far_dist == 0.0 {
        return Err(Error::NoFarPoint);
    }
    let axis = unit(&sub(pts[far].coords(), origin), ABSOLUTE_DEGENERACY)?;

    let members: Vec<(usize, f64)> = spread
        .indices
        .iter()
        .filter(|&&i| i != far)
        .map(|&i| (i, dot(&sub(pts[i].coords(), origin), &axis)))
        .collect();
    if members.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: members.len() });
    }
    let mut best = (f64::INFINITY, 0, 0);
    for a in 0..members.len() {
        for b in a + 1..members.len() {
            let (i, pi) = members[a];
            let (j, pj) = members[b];
            let key = ((pi - pj).abs(), i.min(j), i.max(j));
            if key.0 < best.0 || (key.0 == best.0 && (key.1, key.2) < (best.1, best.2)) {
                best = key;
            }
        }
    }
    let (_, q1, q2) = best;
    let triple = TripleWitness::from_cloud(cloud, q1, far, q2)?;
    Ok(RightAngleWitness {
        deviation: (triple.angle - 90.0).abs(),
        triple,
        k,
        l,
        subset_size: spread.indices.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::angle_spectrum;

    fn grid(side: usize) -> PointCloud {
        let mut pts = Vec::new();
        for i in 0..side {
            for j in 0..side {
                let s = (side - 1) as f64;
                pts.push(vec![i as f64 / s, j as f64 / s]);
            }
        }
        PointCloud::from_coords(2, pts).unwrap()
    }

    #[test]
    fn exact_right_angle() {
        let cloud = PointCloud::from_coords(2, vec![vec![0.0, 0.0], vec![10.0, 0.0], vec![0.0, 10.0]]).unwrap();
        let w = near_right_witness(&cloud, 2, 1).unwrap();
        assert_eq!(w.triple.indices, [0, 1, 2]);
        assert!(w.deviation < 1e-12);
        let min = angle_spectrum(&cloud, None)
            .unwrap()
            .iter()
            .map(|e| (e.angle - 90.0).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(w.deviation <= min + 1e-9);
    }

    #[test]
    fn collinear_points() {
        let cloud = PointCloud::from_coords(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let w = near_right_witness(&cloud, 3, 1).unwrap();
        assert!((w.deviation - 90.0).abs() < 1e-12);
    }

    #[test]
    fn grid_32() {
        let g = grid(32);
        let w = near_right_witness(&g, 5, 2).unwrap();
        assert!(w.deviation < 2.0, "{w:?}");
        assert!(w.triple.verify(1e-9));
        // one particular triple cannot beat the best triple of its own subset
        let sub = g.subset(&w.triple.indices).unwrap();
        let min = angle_spectrum(&sub, None)
            .unwrap()
            .iter()
            .map(|e| (e.angle - 90.0).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(w.deviation >= min - 1e-12);
    }

    #[test]
    fn errors() {
        let g = grid(4);
        assert_eq!(near_right_witness(&g, 3, 3), Err(Error::InvalidScales { k: 3, l: 3 }));
        assert_eq!(near_right_witness(&g, 3, 0), Err(Error::InvalidScales { k: 3, l: 0 }));
        let two = PointCloud::from_coords(1, vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(near_right_witness(&two, 2, 1), Err(Error::TooFewPoints { .. })));
    }

    #[test]
    fn deviation_falls_as_both_scale_gaps_grow() {
        // (k, l) with l and k - l both increasing
        for side in [64, 128] {
            let g = grid(side);
            let d: Vec<f64> = [(4, 2), (6, 3), (8, 4)]
                .iter()
                .map(|&(k, l)| near_right_witness(&g, k, l).unwrap().deviation)
                .collect();
            assert!(d[0] > d[1] && d[1] > d[2], "{side}: {d:?}");
        }
    }
}
