use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{iterate_cloud, separation_gap, HomotheticIfs};
use crate::error::{Error, Result};
use crate::geom::{dist, dot, norm, sub, unit, unit_line_angle, Point, ABSOLUTE_DEGENERACY};

/// Four points `f(g(x)), f(g(y)), g(f(y)), g(f(x))` taken in order around the
/// quadrilateral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectangleWitness {
    pub corners: [Point; 4],
    /// Max of the two opposite-side line angles (degrees) and the relative
    /// diagonal length mismatch.
    pub deviation: f64,
    /// Fixed points of `f∘g` and `g∘f`.
    pub fixed_points: [Point; 2],
    /// The pair `(x, y)` from the generated cloud.
    pub generators: [Point; 2],
    /// `|cos|` of the angle between `x - y` and `P - Q`.
    pub cosine: f64,
    pub depth: usize,
}

impl RectangleWitness {
    pub fn recompute_deviation(&self) -> f64 {
        rectangle_deviation(&self.corners)
    }
}

/// Deviation of a quadrilateral `A B C D` from a rectangle: the larger of the
/// line angles between `AB, DC` and `AD, BC` (degrees) and the relative
/// mismatch `|AC - BD| / max(AC, BD)` of the diagonals.
pub fn rectangle_deviation(corners: &[Point; 4]) -> f64 {
    let [a, b, c, d] = corners.each_ref().map(|p| p.coords());
    let line = |p: &[f64], q: &[f64], r: &[f64], s: &[f64]| -> f64 {
        match (unit(&sub(q, p), ABSOLUTE_DEGENERACY), unit(&sub(s, r), ABSOLUTE_DEGENERACY)) {
            (Ok(u), Ok(v)) => unit_line_angle(&u, &v),
            _ => f64::INFINITY,
        }
    };
    let ac = dist(a, c);
    let bd = dist(b, d);
    let diag = (ac - bd).abs() / ac.max(bd);
    line(a, b, d, c).max(line(a, d, b, c)).max(diag)
}

/// Fixed points `P` of `f∘g` and `Q` of `g∘f`, in closed form. With
/// `f∘g(z) = r_f r_g z + b`, `P = b / (1 - r_f r_g)`.
pub fn composition_fixed_points(ifs: &HomotheticIfs, f: usize, g: usize) -> Result<(Point, Point)> {
    let maps = ifs.maps();
    for idx in [f, g] {
        if idx >= maps.len() {
            return Err(Error::InvalidIndex { index: idx, maps: maps.len() });
        }
    }
    let fixed = |outer: usize, inner: usize| -> Point {
        let (o, i) = (&maps[outer], &maps[inner]);
        let rho = o.ratio * i.ratio;
        let p = o
            .center
            .coords()
            .iter()
            .zip(i.center.coords())
            .map(|(co, ci)| ((1.0 - o.ratio) * co + o.ratio * (1.0 - i.ratio) * ci) / (1.0 - rho))
            .collect();
        Point::from_vec(p)
    };
    Ok((fixed(f, g), fixed(g, f)))
}

/// Searches the depth-`depth` cloud (seeded with the centers) for the pair
/// `(x, y)` whose difference is closest to perpendicular to `P - Q`, and
/// returns the quadrilateral it spans under `f∘g` and `g∘f`.
pub fn rectangle_in(ifs: &HomotheticIfs, f: usize, g: usize, depth: usize, budget: u64) -> Result<RectangleWitness> {
    if f == g {
        return Err(Error::SameIndex(f));
    }
    let (p, q) = composition_fixed_points(ifs, f, g)?;
    let sep = separation_gap(ifs);
    if !sep.separated {
        return Err(Error::NotSeparated { gap: sep.gap });
    }
    let axis = unit(&sub(p.coords(), q.coords()), ABSOLUTE_DEGENERACY)?;
    let cloud = iterate_cloud(ifs, depth, &ifs.centers(), budget)?;
    let pts = cloud.points();
    if pts.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: pts.len() });
    }

    let best = (0..pts.len())
        .into_par_iter()
        .filter_map(|i| {
            let x = pts[i].coords();
            let mut best: Option<(f64, usize, usize)> = None;
            for (j, y) in pts.iter().enumerate().skip(i + 1) {
                let diff = sub(x, y.coords());
                let c = dot(&diff, &axis).abs() / norm(&diff);
                if best.is_none_or(|(b, _, _)| c < b) {
                    best = Some((c, i, j));
                }
            }
            best
        })
        .reduce_with(|a, b| if (b.0, b.1, b.2) < (a.0, a.1, a.2) { b } else { a })
        .expect("at least one pair");
    let (cosine, i, j) = best;

    let fm = &ifs.maps()[f];
    let gm = &ifs.maps()[g];
    let fg = |z: &[f64]| Point::from_vec(fm.apply(&gm.apply(z)));
    let gf = |z: &[f64]| Point::from_vec(gm.apply(&fm.apply(z)));
    let (x, y) = (pts[i].coords(), pts[j].coords());
    let corners = [fg(x), fg(y), gf(y), gf(x)];
    Ok(RectangleWitness {
        deviation: rectangle_deviation(&corners),
        corners,
        fixed_points: [p, q],
        generators: [pts[i].clone(), pts[j].clone()],
        cosine,
        depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{gasket_ifs, DEFAULT_POINT_BUDGET};

    #[test]
    fn same_index() {
        let g = gasket_ifs(2, 0.45).unwrap();
        assert_eq!(rectangle_in(&g, 1, 1, 2, DEFAULT_POINT_BUDGET), Err(Error::SameIndex(1)));
        assert!(matches!(rectangle_in(&g, 0, 3, 2, DEFAULT_POINT_BUDGET), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn fixed_points_closed_form() {
        let g = gasket_ifs(2, 0.3).unwrap();
        let (p, q) = composition_fixed_points(&g, 0, 1).unwrap();
        assert_ne!(p, q);
        let (f, h) = (&g.maps()[0], &g.maps()[1]);
        // P is fixed by f∘g, Q by g∘f
        let fp = f.apply(&h.apply(p.coords()));
        let gq = h.apply(&f.apply(q.coords()));
        assert!(dist(&fp, p.coords()) < 1e-14);
        assert!(dist(&gq, q.coords()) < 1e-14);
        // P - Q = (1-r)^2 (c_f - c_g) / (1 - r^2) for equal ratios
        let expected = 0.7 * 0.7 / (1.0 - 0.09);
        assert!((p.distance(&q) - expected).abs() < 1e-14);
    }

    #[test]
    fn quadrilateral_is_a_parallelogram() {
        let g = gasket_ifs(2, 0.45).unwrap();
        let w = rectangle_in(&g, 0, 1, 4, DEFAULT_POINT_BUDGET).unwrap();
        let c = w.corners.each_ref().map(|p| p.coords().to_vec());
        // AB = DC and AD = BC as vectors
        let ab = sub(&c[1], &c[0]);
        let dc = sub(&c[2], &c[3]);
        let ad = sub(&c[3], &c[0]);
        let bc = sub(&c[2], &c[1]);
        assert!(dist(&ab, &dc) < 1e-12 && dist(&ad, &bc) < 1e-12);
        assert!((w.recompute_deviation() - w.deviation).abs() < 1e-9);
        for a in 0..4 {
            for b in a + 1..4 {
                assert!(w.corners[a] != w.corners[b]);
            }
        }
    }

    #[test]
    fn deviation_shrinks_with_depth() {
        let g = gasket_ifs(2, 0.45).unwrap();
        let d: Vec<f64> = [2, 4, 6, 8]
            .iter()
            .map(|&k| rectangle_in(&g, 0, 1, k, DEFAULT_POINT_BUDGET).unwrap().deviation)
            .collect();
        for w in d.windows(2) {
            assert!(w[1] <= w[0], "{d:?}");
        }
        assert!(d[3] < 1e-2, "{d:?}");
    }
}
