use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::HomotheticIfs;
use crate::geom::{dist, dot};

/// Minimum distance between the images of the centers' convex hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub gap: f64,
    /// `gap > 1e-12 * diam(centers)`; a positive answer certifies strong separation.
    pub separated: bool,
    /// The pair of maps attaining the gap.
    pub closest_pair: (usize, usize),
}

/// Point of the convex hull of `points` nearest to the origin (Wolfe's
/// minimum-norm-point algorithm). Returns the point.
fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let tol = 1e-13 * scale;
    let weight_tol = 1e-14;

    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .expect("nonempty point set");
    let mut support = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..10 * points.len() + 100 {
        let xx = dot(&x, &x);
        if xx <= tol {
            break;
        }
        let (j, best) = (0..points.len())
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - best <= tol || support.contains(&j) {
            break;
        }
        support.push(j);
        weights.push(0.0);

        loop {
            let alpha = affine_min_weights(points, &support);
            if alpha.iter().all(|&a| a > weight_tol) {
                weights = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= weight_tol && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            let before = support.len();
            let mut keep_s = Vec::with_capacity(before);
            let mut keep_w = Vec::with_capacity(before);
            // drop the smallest weight at least, so the loop always shrinks
            let min_pos = weights
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap();
            for (i, (&s, &w)) in support.iter().zip(&weights).enumerate() {
                if w > weight_tol && i != min_pos {
                    keep_s.push(s);
                    keep_w.push(w);
                }
            }
            let total: f64 = keep_w.iter().sum();
            if keep_s.is_empty() || total <= 0.0 {
                keep_s = vec![support[weights.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0]];
                keep_w = vec![1.0];
            } else {
                keep_w.iter_mut().for_each(|w| *w /= total);
            }
            support = keep_s;
            weights = keep_w;
            if support.len() == 1 {
                break;
            }
        }
        x = combine(points, &support, &weights);
    }
    x
}

fn combine(points: &[Vec<f64>], support: &[usize], weights: &[f64]) -> Vec<f64> {
    let mut x = vec![0.0; points[support[0]].len()];
    for (&s, &w) in support.iter().zip(weights) {
        for (xi, pi) in x.iter_mut().zip(&points[s]) {
            *xi += w * pi;
        }
    }
    x
}

/// Weights (summing to one) of the nearest point to the origin on the affine
/// hull of the support, via least squares in coordinates relative to the first point.
fn affine_min_weights(points: &[Vec<f64>], support: &[usize]) -> Vec<f64> {
    let d = points[support[0]].len();
    let k = support.len();
    if k == 1 {
        return vec![1.0];
    }
    let base = &points[support[0]];
    let cols = DMatrix::from_fn(d, k - 1, |r, c| points[support[c + 1]][r] - base[r]);
    let rhs = DVector::from_fn(d, |r, _| -base[r]);
    let beta = cols
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .unwrap_or_else(|_| DVector::zeros(k - 1));
    let mut w = Vec::with_capacity(k);
    w.push(1.0 - beta.sum());
    w.extend(beta.iter());
    w
}

/// Euclidean distance between the convex hulls of two finite point sets.
pub fn polytope_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let diffs: Vec<Vec<f64>> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| p.iter().zip(q).map(|(x, y)| x - y).collect()))
        .collect();
    let x = min_norm_point(&diffs);
    dot(&x, &x).sqrt()
}

/// Smallest distance between `S_i(H)` and `S_j(H)` over `i < j`, where `H` is
/// the convex hull of the centers. `H` contains the attractor, so a positive
/// gap certifies strong separation.
pub fn separation_gap(ifs: &HomotheticIfs) -> SeparationReport {
    let centers: Vec<Vec<f64>> = ifs.maps().iter().map(|m| m.center.coords().to_vec()).collect();
    let images: Vec<Vec<Vec<f64>>> = ifs
        .maps()
        .iter()
        .map(|m| centers.iter().map(|c| m.apply(c)).collect())
        .collect();
    let mut gap = f64::INFINITY;
    let mut closest_pair = (0, 1);
    for i in 0..images.len() {
        for j in i + 1..images.len() {
            let d = polytope_distance(&images[i], &images[j]);
            if d < gap {
                gap = d;
                closest_pair = (i, j);
            }
        }
    }
    let mut diam = 0.0f64;
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            diam = diam.max(dist(&centers[i], &centers[j]));
        }
    }
    SeparationReport { gap, separated: gap > 1e-12 * diam, closest_pair }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use crate::ifs::{gasket_ifs, Homothety};

    #[test]
    fn segments_and_triangles() {
        let a = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        let b = vec![vec![0.5, 2.0], vec![3.0, 2.0]];
        assert!((polytope_distance(&a, &b) - 2.0).abs() < 1e-12);
        // crossing segments
        let c = vec![vec![0.5, -1.0], vec![0.5, 1.0]];
        assert!(polytope_distance(&a, &c) < 1e-12);
        // point to triangle interior face
        let tri = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let p = vec![vec![0.2, 0.2, 0.7]];
        assert!((polytope_distance(&tri, &p) - 0.7).abs() < 1e-12);
        let q = vec![vec![0.5, 0.5 + 1.0, 0.0]];
        // nearest point of the hypotenuse x+y=1 to (0.5,1.5) is (0,1)
        assert!((polytope_distance(&tri, &q) - (0.25f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gasket_gap_is_one_minus_two_delta() {
        let r = separation_gap(&gasket_ifs(2, 0.25).unwrap());
        assert!((r.gap - 0.5).abs() < 1e-12, "{}", r.gap);
        assert!(r.separated);
        for n in 2..=6 {
            for delta in [0.05, 0.3, 0.45] {
                let r = separation_gap(&gasket_ifs(n, delta).unwrap());
                assert!((r.gap - (1.0 - 2.0 * delta)).abs() < 1e-10, "n={n} delta={delta} gap={}", r.gap);
            }
        }
    }

    #[test]
    fn touching_limit() {
        let r = separation_gap(&gasket_ifs(2, 0.5 - 1e-9).unwrap());
        assert!(r.gap < 1e-8);
    }

    #[test]
    fn shared_center_is_not_separated() {
        let p = |x: f64, y: f64| Point::new(vec![x, y]).unwrap();
        let ifs = HomotheticIfs::new(
            2,
            vec![
                Homothety::new(p(0.0, 0.0), 0.3).unwrap(),
                Homothety::new(p(0.0, 0.0), 0.2).unwrap(),
                Homothety::new(p(1.0, 0.0), 0.3).unwrap(),
            ],
        )
        .unwrap();
        let r = separation_gap(&ifs);
        assert!(r.gap < 1e-12);
        assert!(!r.separated);
        assert_eq!(r.closest_pair, (0, 1));
    }
}
