use super::point::{dot, Point};
use crate::error::{Error, Result};

/// Vertices of a regular `n`-simplex with unit edges, as `n + 1` points of R^n.
///
/// The vertices start as `e_i / sqrt(2)` in R^(n+1); they are then expressed
/// in an orthonormal basis of their affine hull, built by modified
/// Gram-Schmidt on `v_i - v_0`. The first vertex lands on the origin.
pub fn regular_simplex(n: usize) -> Result<Vec<Point>> {
    if n < 1 {
        return Err(Error::InvalidDimension(n));
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let vertex = |i: usize| -> Vec<f64> {
        let mut v = vec![0.0; n + 1];
        v[i] = scale;
        v
    };
    let origin = vertex(0);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    for i in 1..=n {
        let mut w: Vec<f64> = vertex(i).iter().zip(&origin).map(|(a, b)| a - b).collect();
        for b in &basis {
            let c = dot(&w, b);
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let len = dot(&w, &w).sqrt();
        for x in &mut w {
            *x /= len;
        }
        basis.push(w);
    }

    Ok((0..=n)
        .map(|i| {
            let rel: Vec<f64> = vertex(i).iter().zip(&origin).map(|(a, b)| a - b).collect();
            Point::from_vec(basis.iter().map(|b| dot(&rel, b)).collect())
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::angle::{angle_at, line_pair_angle};

    #[test]
    fn rejects_zero() {
        assert_eq!(regular_simplex(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn segment() {
        let s = regular_simplex(1).unwrap();
        assert_eq!(s.len(), 2);
        assert!((s[0].distance(&s[1]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_edges_up_to_twelve() {
        for n in 1..=12 {
            let s = regular_simplex(n).unwrap();
            assert_eq!(s.len(), n + 1);
            assert!(s.iter().all(|p| p.dim() == n));
            for i in 0..=n {
                for j in i + 1..=n {
                    // independent check: squared distance from raw coordinates
                    let d2: f64 = s[i].coords().iter().zip(s[j].coords()).map(|(a, b)| (a - b).powi(2)).sum();
                    assert!((d2.sqrt() - 1.0).abs() < 1e-12, "n={n} ({i},{j}) {}", d2.sqrt());
                }
            }
        }
    }

    #[test]
    fn triangle_angles_are_sixty() {
        let s = regular_simplex(2).unwrap();
        for (a, b, c) in [(0, 1, 2), (1, 0, 2), (2, 0, 1)] {
            assert!((angle_at(&s[a], &s[b], &s[c]).unwrap() - 60.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tetrahedron_line_angles() {
        let s = regular_simplex(3).unwrap();
        // opposite edges are orthogonal
        assert!((line_pair_angle(&s[0], &s[1], &s[2], &s[3]).unwrap() - 90.0).abs() < 1e-9);
        // edges sharing a vertex meet at 60
        assert!((line_pair_angle(&s[0], &s[1], &s[0], &s[2]).unwrap() - 60.0).abs() < 1e-9);
    }
}
