use serde::{Deserialize, Serialize};

use super::point::{norm, sub, Point, PointCloud};
use crate::error::{Error, Result};

/// Absolute arm-length floor for angles computed outside any cloud context.
pub const ABSOLUTE_DEGENERACY: f64 = 1e-300;
/// Relative arm-length floor (times the cloud diameter) inside a cloud.
pub const RELATIVE_DEGENERACY: f64 = 1e-12;

fn check_dims(a: &Point, b: &Point) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

pub(crate) fn unit(v: &[f64], threshold: f64) -> Result<Vec<f64>> {
    let n = norm(v);
    if !(n >= threshold) || n == 0.0 {
        return Err(Error::DegenerateVector { norm: n, threshold });
    }
    Ok(v.iter().map(|x| x / n).collect())
}

/// Angle in degrees between two unit vectors.
///
/// Uses `2 atan2(|a - b|, |a + b|)`, which stays accurate near 0 and 180
/// where the arccosine of the inner product loses half the digits.
pub(crate) fn unit_angle(a: &[f64], b: &[f64]) -> f64 {
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (x, y) in a.iter().zip(b) {
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    (2.0 * minus.sqrt().atan2(plus.sqrt())).to_degrees().clamp(0.0, 180.0)
}

/// Angle in degrees in `[0, 90]` between the lines spanned by two unit vectors.
pub(crate) fn unit_line_angle(a: &[f64], b: &[f64]) -> f64 {
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (x, y) in a.iter().zip(b) {
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    let (small, large) = if minus <= plus { (minus, plus) } else { (plus, minus) };
    (2.0 * small.sqrt().atan2(large.sqrt())).to_degrees().clamp(0.0, 90.0)
}

pub(crate) fn angle_at_with(apex: &[f64], p: &[f64], q: &[f64], threshold: f64) -> Result<f64> {
    let u = unit(&sub(p, apex), threshold)?;
    let v = unit(&sub(q, apex), threshold)?;
    Ok(unit_angle(&u, &v))
}

/// The angle at `apex` between the vectors `p - apex` and `q - apex`, in degrees.
pub fn angle_at(apex: &Point, p: &Point, q: &Point) -> Result<f64> {
    check_dims(apex, p)?;
    check_dims(apex, q)?;
    angle_at_with(apex.coords(), p.coords(), q.coords(), ABSOLUTE_DEGENERACY)
}

/// Angle in `[0, 90]` degrees between the line through `a, b` and the line through `c, d`.
pub fn line_pair_angle(a: &Point, b: &Point, c: &Point, d: &Point) -> Result<f64> {
    check_dims(a, b)?;
    check_dims(a, c)?;
    check_dims(a, d)?;
    let u = unit(&sub(b.coords(), a.coords()), ABSOLUTE_DEGENERACY)?;
    let v = unit(&sub(d.coords(), c.coords()), ABSOLUTE_DEGENERACY)?;
    Ok(unit_line_angle(&u, &v))
}

/// Angle window `(center - radius, center + radius) ∩ [0, 180]`, in degrees.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleInterval {
    pub center: f64,
    pub radius: f64,
}

impl AngleInterval {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !center.is_finite() || !(0.0..=180.0).contains(&center) {
            return Err(Error::InvalidParameter(format!("window center {center} outside [0, 180]")));
        }
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidParameter(format!("window radius {radius} must be >= 0")));
        }
        Ok(AngleInterval { center, radius })
    }

    /// Builds the window from its open endpoints `(lo, hi)`.
    pub fn from_bounds(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::InvalidWindow);
        }
        let center = 0.5 * (lo + hi);
        AngleInterval::new(center, 0.5 * (hi - lo))
    }

    pub fn contains(&self, angle: f64) -> bool {
        angle > self.center - self.radius && angle < self.center + self.radius
    }

    pub fn is_empty(&self) -> bool {
        self.radius == 0.0
    }

    /// Closed hull `[max(c - r, 0), min(c + r, 180)]`.
    pub fn closed_bounds(&self) -> (f64, f64) {
        ((self.center - self.radius).max(0.0), (self.center + self.radius).min(180.0))
    }
}

/// Three distinct points of a cloud and the angle they form at `apex`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleWitness {
    pub apex: Point,
    pub arm1: Point,
    pub arm2: Point,
    pub angle: f64,
    /// Indices of (apex, arm1, arm2) in the source cloud.
    pub indices: [usize; 3],
}

impl TripleWitness {
    pub fn from_cloud(cloud: &PointCloud, apex: usize, arm1: usize, arm2: usize) -> Result<Self> {
        let angle = angle_at(cloud.point(apex), cloud.point(arm1), cloud.point(arm2))?;
        Ok(Self::with_angle(cloud, [apex, arm1, arm2], angle))
    }

    pub(crate) fn with_angle(cloud: &PointCloud, indices: [usize; 3], angle: f64) -> Self {
        TripleWitness {
            apex: cloud.point(indices[0]).clone(),
            arm1: cloud.point(indices[1]).clone(),
            arm2: cloud.point(indices[2]).clone(),
            angle,
            indices,
        }
    }

    /// Recomputes the angle from the stored points and compares within `tol` degrees.
    pub fn verify(&self, tol: f64) -> bool {
        match angle_at(&self.apex, &self.arm1, &self.arm2) {
            Ok(a) => (a - self.angle).abs() <= tol && self.apex != self.arm1 && self.apex != self.arm2,
            Err(_) => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn axis_angles() {
        assert_eq!(angle_at(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[0., 1.])).unwrap(), 90.0);
        assert_eq!(angle_at(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[2., 0.])).unwrap(), 0.0);
        assert_eq!(angle_at(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[-2., 0.])).unwrap(), 180.0);
    }

    #[test]
    fn equilateral_apex() {
        let h = 3f64.sqrt() / 2.0;
        let a = angle_at(&p(&[0., 0.]), &p(&[1., 0.]), &p(&[0.5, h])).unwrap();
        assert!((a - 60.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_mismatch() {
        assert!(matches!(
            angle_at(&p(&[0., 0.]), &p(&[0., 0.]), &p(&[1., 0.])),
            Err(Error::DegenerateVector { .. })
        ));
        assert!(matches!(
            angle_at(&p(&[0., 0.]), &p(&[1., 0., 0.]), &p(&[1., 0.])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn line_angles() {
        let a = p(&[0., 0.]);
        let b = p(&[1., 0.]);
        assert_eq!(line_pair_angle(&a, &b, &a, &b).unwrap(), 0.0);
        assert_eq!(line_pair_angle(&a, &b, &b, &a).unwrap(), 0.0);
        let c = p(&[1., 1.]);
        assert!((line_pair_angle(&a, &b, &a, &c).unwrap() - 45.0).abs() < 1e-12);
        assert!((line_pair_angle(&a, &b, &c, &a).unwrap() - 45.0).abs() < 1e-12);
    }

    #[test]
    fn window_membership_is_open() {
        let w = AngleInterval::new(30.0, 5.0).unwrap();
        assert!(w.contains(25.0 + 1e-9));
        assert!(!w.contains(25.0));
        assert!(!w.contains(35.0));
        assert_eq!(AngleInterval::new(5.0, 10.0).unwrap().closed_bounds(), (0.0, 15.0));
        assert!(AngleInterval::new(181.0, 1.0).is_err());
        assert!(AngleInterval::new(90.0, 0.0).unwrap().is_empty());
    }
}
