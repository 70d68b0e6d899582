use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of R^d with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: 0 });
        }
        Ok(Point(coords))
    }

    /// Builds a point without validation. Callers guarantee finiteness.
    pub(crate) fn from_vec(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn distance(&self, other: &Point) -> f64 {
        dist(&self.0, &other.0)
    }

    fn bit_key(&self) -> Vec<u64> {
        // -0.0 and 0.0 are the same location
        self.0.iter().map(|c| (c + 0.0).to_bits()).collect()
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

/// Affine map `x -> (x - offset) * scale` used to bring a cloud into the unit cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub offset: Vec<f64>,
    pub scale: f64,
}

impl Normalization {
    pub fn apply(&self, p: &[f64]) -> Vec<f64> {
        p.iter().zip(&self.offset).map(|(x, o)| (x - o) * self.scale).collect()
    }

    pub fn invert(&self, p: &[f64]) -> Vec<f64> {
        p.iter().zip(&self.offset).map(|(x, o)| x / self.scale + o).collect()
    }
}

#[derive(Deserialize)]
struct RawCloud {
    dimension: usize,
    points: Vec<Vec<f64>>,
    #[serde(default)]
    label: Option<String>,
}

/// A finite set of points in R^d. Exact (bitwise) duplicates are dropped on
/// construction, keeping the first occurrence; near-duplicates are kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCloud")]
pub struct PointCloud {
    dimension: usize,
    points: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl TryFrom<RawCloud> for PointCloud {
    type Error = Error;

    fn try_from(raw: RawCloud) -> Result<Self> {
        let cloud = PointCloud::from_coords(raw.dimension, raw.points)?;
        Ok(match raw.label {
            Some(l) => cloud.with_label(l),
            None => cloud,
        })
    }
}

impl PointCloud {
    pub fn new(dimension: usize, points: Vec<Point>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let mut seen = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        for (index, p) in points.into_iter().enumerate() {
            if p.dim() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: p.dim() });
            }
            if p.coords().iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            if seen.insert(p.bit_key()) {
                kept.push(p);
            }
        }
        Ok(PointCloud { dimension, points: kept, label: None })
    }

    pub fn from_coords(dimension: usize, coords: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(dimension, coords.into_iter().map(Point::from_vec).collect())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Largest pairwise distance. Quadratic in the number of points.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.points.len() {
            let a = self.points[i].coords();
            for q in &self.points[i + 1..] {
                best = best.max(dist2(a, q.coords()));
            }
        }
        best.sqrt()
    }

    /// Per-axis minimum and maximum.
    pub fn bounding_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let first = self.points.first()?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points[1..] {
            for (j, &c) in p.coords().iter().enumerate() {
                lo[j] = lo[j].min(c);
                hi[j] = hi[j].max(c);
            }
        }
        Some((lo, hi))
    }

    /// The map sending the bounding box into `[0,1]^d`: shift the minimum
    /// corner to the origin, then divide by the longest box side.
    pub fn unit_cube_normalization(&self) -> Result<Normalization> {
        let (lo, hi) = self.bounding_box().ok_or(Error::EmptyCloud)?;
        let side = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max);
        let scale = if side > 0.0 { 1.0 / side } else { 1.0 };
        Ok(Normalization { offset: lo, scale })
    }

    pub fn normalized(&self) -> Result<(PointCloud, Normalization)> {
        let norm = self.unit_cube_normalization()?;
        let pts = self
            .points
            .iter()
            .map(|p| {
                let mut c = norm.apply(p.coords());
                // guard against 1 + ulp from the division
                for x in &mut c {
                    *x = x.clamp(0.0, 1.0);
                }
                Point::from_vec(c)
            })
            .collect();
        // normalization can merge points only if they were equal to begin with
        // up to rounding; keep indices aligned by bypassing dedup
        let cloud = PointCloud { dimension: self.dimension, points: pts, label: self.label.clone() };
        Ok((cloud, norm))
    }

    /// Image of the cloud under `x -> scale * x + shift`.
    pub fn transformed(&self, scale: f64, shift: &[f64]) -> Result<PointCloud> {
        if shift.len() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, found: shift.len() });
        }
        let pts = self
            .points
            .iter()
            .map(|p| Point::from_vec(p.coords().iter().zip(shift).map(|(x, t)| scale * x + t).collect()))
            .collect();
        PointCloud::new(self.dimension, pts)
    }

    pub fn subset(&self, indices: &[usize]) -> Result<PointCloud> {
        PointCloud::new(self.dimension, indices.iter().map(|&i| self.points[i].clone()).collect())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point cloud serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// One point per row, no header. Numbers use the shortest representation
    /// that parses back to the same bits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            for (j, c) in p.coords().iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{c:?}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Parse(e.to_string()))?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        let dimension = rows.first().map(|r| r.len()).ok_or(Error::EmptyCloud)?;
        PointCloud::from_coords(dimension, rows)
    }
}
