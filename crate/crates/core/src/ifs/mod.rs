//! Homothetic iterated function systems: the simplex gasket, its dimension,
//! strong-separation gap, angle-avoidance certificate, the common-prefix
//! lift of difference directions, and rectangles in attractors.

mod certificate;
mod lift;
mod rectangle;
mod separation;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{regular_simplex, Point, PointCloud};

pub use certificate::{avoidance_certificate, direction_deviation_bound, AvoidanceCertificate, Decision, SPECIAL_ANGLES};
pub use lift::{parallel_pair_lift, PairLift};
pub use rectangle::{composition_fixed_points, rectangle_in, RectangleWitness};
pub use separation::{polytope_distance, separation_gap, SeparationReport};

/// Default cap on the number of generated points (before deduplication).
pub const DEFAULT_POINT_BUDGET: u64 = 2_000_000;

/// `x -> center + ratio * (x - center)` with `0 < ratio < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Homothety {
    pub center: Point,
    pub ratio: f64,
}

impl Homothety {
    pub fn new(center: Point, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidRatio(ratio));
        }
        Ok(Homothety { center, ratio })
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.center.coords().iter().zip(x).map(|(c, v)| c + self.ratio * (v - c)).collect()
    }
}

#[derive(Deserialize)]
struct RawIfs {
    dimension: usize,
    maps: Vec<Homothety>,
}

/// A finite list of contracting homotheties of R^d.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawIfs")]
pub struct HomotheticIfs {
    dimension: usize,
    maps: Vec<Homothety>,
}

impl TryFrom<RawIfs> for HomotheticIfs {
    type Error = Error;

    fn try_from(raw: RawIfs) -> Result<Self> {
        HomotheticIfs::new(raw.dimension, raw.maps)
    }
}

impl HomotheticIfs {
    /// Needs at least two maps, centers of dimension `dimension`, at least two
    /// distinct centers and every ratio in `(0, 1)`.
    pub fn new(dimension: usize, maps: Vec<Homothety>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if maps.len() < 2 {
            return Err(Error::InvalidIfs(format!("need at least 2 maps, got {}", maps.len())));
        }
        for m in &maps {
            if m.center.dim() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: m.center.dim() });
            }
            if m.center.coords().iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite { index: 0 });
            }
            if !(m.ratio > 0.0 && m.ratio < 1.0) {
                return Err(Error::InvalidRatio(m.ratio));
            }
        }
        if maps.iter().all(|m| m.center == maps[0].center) {
            return Err(Error::InvalidIfs("all centers coincide".into()));
        }
        Ok(HomotheticIfs { dimension, maps })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn maps(&self) -> &[Homothety] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn centers(&self) -> Vec<Point> {
        self.maps.iter().map(|m| m.center.clone()).collect()
    }

    /// `S_{d1} ∘ S_{d2} ∘ ... ∘ S_{dk}` applied to `x` (last digit first).
    pub fn apply_code(&self, code: &AddressCode, x: &[f64]) -> Result<Vec<f64>> {
        self.check_code(code)?;
        Ok(code.digits().iter().rev().fold(x.to_vec(), |acc, &d| self.maps[d].apply(&acc)))
    }

    pub(crate) fn check_code(&self, code: &AddressCode) -> Result<()> {
        match code.digits().iter().find(|&&d| d >= self.maps.len()) {
            Some(&d) => Err(Error::InvalidCode(format!("digit {d} with {} maps", self.maps.len()))),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("ifs serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// A finite word over the map indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AddressCode(Vec<usize>);

impl AddressCode {
    pub fn new(digits: Vec<usize>) -> Self {
        AddressCode(digits)
    }

    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for AddressCode {
    type Err = Error;

    /// `"012"` (single digits) or `"0,11,3"` (comma separated, for 10+ maps).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let digits = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|e| Error::InvalidCode(e.to_string())))
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::InvalidCode(s.to_string())))
                .collect::<Result<Vec<_>>>()?
        };
        Ok(AddressCode(digits))
    }
}

impl fmt::Display for AddressCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&d| d < 10) {
            self.0.iter().try_for_each(|d| write!(f, "{d}"))
        } else {
            let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// The simplex gasket: `n + 1` homotheties of ratio `delta` centered at the
/// vertices of a unit regular `n`-simplex.
pub fn gasket_ifs(n: usize, delta: f64) -> Result<HomotheticIfs> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidRatio(delta));
    }
    let maps = regular_simplex(n)?
        .into_iter()
        .map(|c| Homothety::new(c, delta))
        .collect::<Result<Vec<_>>>()?;
    HomotheticIfs::new(n, maps)
}

/// The unique `s > 0` with `sum_i ratio_i^s = 1`, by bisection.
pub fn similarity_dimension(ifs: &HomotheticIfs) -> f64 {
    let ratios: Vec<f64> = ifs.maps.iter().map(|m| m.ratio).collect();
    let moran = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while moran(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-14 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if moran(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn bit_key(p: &[f64]) -> Vec<u64> {
    p.iter().map(|c| (c + 0.0).to_bits()).collect()
}

/// Images of every seed under every composition of length `depth`, ordered by
/// (address code, seed index) and deduplicated bitwise (first occurrence kept).
pub fn iterate_cloud(ifs: &HomotheticIfs, depth: usize, seeds: &[Point], budget: u64) -> Result<PointCloud> {
    if seeds.is_empty() {
        return Err(Error::EmptyCloud);
    }
    for s in seeds {
        if s.dim() != ifs.dimension {
            return Err(Error::DimensionMismatch { expected: ifs.dimension, found: s.dim() });
        }
    }
    let requested = (ifs.len() as u128)
        .checked_pow(depth as u32)
        .and_then(|c| c.checked_mul(seeds.len() as u128))
        .unwrap_or(u128::MAX);
    if requested > budget as u128 {
        return Err(Error::BudgetExceeded { requested, budget: budget as u128 });
    }
    let mut level: Vec<Vec<f64>> = seeds.iter().map(|s| s.coords().to_vec()).collect();
    for _ in 0..depth {
        let next: Vec<Vec<f64>> = ifs
            .maps
            .par_iter()
            .flat_map_iter(|m| level.iter().map(move |p| m.apply(p)))
            .collect();
        let mut seen = HashSet::with_capacity(next.len());
        level = next.into_iter().filter(|p| seen.insert(bit_key(p))).collect();
    }
    PointCloud::from_coords(ifs.dimension, level)
}
