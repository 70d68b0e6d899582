use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::PointCloud;

/// Default cap on `2^(m·d)`, the number of cells of a grid.
pub const DEFAULT_CELL_BUDGET: u128 = 1 << 48;

/// Finest level supported; cell indices are `u64`.
pub const MAX_LEVELS: u32 = 62;

#[derive(Deserialize)]
struct RawGrid {
    dimension: usize,
    levels: u32,
    occupied: Vec<Vec<u64>>,
}

/// Occupied cells of the level-`m` subdivision of `[0,1]^d`. Cell `i` is the
/// product of `[i_j 2^-m, (i_j + 1) 2^-m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct DyadicGrid {
    dimension: usize,
    levels: u32,
    occupied: BTreeSet<Vec<u64>>,
}

impl TryFrom<RawGrid> for DyadicGrid {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        DyadicGrid::new(raw.dimension, raw.levels, raw.occupied)
    }
}

/// `2^(levels · dimension)`, or `None` past `u128`.
pub fn cell_count(dimension: usize, levels: u32) -> Option<u128> {
    let bits = (levels as usize).checked_mul(dimension)?;
    (bits < 128).then(|| 1u128 << bits)
}

impl DyadicGrid {
    pub fn new(dimension: usize, levels: u32, occupied: impl IntoIterator<Item = Vec<u64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if levels > MAX_LEVELS {
            return Err(Error::InvalidParameter(format!("at most {MAX_LEVELS} levels, got {levels}")));
        }
        let side = 1u64 << levels;
        let occupied: BTreeSet<Vec<u64>> = occupied.into_iter().collect();
        for cell in &occupied {
            if cell.len() != dimension {
                return Err(Error::DimensionMismatch { expected: dimension, found: cell.len() });
            }
            if let Some(&i) = cell.iter().find(|&&i| i >= side) {
                return Err(Error::InvalidParameter(format!("cell index {i} outside [0, {side})")));
            }
        }
        Ok(DyadicGrid { dimension, levels, occupied })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn occupied(&self) -> &BTreeSet<Vec<u64>> {
        &self.occupied
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    /// Every cell of the grid.
    pub fn full(dimension: usize, levels: u32, budget: u128) -> Result<Self> {
        let cells = cell_count(dimension, levels).unwrap_or(u128::MAX);
        if cells > budget {
            return Err(Error::BudgetExceeded { requested: cells, budget });
        }
        let side = 1u64 << levels;
        let mut occupied = BTreeSet::new();
        let mut cell = vec![0u64; dimension];
        loop {
            occupied.insert(cell.clone());
            let mut axis = 0;
            while axis < dimension {
                cell[axis] += 1;
                if cell[axis] < side {
                    break;
                }
                cell[axis] = 0;
                axis += 1;
            }
            if axis == dimension {
                break;
            }
        }
        DyadicGrid::new(dimension, levels, occupied)
    }

    /// Marks the level-`m` cell of every point. A point on a cell boundary
    /// goes to the lower-index cell, so `x` lands in `⌈x 2^m⌉ - 1` (and 0
    /// lands in cell 0).
    pub fn from_points(cloud: &PointCloud, levels: u32, budget: u128) -> Result<Self> {
        let cells = cell_count(cloud.dimension(), levels).unwrap_or(u128::MAX);
        if cells > budget {
            return Err(Error::BudgetExceeded { requested: cells, budget });
        }
        if levels > MAX_LEVELS {
            return Err(Error::InvalidParameter(format!("at most {MAX_LEVELS} levels, got {levels}")));
        }
        let scale = (levels as f64).exp2();
        let mut occupied = BTreeSet::new();
        for (index, p) in cloud.points().iter().enumerate() {
            if p.coords().iter().any(|&x| !(0.0..=1.0).contains(&x)) {
                return Err(Error::OutOfUnitCube { index });
            }
            occupied.insert(p.coords().iter().map(|&x| ((x * scale).ceil() as u64).saturating_sub(1)).collect());
        }
        DyadicGrid::new(cloud.dimension(), levels, occupied)
    }

    /// Cells inside the level-`level` cube `index`, moved to a grid of
    /// `levels - level` levels covering that cube.
    pub fn zoom(&self, level: u32, index: &[u64]) -> Result<DyadicGrid> {
        if level > self.levels || index.len() != self.dimension {
            return Err(Error::InvalidParameter(format!("no cube at level {level} with index {index:?}")));
        }
        let shift = self.levels - level;
        let cells = self
            .occupied
            .iter()
            .filter(|c| c.iter().zip(index).all(|(&i, &b)| i >> shift == b))
            .map(|c| c.iter().zip(index).map(|(&i, &b)| i - (b << shift)).collect());
        DyadicGrid::new(self.dimension, shift, cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::{gasket_ifs, iterate_cloud, DEFAULT_POINT_BUDGET};

    #[test]
    fn rasterize_examples() {
        let origin = PointCloud::from_coords(2, vec![vec![0.0, 0.0]]).unwrap();
        let g = DyadicGrid::from_points(&origin, 2, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(g.occupied().iter().collect::<Vec<_>>(), vec![&vec![0, 0]]);

        let mut centers = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                centers.push(vec![(i as f64 + 0.5) / 4.0, (j as f64 + 0.5) / 4.0]);
            }
        }
        let g = DyadicGrid::from_points(&PointCloud::from_coords(2, centers).unwrap(), 2, DEFAULT_CELL_BUDGET).unwrap();
        assert_eq!(g, DyadicGrid::full(2, 2, DEFAULT_CELL_BUDGET).unwrap());
    }

    #[test]
    fn boundaries_go_down() {
        let pts = vec![vec![0.25], vec![0.5], vec![1.0], vec![0.2500001]];
        let g = DyadicGrid::from_points(&PointCloud::from_coords(1, pts).unwrap(), 2, DEFAULT_CELL_BUDGET).unwrap();
        let cells: Vec<u64> = g.occupied().iter().map(|c| c[0]).collect();
        assert_eq!(cells, vec![0, 1, 3]);
    }

    #[test]
    fn errors() {
        let c = PointCloud::from_coords(2, vec![vec![0.5, 1.5]]).unwrap();
        assert_eq!(DyadicGrid::from_points(&c, 2, DEFAULT_CELL_BUDGET), Err(Error::OutOfUnitCube { index: 0 }));
        let c = PointCloud::from_coords(3, vec![vec![0.5, 0.5, 0.5]]).unwrap();
        assert_eq!(
            DyadicGrid::from_points(&c, 20, DEFAULT_CELL_BUDGET),
            Err(Error::BudgetExceeded { requested: 1 << 60, budget: DEFAULT_CELL_BUDGET })
        );
        assert!(DyadicGrid::new(2, 2, vec![vec![4, 0]]).is_err());
        assert!(DyadicGrid::new(2, 2, vec![vec![1]]).is_err());
    }

    #[test]
    fn gasket_cells_match_enumeration() {
        let g = gasket_ifs(2, 0.25).unwrap();
        let cloud = iterate_cloud(&g, 4, &g.centers(), DEFAULT_POINT_BUDGET).unwrap();
        let (unit, _) = cloud.normalized().unwrap();
        let grid = DyadicGrid::from_points(&unit, 4, DEFAULT_CELL_BUDGET).unwrap();
        // independent count: distinct cells by integer floor with the boundary rule
        let mut cells = std::collections::HashSet::new();
        for p in unit.points() {
            let key: Vec<i64> = p
                .coords()
                .iter()
                .map(|&x| {
                    let y = x * 16.0;
                    let f = y.floor();
                    (if f == y && y > 0.0 { f - 1.0 } else { f }) as i64
                })
                .collect();
            cells.insert(key);
        }
        assert_eq!(grid.len(), cells.len());
        // depth-4 pieces have edge 4^-4, far below the 2^-4 cells, so the 81
        // addresses share cells; each depth-2 piece spans a cell's width and
        // meets at most a few cells
        assert_eq!(grid.len(), 25);
    }

    #[test]
    fn zoom_and_json() {
        let g = DyadicGrid::new(2, 3, vec![vec![0, 0], vec![5, 6], vec![4, 7], vec![7, 7]]).unwrap();
        let z = g.zoom(1, &[1, 1]).unwrap();
        assert_eq!(z.levels(), 2);
        assert_eq!(z.occupied().iter().cloned().collect::<Vec<_>>(), vec![vec![0, 3], vec![1, 2], vec![3, 3]]);
        let text = g.to_json();
        assert_eq!(text, r#"{"dimension":2,"levels":3,"occupied":[[0,0],[4,7],[5,6],[7,7]]}"#);
        assert_eq!(DyadicGrid::from_json(&text).unwrap(), g);
        assert!(DyadicGrid::from_json(r#"{"dimension":2,"levels":1,"occupied":[[2,0]]}"#).is_err());
    }
}
