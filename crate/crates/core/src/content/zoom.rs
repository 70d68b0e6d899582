use serde::{Deserialize, Serialize};

use super::grid::DyadicGrid;
use super::tree::{best_cube, Cube};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZoomResult {
    pub cube: Cube,
    /// `content_{s-2δ}(grid ∩ C) / edge(C)^(s-2δ)`.
    pub normalized_content: f64,
    /// The reduced exponent `s - 2δ`.
    pub exponent: f64,
    /// Coarsest level allowed: edges are at least `2^(⌈mδ/(2d)⌉ - m)`.
    pub max_level: u32,
    /// `2^(-s-2)`.
    pub threshold: f64,
    pub meets_threshold: bool,
    /// The occupied cells of the cube, rescaled to the unit cube.
    pub rescaled: DyadicGrid,
}

/// Among cubes with edge at least `2^(⌈mδ/(2d)⌉ - m)`, finds the one whose
/// normalized `(s - 2δ)`-content is largest and zooms into it.
pub fn microset_zoom(grid: &DyadicGrid, s: f64, delta: f64) -> Result<ZoomResult> {
    if !(delta > 0.0 && delta < s / 2.0) {
        return Err(Error::InvalidDelta { delta, s });
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let m = grid.levels();
    let d = grid.dimension() as f64;
    let margin = (m as f64 * delta / (2.0 * d)).ceil() as u32;
    let max_level = m.saturating_sub(margin);
    let exponent = s - 2.0 * delta;
    let (cube, normalized_content) = best_cube(grid, exponent, max_level);
    let threshold = (-s - 2.0).exp2();
    let rescaled = grid.zoom(cube.0, &cube.1)?;
    Ok(ZoomResult {
        cube,
        normalized_content,
        exponent,
        max_level,
        threshold,
        meets_threshold: normalized_content >= threshold,
        rescaled,
    })
}
