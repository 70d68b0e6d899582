//! Hausdorff content over dyadic cubes: an exact tree DP for the cheapest
//! cube cover, the densest cube, and zooming into a dense cube.

mod grid;
mod tree;
mod zoom;

pub use grid::{cell_count, DyadicGrid, DEFAULT_CELL_BUDGET, MAX_LEVELS};
pub use tree::{cover_value, dense_cube, dyadic_content, ContentResult, Cube, DenseCube};
pub use zoom::{microset_zoom, ZoomResult};
