//! Self-similar point sets that avoid angle windows, and witness finders for
//! angles, almost-regular triangles, dimensions and dyadic Hausdorff content
//! in finite point clouds.

pub mod anglefind;
pub mod content;
pub mod dimension;
pub mod error;
pub mod geom;
pub mod ifs;

pub use error::{Error, Result};
pub use geom::{AngleInterval, Point, PointCloud, TripleWitness};
