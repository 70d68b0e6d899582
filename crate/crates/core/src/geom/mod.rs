//! Points, clouds, angles at a vertex, angles between lines, regular
//! simplices and angle-spectrum queries.

mod angle;
mod point;
mod simplex;
mod spectrum;

pub use angle::{angle_at, line_pair_angle, AngleInterval, TripleWitness, ABSOLUTE_DEGENERACY, RELATIVE_DEGENERACY};
pub use point::{Normalization, Point, PointCloud};
pub use simplex::regular_simplex;
pub use spectrum::{angle_spectrum, spectrum_hits, spectrum_reduce, triple_count, Sampling, SpectrumEntry};

pub(crate) use angle::{unit, unit_angle, unit_line_angle};
pub(crate) use point::{dist, dot, norm, sub};
