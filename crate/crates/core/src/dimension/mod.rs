//! Packing numbers at dyadic scales, an empirical upper Minkowski dimension,
//! and well-spread subsets.

mod minkowski;
mod packing;
mod spread;

pub use minkowski::{minkowski_dimension_estimate, MinkowskiEstimate};
pub use packing::{packing_number_greedy, PackingReport};
pub use spread::{scan_scales, well_spread_subset, WellSpreadResult};

pub(crate) use packing::greedy_indices;
pub(crate) use spread::buckets;
