//! Witness finders: almost regular triangles through interval colourings,
//! near-right angles through projection, extreme angles by exhaustion, and a
//! chain search for supplementary angles.

mod chain;
mod extreme;
mod ramsey;
mod right;
mod triangle;

pub use chain::{supplementary_chain, ChainStep, SupplementaryWitness};
pub use extreme::{near_extreme_witness, Extreme};
pub use ramsey::{find_monochromatic_triangle, ramsey_bound, RegularityParams};
pub use right::{near_right_witness, RightAngleWitness};
pub use triangle::{almost_regular_triangle, regular_triangle_in_window, side_ratio, TriangleWitness};
