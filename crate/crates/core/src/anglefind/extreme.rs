use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{spectrum_reduce, PointCloud, SpectrumEntry, TripleWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extreme {
    /// Smallest angle of the cloud.
    Zero,
    /// Largest angle of the cloud.
    Straight,
}

type Best = Option<(f64, usize, usize, usize)>;

fn better(a: Best, b: Best, target: Extreme) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let ord = match target {
                Extreme::Zero => x.0.total_cmp(&y.0),
                Extreme::Straight => y.0.total_cmp(&x.0),
            }
            .then((x.1, x.2, x.3).cmp(&(y.1, y.2, y.3)));
            if ord.is_le() {
                Some(x)
            } else {
                Some(y)
            }
        }
    }
}

/// Exhaustive search for the smallest (`Zero`) or largest (`Straight`) angle;
/// ties go to the lexicographically smallest `(apex, arm1, arm2)`.
pub fn near_extreme_witness(cloud: &PointCloud, target: Extreme) -> Result<TripleWitness> {
    let best = spectrum_reduce(
        cloud,
        None,
        || None,
        |acc: Best, e: &SpectrumEntry| better(acc, Some((e.angle, e.apex, e.arm1, e.arm2)), target),
        |a, b| better(a, b, target),
    )?;
    let (angle, apex, arm1, arm2) = best.expect("a cloud of three points has an angle");
    Ok(SpectrumEntry { apex, arm1, arm2, angle }.witness(cloud))
}
