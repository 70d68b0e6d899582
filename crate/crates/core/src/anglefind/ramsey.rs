use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest colour count accepted by [`RegularityParams`]; the bound has
/// tens of thousands of digits by then.
const MAX_COLORS: u64 = 10_000;

/// `3 · r!`, an upper bound on the `r`-colour Ramsey number for triangles.
pub fn ramsey_bound(r: u32) -> Result<BigUint> {
    if r < 2 {
        return Err(Error::InvalidArity(r));
    }
    Ok((2..=r).fold(BigUint::from(3u32), |acc, i| acc * i))
}

fn as_decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_str_radix(10))
}

/// Colour count and Ramsey bound for a target side ratio `1 + delta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityParams {
    pub delta: f64,
    /// `⌈3 / delta⌉` intervals partition `[a, 4a]`.
    pub colors: u64,
    #[serde(serialize_with = "as_decimal")]
    pub ramsey_bound: BigUint,
}

impl RegularityParams {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        let colors = (3.0 / delta).ceil();
        if colors > MAX_COLORS as f64 {
            return Err(Error::InvalidParameter(format!("delta {delta} needs more than {MAX_COLORS} colours")));
        }
        let colors = colors as u64;
        // one colour still needs 3 points for a triangle
        let ramsey_bound = if colors < 2 { BigUint::from(3u32) } else { ramsey_bound(colors as u32)? };
        Ok(RegularityParams { delta, colors, ramsey_bound })
    }
}

/// First triple `i < j < k` (lexicographic) whose three edges share a colour.
pub fn find_monochromatic_triangle<F>(n: usize, color: F) -> Option<[usize; 3]>
where
    F: Fn(usize, usize) -> usize + Sync,
{
    (0..n).into_par_iter().find_map_first(|i| {
        for j in i + 1..n {
            let c = color(i, j);
            for k in j + 1..n {
                if color(i, k) == c && color(j, k) == c {
                    return Some([i, j, k]);
                }
            }
        }
        None
    })
}
