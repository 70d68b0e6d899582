use serde::{Deserialize, Serialize};

use super::{AddressCode, HomotheticIfs};
use crate::error::{Error, Result};
use crate::geom::{sub, unit, unit_angle, Point, ABSOLUTE_DEGENERACY};

/// Two coded points and their pre-images under the longest common prefix map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairLift {
    pub x0: Point,
    pub x1: Point,
    pub y0: Point,
    pub y1: Point,
    pub prefix: AddressCode,
    /// First differing digits; `y0` lies in `S_i(K)` and `y1` in `S_j(K)`.
    pub i: usize,
    pub j: usize,
    /// Angle in degrees between `y0 - y1` and `x0 - x1`.
    pub direction_gap: f64,
}

/// Strips the common prefix `S` of two codes. The prefix map is a homothety
/// with positive ratio, so `y0 - y1` points the same way as `x0 - x1`.
pub fn parallel_pair_lift(
    ifs: &HomotheticIfs,
    code0: &AddressCode,
    code1: &AddressCode,
    seeds: (&Point, &Point),
) -> Result<PairLift> {
    ifs.check_code(code0)?;
    ifs.check_code(code1)?;
    if code0.len() != code1.len() {
        return Err(Error::InvalidCode(format!("lengths differ: {} vs {}", code0.len(), code1.len())));
    }
    if code0 == code1 {
        return Err(Error::IdenticalCodes);
    }
    for s in [seeds.0, seeds.1] {
        if s.dim() != ifs.dimension() {
            return Err(Error::DimensionMismatch { expected: ifs.dimension(), found: s.dim() });
        }
    }
    let split = code0.digits().iter().zip(code1.digits()).take_while(|(a, b)| a == b).count();
    let prefix = AddressCode::new(code0.digits()[..split].to_vec());
    let rest0 = AddressCode::new(code0.digits()[split..].to_vec());
    let rest1 = AddressCode::new(code1.digits()[split..].to_vec());

    let y0 = ifs.apply_code(&rest0, seeds.0.coords())?;
    let y1 = ifs.apply_code(&rest1, seeds.1.coords())?;
    let x0 = ifs.apply_code(&prefix, &y0)?;
    let x1 = ifs.apply_code(&prefix, &y1)?;

    let dx = unit(&sub(&x0, &x1), ABSOLUTE_DEGENERACY)?;
    let dy = unit(&sub(&y0, &y1), ABSOLUTE_DEGENERACY)?;
    Ok(PairLift {
        direction_gap: unit_angle(&dx, &dy),
        i: rest0.digits()[0],
        j: rest1.digits()[0],
        prefix,
        x0: Point::from_vec(x0),
        x1: Point::from_vec(x1),
        y0: Point::from_vec(y0),
        y1: Point::from_vec(y1),
    })
}
