use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::AngleInterval;

/// Angles no gasket can avoid: every angle of the attractor lies within
/// the deviation bound of one of these.
pub const SPECIAL_ANGLES: [f64; 5] = [0.0, 60.0, 90.0, 120.0, 180.0];

/// `2 arccos((1 - 2δ) / (1 + 2δ))` in degrees: how far a difference direction
/// of the gasket attractor can turn away from the nearest vertex-pair direction.
pub fn direction_deviation_bound(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidRatio(delta));
    }
    // arccos(c) with c = (1-2δ)/(1+2δ) is atan2(√(8δ), 1-2δ), which stays
    // accurate as δ → 0 where arccos is ill-conditioned
    Ok(2.0 * (8.0 * delta).sqrt().atan2(1.0 - 2.0 * delta).to_degrees())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    CertifiedAvoided,
    NotCertified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvoidanceCertificate {
    pub decision: Decision,
    pub epsilon: f64,
    pub window: AngleInterval,
    /// Special angle whose closed ε-neighborhood meets the window, if any.
    pub blocking_angle: Option<f64>,
}

/// Decides whether the gasket `gasket_ifs(n, delta)` provably avoids `window`.
///
/// Certified iff the closed window is disjoint from every closed interval
/// `[a - ε, a + ε]`, `a` a special angle. Both sides are closed, so the answer
/// holds for the attractor itself and not just for finite approximations.
pub fn avoidance_certificate(n: usize, delta: f64, window: &AngleInterval) -> Result<AvoidanceCertificate> {
    if n < 2 {
        return Err(Error::InvalidDimension(n));
    }
    let epsilon = direction_deviation_bound(delta)?;
    let (lo, hi) = window.closed_bounds();
    let blocking_angle = SPECIAL_ANGLES
        .iter()
        .copied()
        .find(|a| lo <= a + epsilon && a - epsilon <= hi);
    Ok(AvoidanceCertificate {
        decision: if blocking_angle.is_none() { Decision::CertifiedAvoided } else { Decision::NotCertified },
        epsilon,
        window: *window,
        blocking_angle,
    })
}
