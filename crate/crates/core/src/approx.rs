//! Small-beamwidth approximations of Doppler shift and spread.
//!
//! For a sufficiently narrow receive beam the support boundary cosines can be
//! linearized, giving per-region closed forms for the central shift and the
//! spread. The expansions drop terms of order `theta_rx^2`, so against the
//! exact boundaries the error stays within `f_dmax * theta_rx^2 / 2` for both
//! quantities; at `theta_v = 0` the approximate spread is zero while the
//! exact one is `f_dmax * (1 - cos(theta_rx/2))`.

use crate::error::ModelError;
use crate::geometry::{classify_region, wrap_angle, AngularRegion};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Approximate central Doppler shift and Doppler spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxShiftSpread {
    pub region: AngularRegion,
    /// Approximate central shift, Hz.
    pub shift: f64,
    /// Approximate spread, Hz (>= 0).
    pub spread: f64,
}

/// Small-beamwidth shift/spread per angular region (angles in radians).
///
/// Region I:   shift `f_dmax*(1 - theta_rx*|theta_v|/4)`, spread `f_dmax*(theta_rx/2)*|theta_v|`
/// Region II:  shift `f_dmax*cos(theta_v)`,               spread `f_dmax*theta_rx*sin|theta_v|`
/// Region III: shift `-f_dmax*(1 - theta_rx*(pi-|theta_v|)/4)`, spread `f_dmax*(theta_rx/2)*(pi-|theta_v|)`
///
/// Intended for narrow beams; callers should surface a warning above ~20 deg.
pub fn approx_shift_spread(
    theta_v: f64,
    theta_rx: f64,
    f_dmax: f64,
) -> Result<ApproxShiftSpread, ModelError> {
    if !f_dmax.is_finite() || f_dmax < 0.0 {
        return Err(ModelError::domain(format!(
            "f_dmax must be finite and >= 0 Hz, got {f_dmax}"
        )));
    }
    let region = classify_region(theta_v, theta_rx)?;
    let av = wrap_angle(theta_v).abs();
    let (shift, spread) = match region {
        AngularRegion::RegionI => (
            f_dmax * (1.0 - theta_rx * av / 4.0),
            f_dmax * (theta_rx / 2.0) * av,
        ),
        AngularRegion::RegionII => (f_dmax * av.cos(), f_dmax * theta_rx * av.sin()),
        AngularRegion::RegionIII => (
            -f_dmax * (1.0 - theta_rx * (PI - av) / 4.0),
            f_dmax * (theta_rx / 2.0) * (PI - av),
        ),
    };
    Ok(ApproxShiftSpread {
        region,
        shift,
        spread,
    })
}

/// Worst-case approximate spread over all velocity angles, reached at
/// broadside: `f_dmax * theta_rx`.
pub fn worst_case_spread(theta_rx: f64, f_dmax: f64) -> f64 {
    f_dmax * theta_rx
}
