//! Link geometry: beam widths, velocity angle, angular regions, and the
//! support of the beamformed Doppler spectrum.
//!
//! A wave arriving at angle `theta` (measured from the TX-RX line of sight)
//! at a receiver moving with speed `v` along direction `theta_v` is shifted
//! by `f_d = (v/c) * f_c * cos(theta - theta_v)`. Restricting arrivals to the
//! receive beam `[-theta_rx/2, +theta_rx/2]` confines `f_d` to an interval
//! `[f_lo, f_hi]` whose boundaries depend on which of three angular regions
//! `|theta_v|` falls in relative to the half beam width.

use crate::error::ModelError;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Speed of light in vacuum (m/s), exact by definition.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

const TWO_PI: f64 = 2.0 * PI;

/// Normalize an angle into `[-pi, pi)`.
///
/// In-range angles pass through unchanged, so wrapping `theta` and `-theta`
/// yields bit-identical magnitudes.
pub fn wrap_angle(angle: f64) -> f64 {
    if (-PI..PI).contains(&angle) {
        return angle;
    }
    (angle + PI).rem_euclid(TWO_PI) - PI
}

/// Maximum Doppler shift `(v/c) * f_c` in Hz.
pub fn max_doppler(speed_mps: f64, carrier_hz: f64) -> Result<f64, ModelError> {
    if !speed_mps.is_finite() || speed_mps < 0.0 {
        return Err(ModelError::domain(format!(
            "speed must be finite and >= 0 m/s, got {speed_mps}"
        )));
    }
    if !carrier_hz.is_finite() || carrier_hz <= 0.0 {
        return Err(ModelError::domain(format!(
            "carrier must be finite and > 0 Hz, got {carrier_hz}"
        )));
    }
    Ok(speed_mps / SPEED_OF_LIGHT * carrier_hz)
}

/// Transmit/receive half-power beam widths and the velocity angle.
///
/// `theta_v` is stored normalized into `[-pi, pi)`. The transmit beam width
/// is carried for completeness; under the uniform-arrival assumption the
/// Doppler spectrum does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGeometry {
    theta_tx: f64,
    theta_rx: f64,
    theta_v: f64,
}

impl BeamGeometry {
    /// Build from angles in radians. Beam widths must lie in `(0, 2*pi]`.
    pub fn new(theta_tx: f64, theta_rx: f64, theta_v: f64) -> Result<Self, ModelError> {
        for (name, width) in [("theta_tx", theta_tx), ("theta_rx", theta_rx)] {
            if !width.is_finite() || width <= 0.0 || width > TWO_PI {
                return Err(ModelError::domain(format!(
                    "{name} must be in (0, 2*pi] rad, got {width}"
                )));
            }
        }
        if !theta_v.is_finite() {
            return Err(ModelError::domain(format!(
                "theta_v must be finite, got {theta_v}"
            )));
        }
        Ok(Self {
            theta_tx,
            theta_rx,
            theta_v: wrap_angle(theta_v),
        })
    }

    /// Build from angles in degrees.
    pub fn from_degrees(
        theta_tx_deg: f64,
        theta_rx_deg: f64,
        theta_v_deg: f64,
    ) -> Result<Self, ModelError> {
        Self::new(
            theta_tx_deg.to_radians(),
            theta_rx_deg.to_radians(),
            theta_v_deg.to_radians(),
        )
    }

    pub fn theta_tx(&self) -> f64 {
        self.theta_tx
    }

    pub fn theta_rx(&self) -> f64 {
        self.theta_rx
    }

    /// Velocity angle, normalized into `[-pi, pi)`.
    pub fn theta_v(&self) -> f64 {
        self.theta_v
    }

    /// True when the receive beam spans at least a half circle. The
    /// single-window model targets narrow receive beams; results for wide
    /// beams are extrapolations and callers may want to surface a warning.
    pub fn wide_beam(&self) -> bool {
        self.theta_rx >= PI
    }
}

/// Receiver speed, carrier frequency, and the derived maximum Doppler shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionState {
    speed_mps: f64,
    carrier_hz: f64,
    f_dmax_hz: f64,
}

impl MotionState {
    pub fn new(speed_mps: f64, carrier_hz: f64) -> Result<Self, ModelError> {
        let f_dmax_hz = max_doppler(speed_mps, carrier_hz)?;
        Ok(Self {
            speed_mps,
            carrier_hz,
            f_dmax_hz,
        })
    }

    /// Build from a speed in km/h.
    pub fn from_kmh(speed_kmh: f64, carrier_hz: f64) -> Result<Self, ModelError> {
        Self::new(speed_kmh / 3.6, carrier_hz)
    }

    pub fn speed_mps(&self) -> f64 {
        self.speed_mps
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    /// Maximum Doppler shift `(v/c) * f_c` in Hz; zero iff the speed is zero.
    pub fn f_dmax(&self) -> f64 {
        self.f_dmax_hz
    }
}

/// The three velocity-angle bands with distinct Doppler-support formulas.
///
/// Boundary ties resolve downward: `|theta_v| = theta_rx/2` is Region I and
/// `|theta_v| = pi - theta_rx/2` is Region II. For beams of at least a half
/// circle the Region II band is empty and classification degrades to I/III.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AngularRegion {
    /// `|theta_v| <= theta_rx/2`: the beam contains the velocity direction.
    RegionI,
    /// `theta_rx/2 < |theta_v| <= pi - theta_rx/2`: broadside band.
    RegionII,
    /// `pi - theta_rx/2 < |theta_v| <= pi`: the beam contains the
    /// anti-velocity direction.
    RegionIII,
}

impl fmt::Display for AngularRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngularRegion::RegionI => write!(f, "I"),
            AngularRegion::RegionII => write!(f, "II"),
            AngularRegion::RegionIII => write!(f, "III"),
        }
    }
}

fn classify(abs_theta_v: f64, half_width: f64) -> AngularRegion {
    if abs_theta_v <= half_width {
        AngularRegion::RegionI
    } else if abs_theta_v <= PI - half_width {
        AngularRegion::RegionII
    } else {
        AngularRegion::RegionIII
    }
}

/// Classify the velocity angle against a receive beam width (both radians).
pub fn classify_region(theta_v: f64, theta_rx: f64) -> Result<AngularRegion, ModelError> {
    if !theta_rx.is_finite() || theta_rx <= 0.0 || theta_rx > TWO_PI {
        return Err(ModelError::domain(format!(
            "theta_rx must be in (0, 2*pi] rad, got {theta_rx}"
        )));
    }
    if !theta_v.is_finite() {
        return Err(ModelError::domain(format!(
            "theta_v must be finite, got {theta_v}"
        )));
    }
    Ok(classify(wrap_angle(theta_v).abs(), theta_rx / 2.0))
}

/// Support of the beamformed Doppler spectrum together with its central shift
/// and spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DopplerSupport {
    pub region: AngularRegion,
    /// Lower support boundary `f_d,1` in Hz.
    pub f_lo: f64,
    /// Upper support boundary `f_d,2` in Hz.
    pub f_hi: f64,
    /// Central Doppler shift `(f_d,1 + f_d,2)/2` in Hz.
    pub shift: f64,
    /// Doppler spread `f_d,2 - f_d,1` in Hz.
    pub spread: f64,
}

/// Doppler support for an arrival window of the given width centered on the
/// line of sight.
///
/// Region I:   `[f_dmax*cos(theta_rx/2 + |theta_v|), f_dmax]`
/// Region II:  `[f_dmax*cos(theta_rx/2 + |theta_v|), f_dmax*cos(theta_rx/2 - |theta_v|)]`
/// Region III: `[-f_dmax, f_dmax*cos(theta_rx/2 - |theta_v|)]`
///
/// For windows wider than a half circle the Region I cosine argument can
/// exceed pi, in which case the window wraps past the anti-velocity direction
/// and the lower boundary saturates at `-f_dmax` (the argument is clamped so
/// the reported interval is the true range of the shift over the window).
pub fn doppler_support_for(
    theta_v: f64,
    window_width: f64,
    f_dmax: f64,
) -> Result<DopplerSupport, ModelError> {
    if !f_dmax.is_finite() || f_dmax < 0.0 {
        return Err(ModelError::domain(format!(
            "f_dmax must be finite and >= 0 Hz, got {f_dmax}"
        )));
    }
    let region = classify_region(theta_v, window_width)?;
    let av = wrap_angle(theta_v).abs();
    let half = window_width / 2.0;
    let (f_lo, f_hi) = match region {
        AngularRegion::RegionI => (f_dmax * (half + av).min(PI).cos(), f_dmax),
        AngularRegion::RegionII => (f_dmax * (half + av).cos(), f_dmax * (half - av).cos()),
        AngularRegion::RegionIII => (-f_dmax, f_dmax * (half - av).cos()),
    };
    Ok(DopplerSupport {
        region,
        f_lo,
        f_hi,
        shift: 0.5 * (f_lo + f_hi),
        spread: f_hi - f_lo,
    })
}

/// Doppler support of the receive beam for the given geometry and motion.
pub fn doppler_support(geom: &BeamGeometry, motion: &MotionState) -> DopplerSupport {
    doppler_support_for(geom.theta_v(), geom.theta_rx(), motion.f_dmax())
        .expect("validated geometry and motion")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b} (tol {tol})");
    }

    #[test]
    fn max_doppler_500kmh_28ghz() {
        let f = max_doppler(500.0 / 3.6, 28e9).unwrap();
        // 12.96 kHz is the c = 3e8 value; exact c gives 12.97 kHz
        assert!((f - 12_960.0).abs() / 12_960.0 < 2e-3, "got {f}");
        assert_close(f, 12_971.9, 0.1, "exact-c value");
    }

    #[test]
    fn max_doppler_stationary_is_zero() {
        assert_eq!(max_doppler(0.0, 28e9).unwrap(), 0.0);
    }

    #[test]
    fn max_doppler_linear_in_carrier() {
        let full = max_doppler(500.0 / 3.6, 28e9).unwrap();
        let half = max_doppler(500.0 / 3.6, 14e9).unwrap();
        assert_close(half, full / 2.0, 1e-12, "linearity in carrier");
    }

    #[test]
    fn max_doppler_rejects_bad_inputs() {
        assert!(max_doppler(-1.0, 28e9).is_err());
        assert!(max_doppler(10.0, 0.0).is_err());
        assert!(max_doppler(10.0, -5.0).is_err());
        assert!(max_doppler(f64::NAN, 28e9).is_err());
    }

    #[test]
    fn region_classification_examples() {
        let rx = 10f64.to_radians();
        assert_eq!(classify_region(0.0, rx).unwrap(), AngularRegion::RegionI);
        assert_eq!(
            classify_region(90f64.to_radians(), rx).unwrap(),
            AngularRegion::RegionII
        );
        assert_eq!(
            classify_region(179f64.to_radians(), rx).unwrap(),
            AngularRegion::RegionIII
        );
    }

    #[test]
    fn region_boundaries_close_downward() {
        let rx = 10f64.to_radians();
        assert_eq!(
            classify_region(rx / 2.0, rx).unwrap(),
            AngularRegion::RegionI
        );
        assert_eq!(
            classify_region(PI - rx / 2.0, rx).unwrap(),
            AngularRegion::RegionII
        );
    }

    #[test]
    fn wide_beam_degrades_to_regions_i_and_iii() {
        let rx = 1.5 * PI;
        for deg in 0..=180 {
            let region = classify_region(f64::from(deg).to_radians(), rx).unwrap();
            assert_ne!(region, AngularRegion::RegionII, "theta_v = {deg} deg");
        }
    }

    #[test]
    fn theta_v_is_normalized() {
        let g = BeamGeometry::new(0.1, 0.1, 3.0 * PI).unwrap();
        assert_close(g.theta_v(), -PI, 1e-12, "wraps 3*pi");
        let g = BeamGeometry::new(0.1, 0.1, -PI / 2.0 - TWO_PI).unwrap();
        assert_close(g.theta_v(), -PI / 2.0, 1e-12, "wraps below");
    }

    #[test]
    fn support_region_i_head_on() {
        let fd = 12_970.0;
        let s = doppler_support_for(0.0, 10f64.to_radians(), fd).unwrap();
        assert_eq!(s.region, AngularRegion::RegionI);
        assert_close(s.f_lo, fd * 5f64.to_radians().cos(), 1e-9, "f_lo");
        assert_eq!(s.f_hi, fd);
    }

    #[test]
    fn support_region_ii_broadside_is_symmetric() {
        let fd = 1000.0;
        for rx_deg in [1.0f64, 10.0, 90.0, 179.0] {
            let rx = rx_deg.to_radians();
            let s = doppler_support_for(PI / 2.0, rx, fd).unwrap();
            let edge = fd * (rx / 2.0).sin();
            assert_close(s.f_lo, -edge, 1e-9 * fd, "f_lo = -fd*sin(rx/2)");
            assert_close(s.f_hi, edge, 1e-9 * fd, "f_hi = +fd*sin(rx/2)");
            assert_close(s.shift, 0.0, 1e-9 * fd, "zero shift at broadside");
        }
    }

    #[test]
    fn support_region_iii_tail_on() {
        let fd = 1000.0;
        let rx = 10f64.to_radians();
        let s = doppler_support_for(PI, rx, fd).unwrap();
        assert_eq!(s.region, AngularRegion::RegionIII);
        assert_eq!(s.f_lo, -fd);
        assert_close(s.f_hi, -fd * (rx / 2.0).cos(), 1e-9 * fd, "f_hi");
    }

    #[test]
    fn support_symmetric_in_theta_v() {
        let fd = 777.0;
        for rx_deg in [5.0f64, 45.0, 170.0, 359.0] {
            for tv_deg in [3.0f64, 30.0, 91.0, 178.0] {
                let rx = rx_deg.to_radians();
                let tv = tv_deg.to_radians();
                let a = doppler_support_for(tv, rx, fd).unwrap();
                let b = doppler_support_for(-tv, rx, fd).unwrap();
                assert_eq!(a, b, "rx {rx_deg} tv {tv_deg}");
            }
        }
    }

    #[test]
    fn support_region_ii_closed_forms() {
        let fd = 2500.0;
        let rx = 20f64.to_radians();
        let tv = 70f64.to_radians();
        let s = doppler_support_for(tv, rx, fd).unwrap();
        assert_eq!(s.region, AngularRegion::RegionII);
        assert_close(
            s.shift,
            fd * (rx / 2.0).cos() * tv.cos(),
            1e-9 * fd,
            "shift = fd*cos(rx/2)*cos(tv)",
        );
        assert_close(
            s.spread,
            2.0 * fd * (rx / 2.0).sin() * tv.sin(),
            1e-9 * fd,
            "spread = 2*fd*sin(rx/2)*sin(tv)",
        );
    }

    #[test]
    fn full_circle_support_spans_both_extremes() {
        let fd = 100.0;
        for tv_deg in [0.0f64, 45.0, 120.0, 180.0] {
            let s = doppler_support_for(tv_deg.to_radians(), TWO_PI, fd).unwrap();
            assert_eq!(s.f_lo, -fd, "theta_v = {tv_deg}");
            assert_eq!(s.f_hi, fd, "theta_v = {tv_deg}");
        }
    }

    #[test]
    fn wide_beam_flag() {
        assert!(!BeamGeometry::new(0.1, PI - 1e-9, 0.0).unwrap().wide_beam());
        assert!(BeamGeometry::new(0.1, PI, 0.0).unwrap().wide_beam());
    }

    #[test]
    fn support_bounds_within_max_doppler() {
        let fd = 42.0;
        for rx_deg in [1, 10, 90, 180, 270, 360] {
            for tv_deg in 0..=180 {
                let s = doppler_support_for(
                    f64::from(tv_deg).to_radians(),
                    f64::from(rx_deg).to_radians(),
                    fd,
                )
                .unwrap();
                assert!(s.f_lo <= s.f_hi, "ordered at rx {rx_deg} tv {tv_deg}");
                assert!(s.f_lo >= -fd - 1e-12 && s.f_hi <= fd + 1e-12);
                assert!(s.spread >= 0.0 && s.spread <= 2.0 * fd + 1e-12);
            }
        }
    }
}
