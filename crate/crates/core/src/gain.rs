//! Receive antenna gain patterns.

use crate::error::ModelError;
use crate::spectrum::ArrivalWindow;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Receive gain as a function of arrival angle (radians from boresight).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GainPattern {
    /// Constant gain `peak` inside the arrival window, zero outside.
    Flat { peak: f64 },
    /// Gaussian main lobe pinned to its half-power beam width:
    /// `G(theta) = peak * exp(-4*ln2*(theta/hpbw)^2)`, so `G(+-hpbw/2) = peak/2`.
    Parametric { hpbw: f64, peak: f64 },
}

impl GainPattern {
    /// Flat pattern with unit gain, the default of the single-window model.
    pub fn flat_unit() -> Self {
        GainPattern::Flat { peak: 1.0 }
    }

    pub fn peak(&self) -> f64 {
        match self {
            GainPattern::Flat { peak } | GainPattern::Parametric { peak, .. } => *peak,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            GainPattern::Flat { peak } => {
                if !peak.is_finite() || *peak <= 0.0 {
                    return Err(ModelError::domain(format!(
                        "gain peak must be finite and > 0, got {peak}"
                    )));
                }
            }
            GainPattern::Parametric { hpbw, peak } => {
                if !peak.is_finite() || *peak <= 0.0 {
                    return Err(ModelError::domain(format!(
                        "gain peak must be finite and > 0, got {peak}"
                    )));
                }
                if !hpbw.is_finite() || *hpbw <= 0.0 {
                    return Err(ModelError::domain(format!(
                        "gain hpbw must be finite and > 0 rad, got {hpbw}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Gain toward `theta`, with the flat pattern truncated to `window`.
    pub fn evaluate(&self, theta: f64, window: &ArrivalWindow) -> f64 {
        match self {
            GainPattern::Flat { peak } => {
                if window.contains(theta) {
                    *peak
                } else {
                    0.0
                }
            }
            GainPattern::Parametric { hpbw, peak } => {
                let x = theta / hpbw;
                peak * (-4.0 * LN_2 * x * x).exp()
            }
        }
    }
}
