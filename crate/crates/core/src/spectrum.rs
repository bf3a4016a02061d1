//! Closed-form Doppler densities and power spectra.
//!
//! The densities here are all variations of one map: an arrival angle
//! `theta`, uniform over a window, pushed through
//! `f_d = f_dmax * cos(theta - theta_v)`. Two evaluation modes are shipped:
//!
//! - [`EvalMode::SingleBranch`] windows the Jakes-like kernel
//!   `1/(theta_rx * f_dmax * sqrt(1 - (f_d/f_dmax)^2))` to the support
//!   interval, inverting the cosine on a single branch. In Regions I and III
//!   both pre-images of a shift can fall inside the receive window and the
//!   single-branch expression underestimates the density there (its integral
//!   drops below one).
//! - [`EvalMode::Exact`] sums the Jacobian contribution of every pre-image
//!   branch inside the window, which makes the result a true pdf and reduces
//!   to the Jakes spectrum for a full-circle window.
//!
//! Pointwise evaluation at exactly `|f_d| = f_dmax` returns `f64::INFINITY`
//! when that endpoint carries density; the singularity is integrable and
//! [`crate::integrate`] handles it via a cosine substitution. Serialization
//! paths replace the sentinel with a finite cap.

use crate::error::ModelError;
use crate::gain::GainPattern;
use crate::geometry::{doppler_support_for, wrap_angle, BeamGeometry, DopplerSupport, MotionState};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which form of the single-window density to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EvalMode {
    /// Single-branch expression windowed to the support interval.
    SingleBranch,
    /// Branch-summed true pdf (the default and the oracle-validated form).
    #[default]
    Exact,
}

impl EvalMode {
    pub fn tag(&self) -> &'static str {
        match self {
            EvalMode::SingleBranch => "single-branch",
            EvalMode::Exact => "exact",
        }
    }
}

/// An angular arrival window `[center - width/2, center + width/2]`,
/// in radians relative to the line of sight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrivalWindow {
    center: f64,
    width: f64,
}

impl ArrivalWindow {
    pub fn new(center: f64, width: f64) -> Result<Self, ModelError> {
        if !width.is_finite() || width <= 0.0 || width > 2.0 * PI {
            return Err(ModelError::domain(format!(
                "window width must be in (0, 2*pi] rad, got {width}"
            )));
        }
        if !center.is_finite() {
            return Err(ModelError::domain(format!(
                "window center must be finite, got {center}"
            )));
        }
        Ok(Self {
            center: wrap_angle(center),
            width,
        })
    }

    /// The receive beam window: centered on the line of sight, `theta_rx` wide.
    pub fn receive(geom: &BeamGeometry) -> Self {
        Self {
            center: 0.0,
            width: geom.theta_rx(),
        }
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Whether `angle` falls inside the window (circle-wrapped).
    ///
    /// Membership carries a 1e-12 rad guard: pre-image angles recovered
    /// through the `acos(f_d/f_dmax)` round-trip can land a few ulps past the
    /// edge, and the support boundary must stay inside its own window.
    pub fn contains(&self, angle: f64) -> bool {
        wrap_angle(angle - self.center).abs() <= self.width / 2.0 + 1e-12
    }

    /// Intersection with `other`, treating both as intervals about this
    /// window's center. Returns `None` when they do not overlap. For a
    /// near-full-circle window, a cluster hanging past the far side is
    /// clipped rather than wrapped into a second arc.
    pub fn intersect(&self, other: &ArrivalWindow) -> Option<ArrivalWindow> {
        let delta = wrap_angle(other.center - self.center);
        let lo = (delta - other.width / 2.0).max(-self.width / 2.0);
        let hi = (delta + other.width / 2.0).min(self.width / 2.0);
        if hi <= lo {
            return None;
        }
        Some(ArrivalWindow {
            center: wrap_angle(self.center + 0.5 * (lo + hi)),
            width: hi - lo,
        })
    }

    /// Doppler support of this window (boundary formulas applied with the
    /// window's own center and width).
    pub fn doppler_support(&self, theta_v: f64, f_dmax: f64) -> Result<DopplerSupport, ModelError> {
        doppler_support_for(wrap_angle(theta_v - self.center), self.width, f_dmax)
    }
}

/// U-shaped Jakes Doppler spectrum.
///
/// `1/(pi * f_dmax * sqrt(1 - (f_d/f_dmax)^2))` for `|f_d| < f_dmax`, zero
/// beyond, `f64::INFINITY` at exactly `|f_d| = f_dmax`.
pub fn jakes_psd(f_d: f64, f_dmax: f64) -> Result<f64, ModelError> {
    if !f_dmax.is_finite() || f_dmax <= 0.0 {
        return Err(ModelError::domain(format!(
            "f_dmax must be finite and > 0 Hz, got {f_dmax}"
        )));
    }
    let x = f_d / f_dmax;
    if x.abs() > 1.0 {
        Ok(0.0)
    } else if x.abs() == 1.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(1.0 / (PI * f_dmax * ((1.0 - x) * (1.0 + x)).sqrt()))
    }
}

/// Density of the Doppler shift over one arrival window.
///
/// `norm_width` is the angular width used in the kernel denominator; for a
/// single-window pdf it equals the window width, which makes the exact mode
/// integrate to one over the window's support.
fn windowed_density(
    f_d: f64,
    window: &ArrivalWindow,
    theta_v: f64,
    f_dmax: f64,
    mode: EvalMode,
    gain: Option<&GainPattern>,
) -> f64 {
    let x = f_d / f_dmax;
    if x.abs() > 1.0 {
        return 0.0;
    }
    if x.abs() == 1.0 {
        // unique pre-image: collinear (x = 1) or anti-collinear (x = -1)
        let theta = if x > 0.0 { theta_v } else { theta_v + PI };
        return if window.contains(theta) {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let u = x.acos();
    let kernel = 1.0 / (window.width() * f_dmax * ((1.0 - x) * (1.0 + x)).sqrt());
    let branch_plus = theta_v + u;
    let branch_minus = theta_v - u;
    let gain_at =
        |theta: f64| -> f64 { gain.map_or(1.0, |g| g.evaluate(wrap_angle(theta), window)) };
    match mode {
        EvalMode::Exact => {
            let mut density = 0.0;
            if window.contains(branch_plus) {
                density += kernel * gain_at(branch_plus);
            }
            if window.contains(branch_minus) {
                density += kernel * gain_at(branch_minus);
            }
            density
        }
        EvalMode::SingleBranch => {
            let support = window
                .doppler_support(theta_v, f_dmax)
                .expect("window and f_dmax validated by caller");
            if f_d < support.f_lo || f_d > support.f_hi {
                return 0.0;
            }
            // Eq-faithful single branch; fall back to the mirrored branch when
            // the written one misses the window so the gain is still evaluated
            // at an arrival angle that can actually contribute.
            let theta = if window.contains(branch_plus) {
                branch_plus
            } else if window.contains(branch_minus) {
                branch_minus
            } else {
                branch_plus
            };
            kernel * gain_at(theta)
        }
    }
}

/// Probability density of the Doppler shift for a beamformed receiver.
///
/// Returns zero (not an error) for `|f_d| > f_dmax`.
pub fn doppler_pdf(
    f_d: f64,
    geom: &BeamGeometry,
    motion: &MotionState,
    mode: EvalMode,
) -> Result<f64, ModelError> {
    if motion.f_dmax() <= 0.0 {
        return Err(ModelError::domain(
            "doppler_pdf requires f_dmax > 0 (nonzero speed)".to_string(),
        ));
    }
    Ok(windowed_density(
        f_d,
        &ArrivalWindow::receive(geom),
        geom.theta_v(),
        motion.f_dmax(),
        mode,
        None,
    ))
}

/// Doppler power spectral density: the shift pdf weighted by the receive
/// antenna gain at the contributing arrival angle(s). Unnormalized for
/// non-flat gain; with flat unit gain it coincides with [`doppler_pdf`].
pub fn doppler_psd(
    f_d: f64,
    geom: &BeamGeometry,
    motion: &MotionState,
    gain: &GainPattern,
    mode: EvalMode,
) -> Result<f64, ModelError> {
    gain.validate()?;
    if motion.f_dmax() <= 0.0 {
        return Err(ModelError::domain(
            "doppler_psd requires f_dmax > 0 (nonzero speed)".to_string(),
        ));
    }
    Ok(windowed_density(
        f_d,
        &ArrivalWindow::receive(geom),
        geom.theta_v(),
        motion.f_dmax(),
        mode,
        Some(gain),
    ))
}

/// One angular cluster of arrivals: mean angle, width, and relative power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Mean arrival angle relative to the line of sight (radians).
    pub center: f64,
    /// Angular width of the cluster (radians).
    pub width: f64,
    /// Relative power weight, >= 0 (normalized across the set).
    pub power: f64,
}

/// A validated set of clusters with powers normalized to sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    clusters: Vec<Cluster>,
}

impl ClusterSet {
    pub fn new(mut clusters: Vec<Cluster>) -> Result<Self, ModelError> {
        if clusters.is_empty() {
            return Err(ModelError::domain(
                "cluster set must contain at least one cluster".to_string(),
            ));
        }
        let mut total = 0.0;
        for (i, c) in clusters.iter().enumerate() {
            if !c.width.is_finite() || c.width <= 0.0 || c.width > 2.0 * PI {
                return Err(ModelError::domain(format!(
                    "cluster {i} width must be in (0, 2*pi] rad, got {}",
                    c.width
                )));
            }
            if !c.center.is_finite() {
                return Err(ModelError::domain(format!("cluster {i} center not finite")));
            }
            if !c.power.is_finite() || c.power < 0.0 {
                return Err(ModelError::domain(format!(
                    "cluster {i} power must be >= 0, got {}",
                    c.power
                )));
            }
            total += c.power;
        }
        if total <= 0.0 {
            return Err(ModelError::domain(
                "cluster powers must not all be zero".to_string(),
            ));
        }
        for c in &mut clusters {
            c.power /= total;
        }
        Ok(Self { clusters })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Per-cluster Doppler segments after intersecting each cluster with the
    /// receive beam. `None` marks a cluster that misses the beam entirely
    /// (it contributes nothing to the spectrum).
    pub fn segments(
        &self,
        geom: &BeamGeometry,
        motion: &MotionState,
    ) -> Vec<Option<DopplerSupport>> {
        let beam = ArrivalWindow::receive(geom);
        self.clusters
            .iter()
            .map(|c| {
                let cw = ArrivalWindow::new(c.center, c.width).expect("validated cluster");
                beam.intersect(&cw)
                    .map(|w| w.doppler_support(geom.theta_v(), motion.f_dmax()))
                    .transpose()
                    .expect("validated f_dmax")
            })
            .collect()
    }
}

/// Multi-cluster Doppler power spectrum: the power-weighted sum of
/// single-window spectra, each evaluated over the intersection of its
/// cluster with the receive beam.
pub fn multicluster_psd(
    f_d: f64,
    clusters: &ClusterSet,
    geom: &BeamGeometry,
    motion: &MotionState,
    gain: &GainPattern,
    mode: EvalMode,
) -> Result<f64, ModelError> {
    gain.validate()?;
    if motion.f_dmax() <= 0.0 {
        return Err(ModelError::domain(
            "multicluster_psd requires f_dmax > 0 (nonzero speed)".to_string(),
        ));
    }
    let beam = ArrivalWindow::receive(geom);
    let mut density = 0.0;
    for c in clusters.clusters() {
        let cw = ArrivalWindow::new(c.center, c.width)?;
        let Some(window) = beam.intersect(&cw) else {
            continue;
        };
        density += c.power
            * windowed_density(
                f_d,
                &window,
                geom.theta_v(),
                motion.f_dmax(),
                mode,
                Some(gain),
            );
    }
    Ok(density)
}

/// A spectrum sampled on a frequency grid, ready for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSamples {
    /// Strictly increasing frequencies in Hz.
    pub freqs: Vec<f64>,
    /// Densities in 1/Hz, zero outside `[-f_dmax, f_dmax]`.
    pub values: Vec<f64>,
    /// Maximum Doppler shift of the sampled model, Hz.
    pub f_dmax: f64,
    /// Evaluation-mode tag, e.g. "exact", "single-branch", "welch".
    pub mode: String,
}

impl SpectrumSamples {
    /// Evaluate `density` on a uniform `n`-point grid spanning
    /// `[-f_dmax, +f_dmax]`, replacing non-finite values (the endpoint
    /// singularity sentinel) with `endpoint_cap`.
    pub fn from_grid(
        f_dmax: f64,
        n: usize,
        endpoint_cap: f64,
        mode: impl Into<String>,
        mut density: impl FnMut(f64) -> Result<f64, ModelError>,
    ) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::domain(format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        if !f_dmax.is_finite() || f_dmax <= 0.0 {
            return Err(ModelError::domain(format!(
                "f_dmax must be finite and > 0 Hz, got {f_dmax}"
            )));
        }
        let mut freqs = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let f = -f_dmax + 2.0 * f_dmax * (i as f64) / ((n - 1) as f64);
            let v = density(f)?;
            freqs.push(f);
            values.push(if v.is_finite() { v } else { endpoint_cap });
        }
        Ok(Self {
            freqs,
            values,
            f_dmax,
            mode: mode.into(),
        })
    }
}
