//! High-speed-train scenario: speed-dependent receive-beamwidth control and
//! a trackside-deployment trajectory simulator.
//!
//! A train runs along a straight track served by base stations offset
//! laterally from it. The receive beam width follows an inverse-speed law,
//! `theta_rx(deg) = coefficient / (f_c(GHz) * v(km/h))` clamped to
//! `[theta_min, theta_max]`, which keeps the worst-case (abeam) Doppler
//! spread near constant across the whole speed range. The simulator steps
//! time, integrates position from a piecewise-linear speed profile, selects
//! the serving station, and records Doppler shift/spread per step.
//!
//! The control law is evaluated in its native degree/GHz/(km/h) units at
//! this boundary and converted to SI immediately after.

use crate::approx::approx_shift_spread;
use crate::error::ModelError;
use crate::geometry::{doppler_support_for, max_doppler};
use serde::{Deserialize, Serialize};

/// Inverse-speed beamwidth control law with clamping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamPolicy {
    /// Control constant in degree * GHz * km/h.
    pub coefficient: f64,
    /// Widest beam, degrees (applied at and below `v_low_kmh`).
    pub theta_max_deg: f64,
    /// Narrowest beam, degrees.
    pub theta_min_deg: f64,
    /// Speed below which the beam stays at `theta_max_deg`, km/h.
    pub v_low_kmh: f64,
}

impl Default for BeamPolicy {
    fn default() -> Self {
        Self {
            coefficient: 1.4e4,
            theta_max_deg: 10.0,
            theta_min_deg: 1.0,
            v_low_kmh: 50.0,
        }
    }
}

impl BeamPolicy {
    /// A fixed-beamwidth policy, the baseline the controller is compared to.
    pub fn fixed(theta_deg: f64) -> Self {
        Self {
            coefficient: 1.4e4,
            theta_max_deg: theta_deg,
            theta_min_deg: theta_deg,
            v_low_kmh: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.coefficient.is_finite() || self.coefficient <= 0.0 {
            return Err(ModelError::config(
                "policy.coefficient",
                format!("must be > 0, got {}", self.coefficient),
            ));
        }
        if !self.theta_min_deg.is_finite()
            || self.theta_min_deg <= 0.0
            || self.theta_min_deg > self.theta_max_deg
        {
            return Err(ModelError::config(
                "policy.theta_min_deg",
                format!(
                    "need 0 < theta_min <= theta_max, got {} and {}",
                    self.theta_min_deg, self.theta_max_deg
                ),
            ));
        }
        if !self.theta_max_deg.is_finite() || self.theta_max_deg > 360.0 {
            return Err(ModelError::config(
                "policy.theta_max_deg",
                format!("must be <= 360 deg, got {}", self.theta_max_deg),
            ));
        }
        if self.v_low_kmh < 0.0 {
            return Err(ModelError::config(
                "policy.v_low_kmh",
                format!("must be >= 0, got {}", self.v_low_kmh),
            ));
        }
        Ok(())
    }
}

/// Receive beam width in degrees for a speed (km/h) and carrier (GHz).
pub fn beamwidth_for(
    speed_kmh: f64,
    carrier_ghz: f64,
    policy: &BeamPolicy,
) -> Result<f64, ModelError> {
    if !carrier_ghz.is_finite() || carrier_ghz <= 0.0 {
        return Err(ModelError::domain(format!(
            "carrier must be > 0 GHz, got {carrier_ghz}"
        )));
    }
    if !speed_kmh.is_finite() || speed_kmh < 0.0 {
        return Err(ModelError::domain(format!(
            "speed must be >= 0 km/h, got {speed_kmh}"
        )));
    }
    policy.validate()?;
    if speed_kmh <= policy.v_low_kmh {
        return Ok(policy.theta_max_deg);
    }
    let raw = policy.coefficient / (carrier_ghz * speed_kmh);
    Ok(raw.clamp(policy.theta_min_deg, policy.theta_max_deg))
}

/// A base station beside the track.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaseStation {
    /// Along-track coordinate, m.
    pub along_m: f64,
    /// Lateral offset from the track, m (> 0).
    pub lateral_m: f64,
}

/// Angle between the train's velocity vector and the line of sight to a
/// base station. `heading` is the sign of travel along the track. The angle
/// is 90 deg abeam, tends to 0 far before the station and to 180 deg far
/// past it.
pub fn theta_v_of(position_m: f64, station: &BaseStation, heading: f64) -> Result<f64, ModelError> {
    if !station.lateral_m.is_finite() || station.lateral_m <= 0.0 {
        return Err(ModelError::domain(format!(
            "station lateral offset must be > 0 m, got {}",
            station.lateral_m
        )));
    }
    let ahead = (station.along_m - position_m) * heading.signum();
    Ok(station.lateral_m.atan2(ahead))
}

/// Index of the nearest station (Euclidean); ties go to the lower index.
pub fn select_bs(position_m: f64, stations: &[BaseStation]) -> Result<usize, ModelError> {
    if stations.is_empty() {
        return Err(ModelError::domain("no base stations".to_string()));
    }
    let mut best = 0usize;
    let mut best_d2 = f64::INFINITY;
    for (i, s) in stations.iter().enumerate() {
        let dx = s.along_m - position_m;
        let d2 = dx * dx + s.lateral_m * s.lateral_m;
        if d2 < best_d2 {
            best_d2 = d2;
            best = i;
        }
    }
    Ok(best)
}

/// Piecewise-linear speed profile over time; held constant beyond the ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedProfile {
    points: Vec<(f64, f64)>,
}

impl SpeedProfile {
    /// `points` are `(time_s, speed_mps)` with strictly increasing times and
    /// nonnegative speeds.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if points.is_empty() {
            return Err(ModelError::config(
                "speed_profile",
                "needs at least one point",
            ));
        }
        for (i, &(t, v)) in points.iter().enumerate() {
            if !t.is_finite() || !v.is_finite() || v < 0.0 {
                return Err(ModelError::config(
                    "speed_profile",
                    format!("point {i}: time must be finite and speed >= 0, got ({t}, {v})"),
                ));
            }
            if i > 0 && t <= points[i - 1].0 {
                return Err(ModelError::config(
                    "speed_profile",
                    format!("point {i}: times must be strictly increasing"),
                ));
            }
        }
        Ok(Self { points })
    }

    pub fn constant(speed_mps: f64) -> Result<Self, ModelError> {
        Self::new(vec![(0.0, speed_mps)])
    }

    pub fn speed_at(&self, t: f64) -> f64 {
        let pts = &self.points;
        if t <= pts[0].0 {
            return pts[0].1;
        }
        if t >= pts[pts.len() - 1].0 {
            return pts[pts.len() - 1].1;
        }
        let i = pts.partition_point(|&(pt, _)| pt <= t);
        let (t0, v0) = pts[i - 1];
        let (t1, v1) = pts[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }

    pub fn end_time(&self) -> f64 {
        self.points[self.points.len() - 1].0
    }
}

/// Which shift/spread computation the simulator records per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftSpreadMethod {
    /// Small-beamwidth table approximations (matches the scenario analysis).
    #[default]
    Approximate,
    /// Exact support boundary formulas.
    Exact,
}

/// Full scenario description in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub track_length_m: f64,
    pub stations: Vec<BaseStation>,
    pub speed_profile: SpeedProfile,
    pub carrier_hz: f64,
    pub policy: BeamPolicy,
    pub time_step_s: f64,
    /// Serving-station hysteresis distance, m (0 disables it).
    pub hysteresis_m: f64,
    pub method: ShiftSpreadMethod,
    /// Hard stop; defaults to profile end plus the time to finish the track
    /// at the final speed.
    pub max_duration_s: Option<f64>,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !self.track_length_m.is_finite() || self.track_length_m <= 0.0 {
            return Err(ModelError::config(
                "track_length_m",
                format!("must be > 0, got {}", self.track_length_m),
            ));
        }
        if self.stations.is_empty() {
            return Err(ModelError::config("base_stations", "need at least one"));
        }
        for (i, s) in self.stations.iter().enumerate() {
            if !s.lateral_m.is_finite() || s.lateral_m <= 0.0 {
                return Err(ModelError::config(
                    format!("base_stations[{i}].lateral_m"),
                    format!("must be > 0, got {}", s.lateral_m),
                ));
            }
            if !s.along_m.is_finite() {
                return Err(ModelError::config(
                    format!("base_stations[{i}].along_m"),
                    "must be finite",
                ));
            }
        }
        if !self.carrier_hz.is_finite() || self.carrier_hz <= 0.0 {
            return Err(ModelError::config(
                "carrier_hz",
                format!("must be > 0, got {}", self.carrier_hz),
            ));
        }
        if !self.time_step_s.is_finite() || self.time_step_s <= 0.0 {
            return Err(ModelError::config(
                "time_step_s",
                format!("must be > 0, got {}", self.time_step_s),
            ));
        }
        if self.hysteresis_m < 0.0 {
            return Err(ModelError::config(
                "hysteresis_m",
                format!("must be >= 0, got {}", self.hysteresis_m),
            ));
        }
        self.policy.validate()
    }
}

fn default_schema_version() -> u32 {
    1
}

fn default_time_step() -> f64 {
    0.01
}

/// One point of the on-disk speed profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpeedPoint {
    /// Time since departure, s.
    pub t_s: f64,
    /// Speed at that time, km/h.
    pub kmh: f64,
}

/// On-disk scenario schema (JSON). Speeds are km/h here, matching the CLI
/// unit convention; everything converts to SI on load.
///
/// Fields:
/// - `schema_version`: integer, currently 1 (optional, default 1)
/// - `track_length_m`: track length in metres, > 0
/// - `base_stations`: list of `{along_m, lateral_m}`, lateral offsets > 0
/// - `speed_profile_kmh`: list of `{t_s, kmh}`, strictly increasing times;
///   piecewise-linear between points, held constant beyond the ends
/// - `carrier_hz`: carrier frequency in Hz, > 0
/// - `policy`: `{coefficient, theta_max_deg, theta_min_deg, v_low_kmh}`
///   (optional; defaults 1.4e4, 10, 1, 50)
/// - `time_step_s`: simulation step in seconds (optional, default 0.01)
/// - `hysteresis_m`: handover hysteresis distance (optional, default 0)
/// - `method`: `"approximate"` or `"exact"` (optional, default approximate)
/// - `max_duration_s`: hard stop override (optional)
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfigFile {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub track_length_m: f64,
    pub base_stations: Vec<BaseStation>,
    pub speed_profile_kmh: Vec<SpeedPoint>,
    pub carrier_hz: f64,
    #[serde(default)]
    pub policy: BeamPolicy,
    #[serde(default = "default_time_step")]
    pub time_step_s: f64,
    #[serde(default)]
    pub hysteresis_m: f64,
    #[serde(default)]
    pub method: ShiftSpreadMethod,
    #[serde(default)]
    pub max_duration_s: Option<f64>,
}

impl ScenarioConfigFile {
    /// Convert to the SI-unit scenario, validating every field.
    pub fn into_config(self) -> Result<ScenarioConfig, ModelError> {
        if self.schema_version != 1 {
            return Err(ModelError::config(
                "schema_version",
                format!("unsupported version {}", self.schema_version),
            ));
        }
        let profile = SpeedProfile::new(
            self.speed_profile_kmh
                .iter()
                .map(|p| (p.t_s, p.kmh / 3.6))
                .collect(),
        )?;
        let config = ScenarioConfig {
            track_length_m: self.track_length_m,
            stations: self.base_stations,
            speed_profile: profile,
            carrier_hz: self.carrier_hz,
            policy: self.policy,
            time_step_s: self.time_step_s,
            hysteresis_m: self.hysteresis_m,
            method: self.method,
            max_duration_s: self.max_duration_s,
        };
        config.validate()?;
        Ok(config)
    }
}

impl ScenarioConfig {
    /// Parse a scenario from its JSON file representation.
    pub fn from_json_str(json: &str) -> Result<Self, ModelError> {
        let file: ScenarioConfigFile = serde_json::from_str(json)
            .map_err(|e| ModelError::config("scenario file", e.to_string()))?;
        file.into_config()
    }
}

/// One simulated timestep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t_s: f64,
    pub position_m: f64,
    pub speed_mps: f64,
    pub serving_bs: usize,
    pub theta_v_rad: f64,
    pub theta_rx_rad: f64,
    pub f_dmax_hz: f64,
    pub shift_hz: f64,
    pub spread_hz: f64,
    pub handover: bool,
}

/// Simulated trajectory output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioTrace {
    pub rows: Vec<TraceRow>,
}

impl ScenarioTrace {
    pub fn handover_count(&self) -> usize {
        self.rows.iter().filter(|r| r.handover).count()
    }

    /// For each station, the index of the trace row closest to its abeam
    /// point (minimum |position - along|).
    pub fn abeam_rows(&self, stations: &[BaseStation]) -> Vec<usize> {
        stations
            .iter()
            .map(|s| {
                self.rows
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        (a.position_m - s.along_m)
                            .abs()
                            .partial_cmp(&(b.position_m - s.along_m).abs())
                            .unwrap()
                    })
                    .map(|(i, _)| i)
                    .unwrap_or(0)
            })
            .collect()
    }
}

/// Step the scenario: per timestep, serving station, velocity angle,
/// controlled beam width, maximum Doppler shift, and shift/spread.
///
/// Position integrates the speed profile trapezoidally. A handover is the
/// row where the serving station changed relative to the previous row.
pub fn simulate(config: &ScenarioConfig) -> Result<ScenarioTrace, ModelError> {
    config.validate()?;
    let dt = config.time_step_s;
    let carrier_ghz = config.carrier_hz / 1e9;
    let t_max = config.max_duration_s.unwrap_or_else(|| {
        let t_end = config.speed_profile.end_time();
        let v_end = config.speed_profile.speed_at(t_end);
        if v_end > 0.0 {
            t_end + config.track_length_m / v_end + dt
        } else {
            t_end
        }
    });

    let mut rows = Vec::new();
    let mut t = 0.0;
    let mut position = 0.0f64;
    let mut serving: Option<usize> = None;
    loop {
        let speed = config.speed_profile.speed_at(t);
        let bs = match (serving, config.hysteresis_m > 0.0) {
            (Some(current), true) => {
                let nearest = select_bs(position, &config.stations)?;
                let d = |i: usize| {
                    let s = &config.stations[i];
                    let dx = s.along_m - position;
                    (dx * dx + s.lateral_m * s.lateral_m).sqrt()
                };
                if d(nearest) + config.hysteresis_m < d(current) {
                    nearest
                } else {
                    current
                }
            }
            _ => select_bs(position, &config.stations)?,
        };
        let handover = serving.is_some_and(|prev| prev != bs);
        serving = Some(bs);

        let station = &config.stations[bs];
        let theta_v = theta_v_of(position, station, 1.0)?;
        let speed_kmh = speed * 3.6;
        let theta_rx_deg = beamwidth_for(speed_kmh, carrier_ghz, &config.policy)?;
        let theta_rx = theta_rx_deg.to_radians();
        let f_dmax = max_doppler(speed, config.carrier_hz)?;
        let (shift, spread) = match config.method {
            ShiftSpreadMethod::Approximate => {
                let a = approx_shift_spread(theta_v, theta_rx, f_dmax)?;
                (a.shift, a.spread)
            }
            ShiftSpreadMethod::Exact => {
                let s = doppler_support_for(theta_v, theta_rx, f_dmax)?;
                (s.shift, s.spread)
            }
        };
        rows.push(TraceRow {
            t_s: t,
            position_m: position,
            speed_mps: speed,
            serving_bs: bs,
            theta_v_rad: theta_v,
            theta_rx_rad: theta_rx,
            f_dmax_hz: f_dmax,
            shift_hz: shift,
            spread_hz: spread,
            handover,
        });

        if position >= config.track_length_m || t + dt > t_max + 1e-12 {
            break;
        }
        let v_next = config.speed_profile.speed_at(t + dt);
        position += dt * 0.5 * (speed + v_next);
        t += dt;
    }
    Ok(ScenarioTrace { rows })
}
