//! Time-domain fading realizations matching the beamformed Doppler spectrum.
//!
//! Synthesis is a sum of sinusoids: arrival angles drawn uniformly over the
//! receive window (the oracle's sampling model), each carried by a tone at
//! `f_n = f_dmax*cos(theta_n - theta_v)` with an independent uniform phase.
//! Antenna gain enters through per-path amplitudes `sqrt(G(theta_n)/mean G)`,
//! so the realization has unit mean power by construction and a spectrum
//! proportional to the gain-weighted density. Direct spectral shaping by
//! filtering was rejected: the beamformed spectra are extremely narrow and
//! make FIR design ill-conditioned, while the geometric construction needs
//! no filter at all.

use crate::error::ModelError;
use crate::gain::GainPattern;
use crate::geometry::{BeamGeometry, MotionState};
use crate::spectrum::{ArrivalWindow, SpectrumSamples};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use std::f64::consts::PI;

/// A complex baseband channel realization sampled at `sample_rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingRealization {
    pub samples: Vec<Complex64>,
    pub sample_rate: f64,
    pub seed: u64,
    pub n_paths: usize,
}

impl FadingRealization {
    /// Time-averaged power `mean |h|^2`; unity up to finite-record variance.
    pub fn mean_power(&self) -> f64 {
        self.samples.iter().map(|h| h.norm_sqr()).sum::<f64>() / self.samples.len() as f64
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }
}

fn fading_rng(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8] = 0xfa; // separate stream family from the oracle sampler
    ChaCha8Rng::from_seed(key)
}

/// Generate a sum-of-sinusoids realization of the beamformed channel.
///
/// `sample_rate` must exceed twice the maximum Doppler shift. Records with
/// `duration * spread < 10` resolve the fading statistics poorly; callers
/// may want to warn.
pub fn generate_fading(
    geom: &BeamGeometry,
    motion: &MotionState,
    gain: &GainPattern,
    n_paths: usize,
    duration_s: f64,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<FadingRealization, ModelError> {
    gain.validate()?;
    if n_paths < 8 {
        return Err(ModelError::domain(format!(
            "need at least 8 paths for a sum-of-sinusoids realization, got {n_paths}"
        )));
    }
    let f_dmax = motion.f_dmax();
    if !sample_rate_hz.is_finite() || sample_rate_hz <= 2.0 * f_dmax || sample_rate_hz <= 0.0 {
        return Err(ModelError::domain(format!(
            "sample_rate {sample_rate_hz} Hz violates Nyquist for the Doppler process; \
             need > {} Hz (2 * f_dmax with f_dmax = {f_dmax} Hz)",
            2.0 * f_dmax
        )));
    }
    let n_samples = (duration_s * sample_rate_hz).round() as usize;
    if !duration_s.is_finite() || duration_s <= 0.0 || n_samples == 0 {
        return Err(ModelError::domain(format!(
            "duration {duration_s} s yields no samples at {sample_rate_hz} Hz"
        )));
    }

    let window = ArrivalWindow::receive(geom);
    let mut rng = fading_rng(seed);
    let thetas: Vec<f64> = (0..n_paths)
        .map(|_| (rng.random::<f64>() - 0.5) * window.width())
        .collect();
    let phases: Vec<f64> = (0..n_paths)
        .map(|_| rng.random::<f64>() * 2.0 * PI)
        .collect();
    let gains: Vec<f64> = thetas.iter().map(|&t| gain.evaluate(t, &window)).collect();
    let mean_gain = gains.iter().sum::<f64>() / n_paths as f64;

    let mut samples = vec![Complex64::new(0.0, 0.0); n_samples];
    let scale = 1.0 / (n_paths as f64).sqrt();
    for n in 0..n_paths {
        let amp = scale * (gains[n] / mean_gain).sqrt();
        let omega = 2.0 * PI * f_dmax * (thetas[n] - geom.theta_v()).cos() / sample_rate_hz;
        let rot = Complex64::from_polar(1.0, omega);
        let mut phasor = Complex64::from_polar(amp, phases[n]);
        for s in samples.iter_mut() {
            *s += phasor;
            phasor *= rot;
        }
    }

    Ok(FadingRealization {
        samples,
        sample_rate: sample_rate_hz,
        seed,
        n_paths,
    })
}

/// Welch averaged-periodogram PSD estimate of a realization, two-sided over
/// `[-sample_rate/2, +sample_rate/2)` in power per Hz.
pub fn estimate_psd(
    realization: &FadingRealization,
    segment_len: usize,
    overlap_frac: f64,
) -> Result<SpectrumSamples, ModelError> {
    let n = realization.samples.len();
    if segment_len < 4 {
        return Err(ModelError::domain(format!(
            "segment length must be >= 4, got {segment_len}"
        )));
    }
    if segment_len > n {
        return Err(ModelError::domain(format!(
            "record too short: {n} samples for segment length {segment_len}"
        )));
    }
    if !(0.0..1.0).contains(&overlap_frac) {
        return Err(ModelError::domain(format!(
            "overlap fraction must be in [0, 1), got {overlap_frac}"
        )));
    }
    let fs = realization.sample_rate;
    let hop = ((segment_len as f64) * (1.0 - overlap_frac))
        .round()
        .max(1.0) as usize;

    // periodic Hann window
    let window: Vec<f64> = (0..segment_len)
        .map(|l| 0.5 * (1.0 - (2.0 * PI * l as f64 / segment_len as f64).cos()))
        .collect();
    let window_power: f64 = window.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(segment_len);
    let mut acc = vec![0.0f64; segment_len];
    let mut n_segments = 0usize;
    let mut start = 0usize;
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    while start + segment_len <= n {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = realization.samples[start + i] * window[i];
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(buf.iter()) {
            *a += b.norm_sqr();
        }
        n_segments += 1;
        start += hop;
    }

    let norm = 1.0 / (n_segments as f64 * fs * window_power);
    let half = segment_len / 2;
    let mut freqs = Vec::with_capacity(segment_len);
    let mut values = Vec::with_capacity(segment_len);
    for i in 0..segment_len {
        let k = i as isize - half as isize;
        freqs.push(k as f64 * fs / segment_len as f64);
        values.push(acc[(i + segment_len - half) % segment_len] * norm);
    }
    Ok(SpectrumSamples {
        freqs,
        values,
        f_dmax: fs / 2.0,
        mode: "welch".to_string(),
    })
}

/// Analytic coherence time `1/spread`; `+inf` for zero spread.
pub fn coherence_time_from_spread(spread_hz: f64) -> f64 {
    if spread_hz <= 0.0 {
        f64::INFINITY
    } else {
        1.0 / spread_hz
    }
}

/// Empirical coherence time: the first lag at which the normalized
/// autocorrelation magnitude drops below 0.5 (the conventional threshold;
/// no universal constant exists).
pub fn coherence_time_empirical(realization: &FadingRealization) -> Result<f64, ModelError> {
    let h = &realization.samples;
    let n = h.len();
    let r0 = h.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
    if r0 <= 0.0 {
        return Err(ModelError::domain("realization has zero power".to_string()));
    }
    for lag in 1..n / 2 {
        let m = n - lag;
        let mut r = Complex64::new(0.0, 0.0);
        for k in 0..m {
            r += h[k + lag] * h[k].conj();
        }
        let rho = (r / m as f64).norm() / r0;
        if rho < 0.5 {
            return Ok(lag as f64 / realization.sample_rate);
        }
    }
    Err(ModelError::domain(
        "record too short to resolve the 0.5 autocorrelation crossing".to_string(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::doppler_support;

    fn setup(theta_rx_deg: f64, theta_v_deg: f64, speed_kmh: f64) -> (BeamGeometry, MotionState) {
        (
            BeamGeometry::from_degrees(theta_rx_deg, theta_rx_deg, theta_v_deg).unwrap(),
            MotionState::from_kmh(speed_kmh, 2e9).unwrap(),
        )
    }

    #[test]
    fn stationary_channel_has_constant_envelope() {
        let (g, _) = setup(10.0, 30.0, 0.0);
        let m = MotionState::new(0.0, 2e9).unwrap();
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 32, 1.0, 100.0, 4).unwrap();
        let first = r.samples[0].norm();
        for s in &r.samples {
            assert!((s.norm() - first).abs() < 1e-9, "envelope moved");
        }
    }

    #[test]
    fn degenerate_window_is_a_single_tone() {
        let g = BeamGeometry::new(1e-6, 1e-6, 60f64.to_radians()).unwrap();
        let m = MotionState::from_kmh(500.0, 28e9).unwrap();
        let fs = 60_000.0;
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 64, 0.01, fs, 9).unwrap();
        let f0 = m.f_dmax() * 60f64.to_radians().cos();
        // remove the nominal tone; what is left should hold its phase
        let base_phase = r.samples[0].arg();
        let mut max_dev = 0.0f64;
        for (k, s) in r.samples.iter().enumerate() {
            let t = k as f64 / fs;
            let derotated = s * Complex64::from_polar(1.0, -2.0 * PI * f0 * t);
            let mut dphi = derotated.arg() - base_phase;
            while dphi > PI {
                dphi -= 2.0 * PI;
            }
            while dphi < -PI {
                dphi += 2.0 * PI;
            }
            max_dev = max_dev.max(dphi.abs());
        }
        assert!(max_dev < 1e-3, "phase wandered by {max_dev} rad");
    }

    #[test]
    fn mean_power_near_unity() {
        let (g, _) = setup(10.0, 90.0, 500.0);
        let m = MotionState::from_kmh(500.0, 28e9).unwrap();
        let r =
            generate_fading(&g, &m, &GainPattern::flat_unit(), 256, 10.0, 30_000.0, 12).unwrap();
        assert!((r.mean_power() - 1.0).abs() < 0.05, "{}", r.mean_power());
    }

    #[test]
    fn nyquist_violation_names_required_rate() {
        let (g, m) = setup(10.0, 90.0, 500.0);
        let err =
            generate_fading(&g, &m, &GainPattern::flat_unit(), 64, 1.0, 100.0, 1).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Nyquist"), "{msg}");
        assert!(msg.contains("f_dmax"), "{msg}");
    }

    #[test]
    fn too_few_paths_rejected() {
        let (g, m) = setup(10.0, 90.0, 100.0);
        assert!(generate_fading(&g, &m, &GainPattern::flat_unit(), 4, 1.0, 1500.0, 1).is_err());
    }

    #[test]
    fn psd_peak_bin_contains_single_tone() {
        let g = BeamGeometry::new(1e-6, 1e-6, 0.0).unwrap();
        let m = MotionState::from_kmh(200.0, 2e9).unwrap();
        let fs = 2_000.0;
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 32, 2.0, fs, 3).unwrap();
        let psd = estimate_psd(&r, 256, 0.5).unwrap();
        let f0 = m.f_dmax(); // theta_v = 0: tone at +f_dmax
        let peak = psd
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .unwrap()
            .0;
        let bin = fs / 256.0;
        assert!(
            (psd.freqs[peak] - f0).abs() <= bin,
            "peak at {} Hz, tone at {f0} Hz",
            psd.freqs[peak]
        );
    }

    #[test]
    fn estimated_mass_concentrates_on_support() {
        let (g, _) = setup(10.0, 90.0, 500.0);
        let m = MotionState::from_kmh(500.0, 28e9).unwrap();
        let fs = 30_000.0;
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 512, 1.0, fs, 21).unwrap();
        let psd = estimate_psd(&r, 512, 0.5).unwrap();
        let sup = doppler_support(&g, &m);
        let bin = fs / 512.0;
        let total: f64 = psd.values.iter().sum::<f64>() * bin;
        let inside: f64 = psd
            .freqs
            .iter()
            .zip(psd.values.iter())
            .filter(|(f, _)| **f >= sup.f_lo - 2.0 * bin && **f <= sup.f_hi + 2.0 * bin)
            .map(|(_, v)| v)
            .sum::<f64>()
            * bin;
        assert!(
            inside / total >= 0.95,
            "only {:.1}% of mass on support",
            100.0 * inside / total
        );
    }

    #[test]
    fn parseval_consistency() {
        let (g, _) = setup(10.0, 45.0, 500.0);
        let m = MotionState::from_kmh(500.0, 28e9).unwrap();
        let fs = 30_000.0;
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 256, 1.0, fs, 8).unwrap();
        let psd = estimate_psd(&r, 512, 0.5).unwrap();
        let bin = fs / 512.0;
        let spectral_power: f64 = psd.values.iter().sum::<f64>() * bin;
        let time_power = r.mean_power();
        assert!(
            (spectral_power - time_power).abs() / time_power < 0.01,
            "spectral {spectral_power} vs time {time_power}"
        );
    }

    #[test]
    fn coherence_time_analytic() {
        let tc = coherence_time_from_spread(226.0);
        assert!((tc - 4.42e-3).abs() < 1e-5, "{tc}");
        assert!(coherence_time_from_spread(0.0).is_infinite());
    }

    #[test]
    fn coherence_time_empirical_within_factor_two() {
        let (g, _) = setup(10.0, 90.0, 500.0);
        let m = MotionState::from_kmh(500.0, 28e9).unwrap();
        let fs = 30_000.0;
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 256, 0.5, fs, 17).unwrap();
        let sup = doppler_support(&g, &m);
        let analytic = coherence_time_from_spread(sup.spread);
        let empirical = coherence_time_empirical(&r).unwrap();
        let ratio = empirical / analytic;
        assert!(
            (0.5..=2.0).contains(&ratio),
            "empirical {empirical} vs analytic {analytic} (ratio {ratio})"
        );
    }

    #[test]
    fn record_too_short_for_psd() {
        let (g, m) = setup(10.0, 90.0, 100.0);
        let r = generate_fading(&g, &m, &GainPattern::flat_unit(), 32, 0.1, 1500.0, 2).unwrap();
        assert!(estimate_psd(&r, 4096, 0.5).is_err());
    }

    #[test]
    fn same_seed_same_realization() {
        let (g, m) = setup(10.0, 90.0, 100.0);
        let a = generate_fading(&g, &m, &GainPattern::flat_unit(), 64, 1.0, 1500.0, 5).unwrap();
        let b = generate_fading(&g, &m, &GainPattern::flat_unit(), 64, 1.0, 1500.0, 5).unwrap();
        assert_eq!(a, b);
    }
}
