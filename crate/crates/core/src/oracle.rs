//! Monte Carlo ground truth for the closed-form spectra.
//!
//! Arrival angles are drawn uniformly over the receive window, optionally
//! acceptance-weighted by the antenna gain, and mapped through
//! `f = f_dmax * cos(theta - theta_v)`. The empirical density then validates
//! every closed form independently of the analytic derivations.
//!
//! Sampling is split into fixed-size chunks; chunk `c` seeds its own
//! `ChaCha8` stream from `(seed, c)`, so parallel and serial runs produce the
//! same values in the same order, bit for bit.

use crate::error::ModelError;
use crate::gain::GainPattern;
use crate::geometry::{BeamGeometry, DopplerSupport, MotionState};
use crate::integrate::integrate_psd;
use crate::spectrum::ArrivalWindow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CHUNK: usize = 1 << 16;

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&chunk.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Doppler-shift samples with the seed that reproduces them.
#[derive(Debug, Clone, PartialEq)]
pub struct DopplerSamples {
    pub values: Vec<f64>,
    pub seed: u64,
}

impl DopplerSamples {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Draw `n` Doppler shifts for the given link.
///
/// With a parametric gain, draws are rejection-sampled with acceptance
/// probability `G(theta)/G_peak`, keeping the histogram an unweighted count.
/// Identical `(inputs, seed)` reproduce the sample list exactly.
pub fn sample_doppler(
    geom: &BeamGeometry,
    motion: &MotionState,
    gain: &GainPattern,
    n: usize,
    seed: u64,
) -> Result<DopplerSamples, ModelError> {
    if n == 0 {
        return Err(ModelError::domain("sample count must be >= 1".to_string()));
    }
    gain.validate()?;
    let window = ArrivalWindow::receive(geom);
    let half = window.width() / 2.0;
    let theta_v = geom.theta_v();
    let f_dmax = motion.f_dmax();
    let peak = gain.peak();
    let reject = matches!(gain, GainPattern::Parametric { .. });

    let n_chunks = n.div_ceil(CHUNK);
    let chunks: Vec<Vec<f64>> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let quota = CHUNK.min(n - c * CHUNK);
            let mut rng = chunk_rng(seed, c as u64);
            let mut out = Vec::with_capacity(quota);
            while out.len() < quota {
                let theta = (rng.random::<f64>() - 0.5) * window.width();
                if reject {
                    let accept: f64 = rng.random();
                    if accept >= gain.evaluate(theta, &window) / peak {
                        continue;
                    }
                }
                debug_assert!(theta.abs() <= half);
                out.push(f_dmax * (theta - theta_v).cos());
            }
            out
        })
        .collect();

    Ok(DopplerSamples {
        values: chunks.concat(),
        seed,
    })
}

/// Equal-width histogram normalized to unit total mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// Bin edges, length `bins + 1`, strictly increasing (except for the
    /// degenerate delta case where both edges coincide).
    pub edges: Vec<f64>,
    /// Per-bin densities in 1/Hz.
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.densities.len()
    }

    pub fn bin_width(&self) -> f64 {
        if self.edges.len() < 2 {
            return 0.0;
        }
        self.edges[1] - self.edges[0]
    }

    /// Sum of `density * width` over all bins.
    pub fn total_mass(&self) -> f64 {
        let w = self.bin_width();
        self.densities.iter().map(|d| d * w).sum()
    }

    /// True for the zero-support delta histogram.
    pub fn is_degenerate(&self) -> bool {
        self.edges.len() == 2 && self.edges[0] == self.edges[1]
    }
}

/// Bin samples over exactly the analytic support interval (not the sample
/// range), density-normalized. A zero-width support collapses to a
/// single-bin delta histogram.
pub fn empirical_pdf(
    samples: &DopplerSamples,
    bins: usize,
    support: &DopplerSupport,
) -> Result<Histogram, ModelError> {
    if bins < 2 {
        return Err(ModelError::domain(format!(
            "histogram needs at least 2 bins, got {bins}"
        )));
    }
    if samples.values.is_empty() {
        return Err(ModelError::domain("no samples to bin".to_string()));
    }
    let span = support.f_hi - support.f_lo;
    if span <= 0.0 {
        return Ok(Histogram {
            edges: vec![support.f_lo, support.f_hi],
            densities: vec![f64::INFINITY],
        });
    }
    let width = span / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in &samples.values {
        let idx = (((v - support.f_lo) / width) as isize).clamp(0, bins as isize - 1) as usize;
        counts[idx] += 1;
    }
    let norm = 1.0 / (samples.count() as f64 * width);
    let edges = (0..=bins)
        .map(|i| support.f_lo + span * i as f64 / bins as f64)
        .collect();
    Ok(Histogram {
        edges,
        densities: counts.into_iter().map(|c| c as f64 * norm).collect(),
    })
}

/// L1 distance between a histogram and an analytic density: the sum of
/// `|density_i - mean_i| * width_i` with per-bin analytic means obtained by
/// quadrature.
pub fn l1_distance(
    hist: &Histogram,
    analytic: impl Fn(f64) -> f64,
    f_dmax: f64,
) -> Result<f64, ModelError> {
    if hist.is_degenerate() {
        return Err(ModelError::domain(
            "L1 distance undefined for a degenerate delta histogram".to_string(),
        ));
    }
    let mut total = 0.0;
    for (i, &d) in hist.densities.iter().enumerate() {
        let lo = hist.edges[i];
        let hi = hist.edges[i + 1];
        let mean = integrate_psd(&analytic, lo, hi, f_dmax)? / (hi - lo);
        total += (d - mean).abs() * (hi - lo);
    }
    Ok(total)
}
