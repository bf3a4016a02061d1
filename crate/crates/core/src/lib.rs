//! Doppler power spectrum of millimeter-wave links under transmit/receive
//! beamforming.
//!
//! With an omnidirectional receive antenna and rich scattering, the Doppler
//! spectrum is the classical U-shaped Jakes curve spanning `[-f_dmax, +f_dmax]`.
//! Beamforming captures only arrival angles inside the receive beam, which
//! confines the spectrum to a narrow sub-interval whose location and width
//! depend on the velocity angle and the half-power beam width. This crate
//! provides:
//!
//! - [`geometry`]: angular regions, Doppler support boundaries, central shift
//!   and spread of the beamformed spectrum.
//! - [`spectrum`]: closed-form densities — Jakes, single-window beamformed
//!   (single-branch and branch-summed exact variants), and multi-cluster.
//! - [`integrate`]: singularity-aware adaptive quadrature and spectral moments.
//! - [`approx`]: small-beamwidth approximations of shift and spread with
//!   quantified error against the exact forms.
//! - [`oracle`]: seeded Monte Carlo sampling of Doppler shifts, empirical
//!   densities, and L1 goodness-of-fit against any closed form.
//! - [`fading`]: sum-of-sinusoids channel realizations matching the beamformed
//!   spectrum, Welch PSD estimation, and coherence time.
//! - [`train`]: speed-dependent receive-beamwidth control and a trackside
//!   deployment simulator producing per-timestep Doppler traces.
//!
//! All angles are radians and all frequencies Hz unless a name says otherwise;
//! degree/km/h conversions belong at presentation boundaries.

pub mod approx;
pub mod error;
pub mod fading;
pub mod gain;
pub mod geometry;
pub mod integrate;
pub mod oracle;
pub mod spectrum;
pub mod train;

pub use error::ModelError;
pub use gain::GainPattern;
pub use geometry::{
    classify_region, doppler_support, doppler_support_for, max_doppler, AngularRegion,
    BeamGeometry, DopplerSupport, MotionState, SPEED_OF_LIGHT,
};
pub use spectrum::{
    doppler_pdf, doppler_psd, jakes_psd, multicluster_psd, ArrivalWindow, Cluster, ClusterSet,
    EvalMode, SpectrumSamples,
};
