//! Property tests for the geometric and spectral invariants.

use doppler_beam::approx::approx_shift_spread;
use doppler_beam::geometry::{classify_region, doppler_support_for, max_doppler, AngularRegion};
use doppler_beam::spectrum::{doppler_pdf, EvalMode};
use doppler_beam::{BeamGeometry, MotionState};
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn support_is_symmetric_in_theta_v(
        tv in -PI..PI,
        rx in 1e-4..(2.0 * PI),
        fd in 1.0..1e6,
    ) {
        let a = doppler_support_for(tv, rx, fd).unwrap();
        let b = doppler_support_for(-tv, rx, fd).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn support_stays_within_max_doppler(
        tv in -PI..PI,
        rx in 1e-4..(2.0 * PI),
        fd in 1.0..1e6,
    ) {
        let s = doppler_support_for(tv, rx, fd).unwrap();
        prop_assert!(s.f_lo <= s.f_hi);
        prop_assert!(s.f_lo >= -fd && s.f_hi <= fd);
        prop_assert!(s.spread >= 0.0 && s.spread <= 2.0 * fd);
        if rx < PI {
            prop_assert!(s.spread < 2.0 * fd);
        }
        prop_assert!((s.shift - 0.5 * (s.f_lo + s.f_hi)).abs() <= 1e-12 * fd);
        prop_assert!((s.spread - (s.f_hi - s.f_lo)).abs() <= 1e-12 * fd);
    }

    #[test]
    fn adjacent_region_formulas_agree_at_boundaries(
        rx in 1e-3..(PI - 1e-3),
        fd in 1.0..1e6,
    ) {
        // Region I/II boundary at theta_v = rx/2
        let half: f64 = rx / 2.0;
        let lo_i: f64 = fd * (half + half).cos();
        let hi_i: f64 = fd;
        let lo_ii: f64 = fd * (half + half).cos();
        let hi_ii: f64 = fd * (half - half).cos();
        prop_assert!((lo_i - lo_ii).abs() <= 1e-12 * fd);
        prop_assert!((hi_i - hi_ii).abs() <= 1e-12 * fd);
        // Region II/III boundary at theta_v = pi - rx/2
        let tv = PI - half;
        let lo_ii: f64 = fd * (half + tv).cos();
        let hi_ii: f64 = fd * (half - tv).cos();
        let lo_iii: f64 = -fd;
        let hi_iii: f64 = fd * (half - tv).cos();
        prop_assert!((lo_ii - lo_iii).abs() <= 1e-12 * fd);
        prop_assert!((hi_ii - hi_iii).abs() <= 1e-12 * fd);
    }

    #[test]
    fn support_is_continuous_across_region_boundaries(
        rx in 1e-3..(PI - 1e-3),
        fd in 1.0..1e6,
    ) {
        // evaluate the implementation just inside each adjacent region
        let eps = 1e-9;
        for boundary in [rx / 2.0, PI - rx / 2.0] {
            let below = doppler_support_for(boundary - eps, rx, fd).unwrap();
            let above = doppler_support_for(boundary + eps, rx, fd).unwrap();
            prop_assert!(
                (below.f_lo - above.f_lo).abs() <= 1e-6 * fd,
                "f_lo jump at {}", boundary
            );
            prop_assert!(
                (below.f_hi - above.f_hi).abs() <= 1e-6 * fd,
                "f_hi jump at {}", boundary
            );
        }
    }

    #[test]
    fn max_doppler_is_bilinear(v in 0.0f64..1e3, fc in 1e6f64..1e12, k in 0.1f64..10.0) {
        let base: f64 = max_doppler(v, fc).unwrap();
        let scaled_v: f64 = max_doppler(k * v, fc).unwrap();
        let scaled_fc: f64 = max_doppler(v, k * fc).unwrap();
        prop_assert!((scaled_v - k * base).abs() <= 1e-9 * base.max(1e-12));
        prop_assert!((scaled_fc - k * base).abs() <= 1e-9 * base.max(1e-12));
    }

    #[test]
    fn exactly_one_region_per_configuration(
        tv in -PI..PI,
        rx in 1e-4..(2.0 * PI),
    ) {
        let av = tv.abs();
        let half = rx / 2.0;
        let region = classify_region(tv, rx).unwrap();
        let in_i = av <= half;
        let in_ii = av > half && av <= PI - half;
        match region {
            AngularRegion::RegionI => prop_assert!(in_i),
            AngularRegion::RegionII => prop_assert!(in_ii),
            AngularRegion::RegionIII => prop_assert!(!in_i && !in_ii),
        }
    }

    #[test]
    fn approx_matches_exact_within_small_beam_envelope(
        tv_deg in 0.0f64..180.0,
        rx_deg in 0.5f64..10.0,
    ) {
        let fd = 12_970.0;
        let tv = tv_deg.to_radians();
        let rx = rx_deg.to_radians();
        let a = approx_shift_spread(tv, rx, fd).unwrap();
        let e = doppler_support_for(tv, rx, fd).unwrap();
        let bound = fd * rx * rx / 2.0;
        prop_assert!((a.shift - e.shift).abs() <= bound, "shift gap {}", (a.shift - e.shift).abs());
        prop_assert!((a.spread - e.spread).abs() <= bound, "spread gap {}", (a.spread - e.spread).abs());
        prop_assert!(a.region == e.region);
    }

    #[test]
    fn pdf_vanishes_outside_support_and_not_inside(
        tv_deg in 0.0..180.0,
        rx_deg in 0.5..179.0,
        frac in 0.02..0.98,
    ) {
        let g = BeamGeometry::from_degrees(rx_deg, rx_deg, tv_deg).unwrap();
        let m = MotionState::from_kmh(300.0, 28e9).unwrap();
        let s = doppler_support_for(g.theta_v(), g.theta_rx(), m.f_dmax()).unwrap();
        let inside = s.f_lo + (s.f_hi - s.f_lo) * frac;
        prop_assert!(doppler_pdf(inside, &g, &m, EvalMode::Exact).unwrap() > 0.0);
        let outside_hi = s.f_hi + (m.f_dmax() - s.f_hi) * 0.5 + 1e-6 * m.f_dmax();
        if outside_hi < m.f_dmax() && outside_hi > s.f_hi + 1e-9 * m.f_dmax() {
            prop_assert_eq!(doppler_pdf(outside_hi, &g, &m, EvalMode::Exact).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_branch_never_exceeds_exact(
        tv_deg in 0.0..180.0,
        rx_deg in 0.5..179.0,
        frac in 0.01..0.99,
    ) {
        // the exact mode adds the mirrored branch where present, so it
        // dominates the single-branch form pointwise
        let g = BeamGeometry::from_degrees(rx_deg, rx_deg, tv_deg).unwrap();
        let m = MotionState::from_kmh(300.0, 28e9).unwrap();
        let s = doppler_support_for(g.theta_v(), g.theta_rx(), m.f_dmax()).unwrap();
        let f = s.f_lo + (s.f_hi - s.f_lo) * frac;
        let single = doppler_pdf(f, &g, &m, EvalMode::SingleBranch).unwrap();
        let exact = doppler_pdf(f, &g, &m, EvalMode::Exact).unwrap();
        prop_assert!(single <= exact * (1.0 + 1e-12) + 1e-300, "single-branch {} > exact {}", single, exact);
    }
}
