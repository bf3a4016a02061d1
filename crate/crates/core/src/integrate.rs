//! Quadrature and moments for Doppler densities.
//!
//! Beamformed Doppler densities carry integrable inverse-square-root
//! singularities at `+-f_dmax`. Integration therefore runs in the
//! substituted variable `f_d = f_dmax * cos(u)`: the Jacobian
//! `f_dmax * sin(u)` cancels the singularity, leaving a bounded integrand
//! that plain adaptive Simpson handles. Interior rect-window edges are
//! resolved by the adaptive bisection itself.

use crate::error::ModelError;
use std::f64::consts::PI;

/// Absolute quadrature tolerance used throughout.
pub const QUAD_ABS_TOL: f64 = 1e-9;

const MAX_DEPTH: u32 = 60;
const INITIAL_PANELS: usize = 8;
// integrands this machinery targets finish in a few hundred evaluations;
// exhausting the budget means the integrand cannot be resolved at all
const EVAL_BUDGET: u64 = 2_000_000;

struct Quad<'a> {
    g: &'a dyn Fn(f64) -> f64,
    evals: u64,
    /// unresolved error carried by intervals that hit the depth or
    /// evaluation budget
    residual: f64,
}

impl Quad<'_> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evals += 1;
        (self.g)(x)
    }

    fn simpson(&self, a: f64, fa: f64, fm: f64, b: f64, fb: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &mut self,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = self.simpson(a, fa, flm, m, fm);
        let right = self.simpson(m, fm, frm, b, fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        if depth >= MAX_DEPTH || self.evals > EVAL_BUDGET {
            self.residual += delta.abs() / 15.0;
            return left + right;
        }
        self.recurse(a, fa, m, fm, flm, left, 0.5 * tol, depth + 1)
            + self.recurse(m, fm, b, fb, frm, right, 0.5 * tol, depth + 1)
    }

    fn integrate(&mut self, a: f64, b: f64, tol: f64) -> f64 {
        let mut total = 0.0;
        let panel_tol = tol / INITIAL_PANELS as f64;
        for i in 0..INITIAL_PANELS {
            let pa = a + (b - a) * (i as f64) / INITIAL_PANELS as f64;
            let pb = a + (b - a) * ((i + 1) as f64) / INITIAL_PANELS as f64;
            let pm = 0.5 * (pa + pb);
            let fa = self.eval(pa);
            let fb = self.eval(pb);
            let fm = self.eval(pm);
            let whole = self.simpson(pa, fa, fm, pb, fb);
            total += self.recurse(pa, fa, pb, fb, fm, whole, panel_tol, 0);
        }
        total
    }
}

fn adaptive(g: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, ModelError> {
    if b <= a {
        return Ok(0.0);
    }
    let mut quad = Quad {
        g: &g,
        evals: 0,
        residual: 0.0,
    };
    let value = quad.integrate(a, b, tol);
    if quad.residual > tol {
        return Err(ModelError::Numerical {
            message: "adaptive quadrature did not converge within its budget".to_string(),
            residual: quad.residual,
        });
    }
    Ok(value)
}

/// Integrate a Doppler density over `[f_lo, f_hi]` clipped to
/// `[-f_dmax, +f_dmax]` (densities vanish beyond the maximum shift).
///
/// Evaluations that return non-finite values — the pointwise endpoint
/// sentinel — contribute zero; with the cosine substitution they sit at
/// isolated points where the substituted integrand has a finite limit.
pub fn integrate_psd(
    density: impl Fn(f64) -> f64,
    f_lo: f64,
    f_hi: f64,
    f_dmax: f64,
) -> Result<f64, ModelError> {
    if !f_dmax.is_finite() || f_dmax <= 0.0 {
        return Err(ModelError::domain(format!(
            "f_dmax must be finite and > 0 Hz, got {f_dmax}"
        )));
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo > f_hi {
        return Err(ModelError::domain(format!(
            "integration bounds must satisfy f_lo <= f_hi, got [{f_lo}, {f_hi}]"
        )));
    }
    let lo = f_lo.max(-f_dmax);
    let hi = f_hi.min(f_dmax);
    if hi <= lo {
        return Ok(0.0);
    }
    // f = f_dmax*cos(u): u runs from acos(hi/fd) to acos(lo/fd)
    let u_a = (hi / f_dmax).clamp(-1.0, 1.0).acos();
    let u_b = (lo / f_dmax).clamp(-1.0, 1.0).acos();
    let g = |u: f64| {
        let s = density(f_dmax * u.cos());
        if !s.is_finite() {
            return 0.0;
        }
        s * f_dmax * u.sin()
    };
    // Within ~1e-3 rad of u = 0 or pi the cosine round-trip leaves too few
    // bits in 1 - (f/f_dmax)^2 for an inverse-square-root density to be
    // evaluated accurately; the resulting noise floor makes error-driven
    // subdivision useless there. Those slivers get a fixed open rule instead
    // (the substituted integrand is bounded and nearly flat), and the
    // adaptive pass runs on the clean interior.
    const U_FLOOR: f64 = 1.5e-3;
    let mut total = 0.0;
    let mut a = u_a;
    let mut b = u_b;
    if a < U_FLOOR && a < b {
        let cut = U_FLOOR.min(b);
        total += fixed_gauss2(&g, a, cut);
        a = cut;
    }
    if b > PI - U_FLOOR && b > a {
        let cut = (PI - U_FLOOR).max(a);
        total += fixed_gauss2(&g, cut, b);
        b = cut;
    }
    if b > a {
        total += adaptive(g, a, b, QUAD_ABS_TOL)?;
    }
    Ok(total)
}

/// Composite two-point Gauss-Legendre over 32 panels; open (never samples
/// the interval ends), degree-3 exact per panel.
fn fixed_gauss2(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const PANELS: usize = 32;
    let h = (b - a) / PANELS as f64;
    let offset = 0.5 * h / 3f64.sqrt();
    let mut total = 0.0;
    for i in 0..PANELS {
        let mid = a + (i as f64 + 0.5) * h;
        total += 0.5 * h * (g(mid - offset) + g(mid + offset));
    }
    total
}

/// Mean shift and RMS spread (first moment and central second moment) of a
/// density over `[f_lo, f_hi]`.
///
/// Moments are computed in normalized frequency `x = f_d/f_dmax` so the
/// absolute quadrature tolerance applies to order-one integrals, then scaled
/// back to Hz.
pub fn spectrum_moments(
    density: impl Fn(f64) -> f64,
    f_lo: f64,
    f_hi: f64,
    f_dmax: f64,
) -> Result<(f64, f64), ModelError> {
    if !f_dmax.is_finite() || f_dmax <= 0.0 {
        return Err(ModelError::domain(format!(
            "f_dmax must be finite and > 0 Hz, got {f_dmax}"
        )));
    }
    // normalized density t(x) = f_dmax * S(f_dmax * x) on x in [-1, 1]
    let t = |x: f64| f_dmax * density(f_dmax * x);
    let x_lo = (f_lo / f_dmax).max(-1.0);
    let x_hi = (f_hi / f_dmax).min(1.0);
    let mass = integrate_psd(t, x_lo, x_hi, 1.0)?;
    if mass <= QUAD_ABS_TOL {
        return Err(ModelError::domain(format!(
            "spectrum has no positive total mass over [{f_lo}, {f_hi}] (got {mass:.3e})"
        )));
    }
    let m1 = integrate_psd(|x| x * t(x), x_lo, x_hi, 1.0)?;
    let mean = m1 / mass;
    let m2c = integrate_psd(|x| (x - mean) * (x - mean) * t(x), x_lo, x_hi, 1.0)?;
    let rms = (m2c / mass).max(0.0).sqrt();
    Ok((f_dmax * mean, f_dmax * rms))
}
