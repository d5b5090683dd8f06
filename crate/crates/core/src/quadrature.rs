//! Composite Simpson integration over a truncated radial grid.

use crate::error::{Error, Result};
use crate::exact::ClosedFormState;
use crate::grid::RadialGrid;

const INITIAL_PANELS: usize = 64;
const MIN_DOUBLINGS: usize = 2;
const MAX_DOUBLINGS: usize = 20;
const REL_TOL: f64 = 1e-10;

/// `∫ f dr` over `[grid.r_min, grid.r_max]`.
///
/// The panel count doubles until two successive estimates agree to `1e-10`
/// relative to `∫|f| dr`, so integrals that cancel to zero (overlaps) still
/// terminate. Returns the finer estimate.
pub fn quadrature<F: Fn(f64) -> f64>(f: F, grid: &RadialGrid) -> Result<f64> {
    let (a, b) = (grid.r_min, grid.r_max);
    let mut panels = INITIAL_PANELS;
    let mut h = (b - a) / panels as f64;

    let fa = f(a);
    let fb = f(b);
    let ends = fa + fb;
    let ends_abs = fa.abs() + fb.abs();
    // interior sums split by parity of the node index
    let (mut even, mut even_abs) = (0.0, 0.0);
    let (mut odd, mut odd_abs) = (0.0, 0.0);
    for i in 1..panels {
        let v = f(a + i as f64 * h);
        if i % 2 == 0 {
            even += v;
            even_abs += v.abs();
        } else {
            odd += v;
            odd_abs += v.abs();
        }
    }
    let simpson = |h: f64, e: f64, o: f64, ends: f64| h / 3.0 * (ends + 2.0 * e + 4.0 * o);
    let mut estimate = simpson(h, even, odd, ends);

    for doubling in 1..=MAX_DOUBLINGS {
        even += odd;
        even_abs += odd_abs;
        panels *= 2;
        h = (b - a) / panels as f64;
        odd = 0.0;
        odd_abs = 0.0;
        for i in (1..panels).step_by(2) {
            let v = f(a + i as f64 * h);
            odd += v;
            odd_abs += v.abs();
        }
        let refined = simpson(h, even, odd, ends);
        let scale = simpson(h, even_abs, odd_abs, ends_abs);
        if !refined.is_finite() {
            return Err(Error::Convergence(
                "integrand produced a non-finite value".into(),
            ));
        }
        if doubling >= MIN_DOUBLINGS && (refined - estimate).abs() <= REL_TOL * scale {
            return Ok(refined);
        }
        estimate = refined;
    }
    Err(Error::Convergence(format!(
        "Simpson quadrature did not reach {REL_TOL:e} relative agreement after {MAX_DOUBLINGS} doublings"
    )))
}

/// `∫|R|² dr` for an unnormalized closed-form state.
pub fn squared_norm(state: &ClosedFormState, grid: &RadialGrid) -> Result<f64> {
    quadrature(|r| state.value(r).powi(2), grid)
}

/// `N = (∫|R|² dr)^(-1/2)`.
pub fn normalization_constant(state: &ClosedFormState, grid: &RadialGrid) -> Result<f64> {
    let norm = squared_norm(state, grid)?;
    if norm.is_nan() || norm <= 0.0 {
        return Err(Error::InvalidInput(
            "state has zero norm on this grid".into(),
        ));
    }
    Ok(norm.powf(-0.5))
}

/// Normalized overlap `∫R₁R₂ / (‖R₁‖‖R₂‖)`, a cosine in `[-1, 1]`.
pub fn overlap(s1: &ClosedFormState, s2: &ClosedFormState, grid: &RadialGrid) -> Result<f64> {
    let cross = quadrature(|r| s1.value(r) * s2.value(r), grid)?;
    let n1 = squared_norm(s1, grid)?;
    let n2 = squared_norm(s2, grid)?;
    Ok(cross / (n1 * n2).sqrt())
}
