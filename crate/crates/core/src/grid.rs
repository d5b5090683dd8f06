//! Truncated uniform grid for the half-line radial problem.

use crate::error::{Error, Result};
use crate::exact::{AngularChannel, PotentialParams};

/// Default tail threshold `T`: exact states are below `e^-T` of their peak outside the grid.
pub const DEFAULT_TAIL_THRESHOLD: f64 = 45.0;

/// Smallest accepted number of interior points.
pub const MIN_INTERIOR_POINTS: usize = 16;

/// Uniform grid on `[r_min, r_max]` with `n` interior points `r_min + i·h`, `i = 1..=n`,
/// and Dirichlet zeros at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub h: f64,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, n: usize) -> Result<Self> {
        if n < MIN_INTERIOR_POINTS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {MIN_INTERIOR_POINTS} interior points, got {n}"
            )));
        }
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "grid bounds must satisfy 0 < r_min < r_max < inf, got [{r_min}, {r_max}]"
            )));
        }
        let h = (r_max - r_min) / (n as f64 + 1.0);
        Ok(Self { r_min, r_max, n, h })
    }

    /// Interior point `j` (0-based), i.e. `r_min + (j + 1)·h`.
    pub fn point(&self, j: usize) -> f64 {
        self.r_min + (j as f64 + 1.0) * self.h
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.point(j))
    }
}

/// Grid with the default tail threshold.
pub fn build_grid(p: &PotentialParams, m: AngularChannel, n: usize) -> Result<RadialGrid> {
    build_grid_with_threshold(p, m, n, DEFAULT_TAIL_THRESHOLD)
}

/// `r_min = √(√c / 2T)` and `r_max = √(2T / √a)`: where `√c r⁻²/2` and `√a r²/2`
/// each reach `T`.
pub fn build_grid_with_threshold(
    p: &PotentialParams,
    _m: AngularChannel,
    n: usize,
    tail: f64,
) -> Result<RadialGrid> {
    if !(tail.is_finite() && tail > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tail threshold must be > 0, got {tail}"
        )));
    }
    let r_min = (p.c().sqrt() / (2.0 * tail)).sqrt();
    let r_max = (2.0 * tail / p.a().sqrt()).sqrt();
    RadialGrid::new(r_min, r_max, n)
}
