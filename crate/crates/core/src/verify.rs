//! Numerical cross-check of the joint closed-form solution.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{
    excited_energy, excited_solve, ground_energy, AngularChannel, ClosedFormState, PotentialParams,
};
use crate::grid::{build_grid_with_threshold, RadialGrid, DEFAULT_TAIL_THRESHOLD};
use crate::hamiltonian::assemble;
use crate::quadrature::{normalization_constant, overlap};
use crate::spectrum::{lowest_eigenvalues, node_count, SpectrumResult};

/// Acceptable window for the empirical order of the three-point stencil.
pub const ORDER_WINDOW: (f64, f64) = (1.8, 2.2);
/// Largest acceptable normalized overlap between the two closed-form states.
pub const OVERLAP_TOLERANCE: f64 = 1e-8;
/// Pass if `|Ê − E| ≤ ERROR_MODEL_FACTOR · C·h²`, with `C` fit from the resolution sweep.
pub const ERROR_MODEL_FACTOR: f64 = 10.0;

/// One resolution of a convergence sweep.
#[derive(Debug, Clone)]
pub struct ConvergencePoint {
    pub grid: RadialGrid,
    pub spectrum: SpectrumResult,
}

impl ConvergencePoint {
    pub fn h(&self) -> f64 {
        self.grid.h
    }
}

/// Two lowest discrete eigenvalues at several resolutions, against the closed-form energies.
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    /// Sorted by ascending `n`.
    pub points: Vec<ConvergencePoint>,
    pub exact: [f64; 2],
}

impl ConvergenceTable {
    pub fn errors(&self, level: usize) -> Vec<f64> {
        self.points
            .iter()
            .map(|pt| pt.spectrum.eigenvalues[level] - self.exact[level])
            .collect()
    }

    /// Least-squares slope of `ln|Ê − E|` against `ln h`.
    pub fn order(&self, level: usize) -> f64 {
        let xs: Vec<f64> = self.points.iter().map(|pt| pt.h().ln()).collect();
        let ys: Vec<f64> = self.errors(level).iter().map(|e| e.abs().ln()).collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        sxy / sxx
    }

    /// `C` in `|Ê − E| ≈ C h²`, least squares through the origin.
    pub fn h2_coefficient(&self, level: usize) -> f64 {
        let (num, den) =
            self.points
                .iter()
                .zip(self.errors(level))
                .fold((0.0, 0.0), |(num, den), (pt, e)| {
                    let h2 = pt.h() * pt.h();
                    (num + e.abs() * h2, den + h2 * h2)
                });
        num / den
    }

    pub fn finest(&self) -> &ConvergencePoint {
        self.points
            .last()
            .expect("convergence table is never empty")
    }
}

/// Eliminate the `h²` term from two estimates at spacings `h1`, `h2`.
pub fn richardson_extrapolate(h1: f64, e1: f64, h2: f64, e2: f64) -> f64 {
    let (s1, s2) = (h1 * h1, h2 * h2);
    (s1 * e2 - s2 * e1) / (s1 - s2)
}

/// Two lowest eigenpairs at every `n` in `n_list`, resolutions solved in parallel.
pub fn convergence_table(
    p: &PotentialParams,
    m: AngularChannel,
    n_list: &[usize],
    tail: f64,
) -> Result<ConvergenceTable> {
    if n_list.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "convergence study needs at least 3 resolutions, got {}",
            n_list.len()
        )));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "resolutions must be strictly ascending, got {n_list:?}"
        )));
    }
    let points = n_list
        .par_iter()
        .map(|&n| {
            let grid = build_grid_with_threshold(p, m, n, tail)?;
            let spectrum = lowest_eigenvalues(&assemble(p, m, &grid), 2)?;
            Ok(ConvergencePoint { grid, spectrum })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        points,
        exact: [ground_energy(p), excited_energy(p)],
    })
}

/// Empirical order of `|Ê₀(n) − E₀| ∝ h^q` over `n_list`.
pub fn convergence_study(p: &PotentialParams, m: AngularChannel, n_list: &[usize]) -> Result<f64> {
    Ok(convergence_table(p, m, n_list, DEFAULT_TAIL_THRESHOLD)?.order(0))
}

/// `‖H R − E R‖∞ / ‖R‖∞` for a closed-form state sampled on `grid`.
pub fn discrete_residual(
    state: &ClosedFormState,
    p: &PotentialParams,
    m: AngularChannel,
    grid: &RadialGrid,
) -> f64 {
    let h = assemble(p, m, grid);
    let samples: Vec<f64> = grid.points().map(|r| state.value(r)).collect();
    let hr = h.apply(&samples);
    let num = hr
        .iter()
        .zip(&samples)
        .fold(0.0f64, |acc, (y, x)| acc.max((y - state.energy * x).abs()));
    let den = samples.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub exact_energies: (f64, f64),
    pub numeric_energies: (f64, f64),
    pub abs_errors: (f64, f64),
    /// `10·C·h²` per level; the pass threshold for `abs_errors`.
    pub error_bounds: (f64, f64),
    pub node_counts: (usize, usize),
    pub overlap_01: f64,
    pub norm_constants: (f64, f64),
    pub convergence_order: f64,
    pub grid: RadialGrid,
    pub params: PotentialParams,
    pub m: u32,
    pub passed: bool,
}

/// Reproduce the joint solution for `(a, m)` numerically at resolution `n`.
pub fn verify(a: f64, m: AngularChannel, n: usize) -> Result<VerificationReport> {
    verify_with_threshold(a, m, n, DEFAULT_TAIL_THRESHOLD)
}

pub fn verify_with_threshold(
    a: f64,
    m: AngularChannel,
    n: usize,
    tail: f64,
) -> Result<VerificationReport> {
    let sol = excited_solve(a, m)?;
    let p = sol.params;
    let table = convergence_table(&p, m, &[n / 4, n / 2, n], tail)?;
    let finest = table.finest();
    let grid = finest.grid;
    let spec = &finest.spectrum;

    let exact = (table.exact[0], table.exact[1]);
    let numeric = (spec.eigenvalues[0], spec.eigenvalues[1]);
    let abs_errors = ((numeric.0 - exact.0).abs(), (numeric.1 - exact.1).abs());
    let h2 = grid.h * grid.h;
    let error_bounds = (
        ERROR_MODEL_FACTOR * table.h2_coefficient(0) * h2,
        ERROR_MODEL_FACTOR * table.h2_coefficient(1) * h2,
    );
    let node_counts = (
        node_count(&spec.eigenvectors[0]),
        node_count(&spec.eigenvectors[1]),
    );
    let overlap_01 = overlap(&sol.ground, &sol.excited, &grid)?;
    let norm_constants = (
        normalization_constant(&sol.ground, &grid)?,
        normalization_constant(&sol.excited, &grid)?,
    );
    let convergence_order = table.order(0);

    let finite = [
        numeric.0,
        numeric.1,
        overlap_01,
        norm_constants.0,
        norm_constants.1,
        convergence_order,
    ]
    .iter()
    .all(|x| x.is_finite());
    let passed = finite
        && abs_errors.0 <= error_bounds.0
        && abs_errors.1 <= error_bounds.1
        && node_counts == (0, 1)
        && overlap_01.abs() <= OVERLAP_TOLERANCE
        && (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&convergence_order);

    Ok(VerificationReport {
        exact_energies: exact,
        numeric_energies: numeric,
        abs_errors,
        error_bounds,
        node_counts,
        overlap_01,
        norm_constants,
        convergence_order,
        grid,
        params: p,
        m: m.0,
        passed,
    })
}
