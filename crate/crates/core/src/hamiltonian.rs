//! Central-difference discretization of `−d²/dr² + V(r) + (m² − 1/4)/r²`.

use crate::exact::{AngularChannel, PotentialParams};
use crate::grid::RadialGrid;

/// Symmetric tridiagonal matrix with constant negative off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// Grid the operator was sampled on, if any.
    pub grid: Option<RadialGrid>,
}

impl DiscreteHamiltonian {
    /// Three-point Laplacian plus an arbitrary potential sampled on the interior points.
    pub fn with_potential<F: Fn(f64) -> f64>(grid: &RadialGrid, potential: F) -> Self {
        let inv_h2 = 1.0 / (grid.h * grid.h);
        let diag = grid.points().map(|r| 2.0 * inv_h2 + potential(r)).collect();
        let offdiag = vec![-inv_h2; grid.n - 1];
        Self {
            diag,
            offdiag,
            grid: Some(*grid),
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag_norm_inf(&self) -> f64 {
        self.diag.iter().fold(0.0, |m, d| m.max(d.abs()))
    }

    /// `y = H x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n, "vector length does not match matrix dimension");
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }
}

/// Radial operator for `p` in channel `m` on `grid`, Dirichlet at both ends.
pub fn assemble(p: &PotentialParams, m: AngularChannel, grid: &RadialGrid) -> DiscreteHamiltonian {
    DiscreteHamiltonian::with_potential(grid, |r| p.effective(m, r))
}
