//! Lowest eigenpairs of a symmetric tridiagonal matrix.
//!
//! Eigenvalues come from Sturm-sequence bisection, which cannot skip an
//! eigenvalue; eigenvectors from shifted inverse iteration with a pivoted
//! tridiagonal LU.

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::hamiltonian::DiscreteHamiltonian;

const MAX_INVERSE_ITERATIONS: usize = 100;
const MAX_BISECTIONS: usize = 256;

/// Entries below this fraction of `‖v‖∞` are treated as zero when counting nodes.
pub const NODE_NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit Euclidean norm, first significant component positive.
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid: Option<RadialGrid>,
}

impl SpectrumResult {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

impl DiscreteHamiltonian {
    /// Matrix from raw diagonals, no grid attached.
    pub fn from_tridiagonal(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal entries",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(Self {
            diag,
            offdiag,
            grid: None,
        })
    }

    fn pivmin(&self) -> f64 {
        let emax = self.offdiag.iter().fold(1.0f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * emax
    }
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(h: &DiscreteHamiltonian, x: f64) -> usize {
    let pivmin = h.pivmin();
    let mut count = 0;
    let mut q = h.diag[0] - x;
    for i in 0..h.dim() {
        if i > 0 {
            let e = h.offdiag[i - 1];
            q = (h.diag[i] - x) - e * e / q;
        }
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalue with 0-based index `j`, bisected to working precision.
fn bisect(h: &DiscreteHamiltonian, j: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        if sturm_count(h, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// LU factors of `H − σI` with partial pivoting; `U` has two superdiagonals.
struct ShiftedLu {
    l: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
    tiny: f64,
}

impl ShiftedLu {
    fn new(h: &DiscreteHamiltonian, shift: f64) -> Self {
        let n = h.dim();
        let mut d: Vec<f64> = h.diag.iter().map(|x| x - shift).collect();
        let mut l = h.offdiag.clone();
        let mut du = h.offdiag.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let scale = h
            .diag_norm_inf()
            .max(h.offdiag.iter().fold(0.0, |m, e| m.max(e.abs())));
        let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= l[i].abs() {
                if d[i] != 0.0 {
                    let fact = l[i] / d[i];
                    l[i] = fact;
                    d[i + 1] -= fact * du[i];
                } else {
                    l[i] = 0.0;
                }
            } else {
                let fact = d[i] / l[i];
                d[i] = l[i];
                l[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        Self {
            l,
            d,
            du,
            du2,
            swapped,
            tiny,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        let pivot = |x: f64| {
            if x.abs() < self.tiny {
                self.tiny.copysign(x)
            } else {
                x
            }
        };
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / pivot(self.d[i]);
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn fix_sign(v: &mut [f64]) {
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > NODE_NOISE_FLOOR * vmax) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn eigenvector(
    h: &DiscreteHamiltonian,
    lambda: f64,
    previous: &[Vec<f64>],
    tol: f64,
) -> Result<Vec<f64>> {
    let n = h.dim();
    let lu = ShiftedLu::new(h, lambda);
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).sin())
        .collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut residual = f64::INFINITY;
    for _ in 0..MAX_INVERSE_ITERATIONS {
        lu.solve(&mut v);
        for u in previous {
            let proj = dot(u, &v);
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
        }
        let nv = norm2(&v);
        if !(nv.is_finite() && nv > 0.0) {
            return Err(Error::Convergence(format!(
                "inverse iteration broke down near eigenvalue {lambda}"
            )));
        }
        v.iter_mut().for_each(|x| *x /= nv);

        let hv = h.apply(&v);
        residual = hv
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            fix_sign(&mut v);
            return Ok(v);
        }
    }
    Err(Error::Convergence(format!(
        "inverse iteration for eigenvalue {lambda} did not converge in \
         {MAX_INVERSE_ITERATIONS} iterations (residual {residual:e}, tolerance {tol:e})"
    )))
}

/// The `k` smallest eigenpairs of `h`.
pub fn lowest_eigenvalues(h: &DiscreteHamiltonian, k: usize) -> Result<SpectrumResult> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(Error::InvalidInput(format!(
            "need 1 <= k <= {n}, got k = {k}"
        )));
    }
    let (glo, ghi) = h.gershgorin();
    let pad = f64::EPSILON * glo.abs().max(ghi.abs()) * n as f64 + h.pivmin();
    let (glo, ghi) = (glo - pad, ghi + pad);
    let tol = 1e-8 * h.diag_norm_inf();

    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        // everything below the previous eigenvalue is already accounted for
        let lo = eigenvalues.last().copied().unwrap_or(glo).max(glo);
        let lambda = bisect(h, j, lo, ghi);
        let v = eigenvector(h, lambda, &eigenvectors, tol)?;
        eigenvalues.push(lambda);
        eigenvectors.push(v);
    }
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        grid: h.grid,
    })
}

/// Strict sign changes between consecutive significant entries.
pub fn node_count(v: &[f64]) -> usize {
    significant_sign_changes(v).count()
}

/// Interpolated radii of the sign changes of `v` sampled on `grid`.
pub fn node_positions(v: &[f64], grid: &RadialGrid) -> Vec<f64> {
    significant_sign_changes(v)
        .map(|(i, j)| {
            let (ri, rj) = (grid.point(i), grid.point(j));
            ri + (rj - ri) * v[i] / (v[i] - v[j])
        })
        .collect()
}

fn significant_sign_changes(v: &[f64]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let floor = NODE_NOISE_FLOOR * vmax;
    let mut last: Option<usize> = None;
    v.iter().enumerate().filter_map(move |(i, x)| {
        if x.abs() <= floor {
            return None;
        }
        let change = match last {
            Some(p) if (v[p] < 0.0) != (*x < 0.0) => Some((p, i)),
            _ => None,
        };
        last = Some(i);
        change
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn three_by_three() {
        let h = DiscreteHamiltonian::from_tridiagonal(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        let s = lowest_eigenvalues(&h, 3).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in s.eigenvalues.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-14);
        }
        for (i, v) in s.eigenvectors.iter().enumerate() {
            assert_abs_diff_eq!(norm2(v), 1.0, epsilon = 1e-14);
            assert!(v[0] > 0.0);
            assert_eq!(node_count(v), i);
        }
    }

    #[test]
    fn sturm_counts_on_small_matrix() {
        let h = DiscreteHamiltonian::from_tridiagonal(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        assert_eq!(sturm_count(&h, 0.0), 0);
        assert_eq!(sturm_count(&h, 1.0), 1);
        assert_eq!(sturm_count(&h, 2.5), 2);
        assert_eq!(sturm_count(&h, 10.0), 3);
    }

    #[test]
    fn rejects_bad_k_and_shape() {
        let h = DiscreteHamiltonian::from_tridiagonal(vec![2.0; 3], vec![-1.0; 2]).unwrap();
        assert!(lowest_eigenvalues(&h, 0).is_err());
        assert!(lowest_eigenvalues(&h, 4).is_err());
        assert!(DiscreteHamiltonian::from_tridiagonal(vec![1.0; 3], vec![1.0; 3]).is_err());
    }

    #[test]
    fn node_count_basics() {
        assert_eq!(node_count(&[1.0, 1.0, 1.0]), 0);
        assert_eq!(node_count(&[1.0, -1.0, 1.0]), 2);
        assert_eq!(node_count(&[1.0, 0.0, -1.0]), 1);
        // sub-floor noise does not count
        assert_eq!(node_count(&[1e-20, -1e-20, 1.0, 2.0, -1e-19]), 0);
    }

    #[test]
    fn node_position_is_interpolated() {
        let g = RadialGrid::new(0.0 + 1.0, 18.0, 16).unwrap();
        let mut v = vec![1.0; 16];
        for x in v.iter_mut().skip(8) {
            *x = -1.0;
        }
        let pos = node_positions(&v, &g);
        assert_eq!(pos.len(), 1);
        assert_abs_diff_eq!(pos[0], 0.5 * (g.point(7) + g.point(8)), epsilon = 1e-14);
    }
}
