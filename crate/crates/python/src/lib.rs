//! Python bindings: closed-form states, the joint solution and the numerical verifier.

use anharm2d_core as core;
use core::{AngularChannel, SignBranch};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::Convergence(_) => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn branch(name: &str) -> PyResult<SignBranch> {
    name.parse().map_err(|_| {
        PyValueError::new_err(format!("branch must be 'plus' or 'minus', got {name:?}"))
    })
}

#[pyclass(
    name = "PotentialParams",
    module = "anharm2d",
    frozen,
    skip_from_py_object
)]
#[derive(Clone, Copy)]
struct PyParams(core::PotentialParams);

#[pymethods]
impl PyParams {
    #[new]
    fn new(a: f64, b: f64, c: f64) -> PyResult<Self> {
        core::PotentialParams::new(a, b, c).map(Self).map_err(to_py)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.0.c()
    }

    /// V(r).
    fn value(&self, r: f64) -> f64 {
        self.0.value(r)
    }

    /// V(r) plus the centrifugal term for channel `m`.
    fn effective(&self, m: u32, r: f64) -> f64 {
        self.0.effective(AngularChannel(m), r)
    }

    fn __repr__(&self) -> String {
        format!(
            "PotentialParams(a={}, b={}, c={})",
            self.0.a(),
            self.0.b(),
            self.0.c()
        )
    }
}

#[pyclass(name = "RadialGrid", module = "anharm2d", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyGrid(core::RadialGrid);

#[pymethods]
impl PyGrid {
    #[new]
    fn new(r_min: f64, r_max: f64, n: usize) -> PyResult<Self> {
        core::RadialGrid::new(r_min, r_max, n)
            .map(Self)
            .map_err(to_py)
    }

    /// Default grid for `params` in channel `m` with `n` interior points.
    #[staticmethod]
    #[pyo3(signature = (params, m, n, tail=core::DEFAULT_TAIL_THRESHOLD))]
    fn build(params: &PyParams, m: u32, n: usize, tail: f64) -> PyResult<Self> {
        core::build_grid_with_threshold(&params.0, AngularChannel(m), n, tail)
            .map(Self)
            .map_err(to_py)
    }

    #[getter]
    fn r_min(&self) -> f64 {
        self.0.r_min
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.0.r_max
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n
    }

    #[getter]
    fn h(&self) -> f64 {
        self.0.h
    }

    fn points(&self) -> Vec<f64> {
        self.0.points().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "RadialGrid(r_min={}, r_max={}, n={})",
            self.0.r_min, self.0.r_max, self.0.n
        )
    }
}

#[pyclass(
    name = "ClosedFormState",
    module = "anharm2d",
    frozen,
    skip_from_py_object
)]
#[derive(Clone, Copy)]
struct PyState(core::ClosedFormState);

#[pymethods]
impl PyState {
    #[staticmethod]
    #[pyo3(signature = (params, m, branch="minus"))]
    fn ground(params: &PyParams, m: u32, branch: &str) -> PyResult<Self> {
        let b = self::branch(branch)?;
        Ok(Self(core::ClosedFormState::ground(
            &params.0,
            AngularChannel(m),
            b,
        )))
    }

    #[staticmethod]
    fn excited(params: &PyParams) -> Self {
        Self(core::ClosedFormState::excited(&params.0))
    }

    #[getter]
    fn level(&self) -> String {
        self.0.level.to_string()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.0.energy
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.0.alpha
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta
    }

    /// Coefficients of the prefactor `c2 r² + c0 + c_{-2} r⁻²`.
    #[getter]
    fn prefactor(&self) -> (f64, f64, f64) {
        (self.0.poly_c2, self.0.poly_c0, self.0.poly_cm2)
    }

    fn scaled(&self, factor: f64) -> Self {
        Self(self.0.scaled(factor))
    }

    fn eval(&self, r: f64) -> PyResult<f64> {
        self.0.eval(r).map_err(to_py)
    }

    fn eval_many(&self, rs: Vec<f64>) -> PyResult<Vec<f64>> {
        rs.into_iter()
            .map(|r| self.0.eval(r).map_err(to_py))
            .collect()
    }

    /// Pointwise residual of the radial equation, with its natural scale.
    fn residual(&self, params: &PyParams, m: u32, r: f64) -> PyResult<(f64, f64)> {
        let res = self
            .0
            .residual(&params.0, AngularChannel(m), r)
            .map_err(to_py)?;
        Ok((res, self.0.residual_scale(&params.0, r)))
    }

    fn peak_radius(&self) -> PyResult<f64> {
        core::ground_peak_radius(&self.0).map_err(to_py)
    }

    /// Radii where the prefactor vanishes.
    fn nodes(&self) -> Vec<f64> {
        self.0.prefactor_roots()
    }

    fn squared_norm(&self, grid: &PyGrid) -> PyResult<f64> {
        core::squared_norm(&self.0, &grid.0).map_err(to_py)
    }

    fn normalization_constant(&self, grid: &PyGrid) -> PyResult<f64> {
        core::normalization_constant(&self.0, &grid.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ClosedFormState(level={}, kappa={}, energy={})",
            self.0.level, self.0.kappa, self.0.energy
        )
    }
}

#[pyclass(
    name = "JointSolution",
    module = "anharm2d",
    frozen,
    skip_from_py_object
)]
struct PyJoint(core::JointSolution);

#[pymethods]
impl PyJoint {
    #[getter]
    fn params(&self) -> PyParams {
        PyParams(self.0.params)
    }

    #[getter]
    fn m(&self) -> u32 {
        self.0.m.0
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.params.a()
    }

    #[getter]
    fn b(&self) -> f64 {
        self.0.b()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.0.c()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.0.kappa()
    }

    #[getter]
    fn kappa1(&self) -> f64 {
        self.0.kappa1()
    }

    #[getter]
    fn e0(&self) -> f64 {
        self.0.e0()
    }

    #[getter]
    fn e1(&self) -> f64 {
        self.0.e1()
    }

    /// Excited prefactor `a1 + a2 r² + a3 r⁻²` as `(a1, a2, a3)`.
    #[getter]
    fn coefficients(&self) -> (f64, f64, f64) {
        (self.0.a1, self.0.a2, self.0.a3)
    }

    #[getter]
    fn ground(&self) -> PyState {
        PyState(self.0.ground)
    }

    #[getter]
    fn excited(&self) -> PyState {
        PyState(self.0.excited)
    }

    fn __repr__(&self) -> String {
        format!(
            "JointSolution(a={}, m={}, b={}, c={}, E0={}, E1={})",
            self.a(),
            self.m(),
            self.b(),
            self.c(),
            self.e0(),
            self.e1()
        )
    }
}

#[pyclass(name = "VerificationReport", module = "anharm2d", frozen, get_all)]
struct PyReport {
    exact_energies: (f64, f64),
    numeric_energies: (f64, f64),
    abs_errors: (f64, f64),
    error_bounds: (f64, f64),
    node_counts: (usize, usize),
    overlap_01: f64,
    norm_constants: (f64, f64),
    convergence_order: f64,
    grid: PyGrid,
    params: PyParams,
    m: u32,
    passed: bool,
}

#[pymethods]
impl PyReport {
    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(passed={}, abs_errors={:?}, convergence_order={})",
            if self.passed { "True" } else { "False" },
            self.abs_errors,
            self.convergence_order
        )
    }
}

#[pyfunction]
fn excited_solve(a: f64, m: u32) -> PyResult<PyJoint> {
    core::excited_solve(a, AngularChannel(m))
        .map(PyJoint)
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, m, branch="minus"))]
fn ground_kappa(params: &PyParams, m: u32, branch: &str) -> PyResult<f64> {
    Ok(core::ground_kappa(
        AngularChannel(m),
        &params.0,
        self::branch(branch)?,
    ))
}

/// The `b` that makes the ground ansatz exact for `(a, c, m)` on the given branch.
#[pyfunction]
#[pyo3(signature = (a, c, m, branch="minus"))]
fn ground_constraint_b(a: f64, c: f64, m: u32, branch: &str) -> PyResult<f64> {
    core::ground_constraint_b(a, c, AngularChannel(m), self::branch(branch)?).map_err(to_py)
}

#[pyfunction]
fn ground_constraint_residual(params: &PyParams, m: u32) -> f64 {
    core::ground_constraint_residual(&params.0, AngularChannel(m))
}

#[pyfunction]
fn ground_energy(params: &PyParams) -> f64 {
    core::ground_energy(&params.0)
}

#[pyfunction]
fn excited_energy(params: &PyParams) -> f64 {
    core::excited_energy(&params.0)
}

#[pyfunction]
fn excited_kappa1(b: f64, c: f64) -> f64 {
    core::excited_kappa1(b, c)
}

#[pyfunction]
fn overlap(s1: &PyState, s2: &PyState, grid: &PyGrid) -> PyResult<f64> {
    core::overlap(&s1.0, &s2.0, &grid.0).map_err(to_py)
}

/// Two lowest eigenvalues of the discretized Hamiltonian.
#[pyfunction]
fn lowest_eigenvalues(params: &PyParams, m: u32, grid: &PyGrid) -> PyResult<(f64, f64)> {
    let h = core::assemble(&params.0, AngularChannel(m), &grid.0);
    let spec = core::lowest_eigenvalues(&h, 2).map_err(to_py)?;
    Ok((spec.eigenvalues[0], spec.eigenvalues[1]))
}

#[pyfunction]
fn convergence_study(params: &PyParams, m: u32, n_list: Vec<usize>) -> PyResult<f64> {
    core::convergence_study(&params.0, AngularChannel(m), &n_list).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (a, m, n=4000, tail=core::DEFAULT_TAIL_THRESHOLD))]
fn verify(py: Python<'_>, a: f64, m: u32, n: usize, tail: f64) -> PyResult<PyReport> {
    let rep = py
        .detach(|| core::verify_with_threshold(a, AngularChannel(m), n, tail))
        .map_err(to_py)?;
    Ok(PyReport {
        exact_energies: rep.exact_energies,
        numeric_energies: rep.numeric_energies,
        abs_errors: rep.abs_errors,
        error_bounds: rep.error_bounds,
        node_counts: rep.node_counts,
        overlap_01: rep.overlap_01,
        norm_constants: rep.norm_constants,
        convergence_order: rep.convergence_order,
        grid: PyGrid(rep.grid),
        params: PyParams(rep.params),
        m: rep.m,
        passed: rep.passed,
    })
}

#[pymodule]
fn anharm2d(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyJoint>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(excited_solve, m)?)?;
    m.add_function(wrap_pyfunction!(ground_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(ground_constraint_b, m)?)?;
    m.add_function(wrap_pyfunction!(ground_constraint_residual, m)?)?;
    m.add_function(wrap_pyfunction!(ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(excited_energy, m)?)?;
    m.add_function(wrap_pyfunction!(excited_kappa1, m)?)?;
    m.add_function(wrap_pyfunction!(overlap, m)?)?;
    m.add_function(wrap_pyfunction!(lowest_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_study, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("DEFAULT_TAIL_THRESHOLD", core::DEFAULT_TAIL_THRESHOLD)?;
    Ok(())
}
