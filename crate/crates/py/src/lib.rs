//! Python bindings: thin wrappers around the core types and operations,
//! returning plain floats, lists, and dicts wherever possible.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use lane_emden::angular;
use lane_emden::energy;
use lane_emden::error::Error;
use lane_emden::exponents;
use lane_emden::fractional;
use lane_emden::gamma;
use lane_emden::radial;
use lane_emden::singular;

fn to_py(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Problem parameters `(n, s, p)` with an optional component count.
#[pyclass(name = "Params", from_py_object)]
#[derive(Clone)]
struct PyParams {
    inner: exponents::ProblemParams,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (n, s, p, m = 1))]
    fn new(n: f64, s: f64, p: f64, m: usize) -> PyResult<Self> {
        let inner = exponents::ProblemParams::new(n, s, p)
            .and_then(|q| q.with_components(m))
            .map_err(to_py)?;
        Ok(PyParams { inner })
    }

    #[getter]
    fn n(&self) -> f64 {
        self.inner.n
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    /// Power-law decay exponent `2s/(p-1)`.
    fn beta_p(&self) -> f64 {
        self.inner.beta_p()
    }

    fn sobolev_exponent(&self) -> f64 {
        self.inner.sobolev_exponent()
    }

    /// Regime tag and its defining margin.
    fn classify(&self) -> PyResult<(String, f64)> {
        let regime = exponents::classify(&self.inner).map_err(to_py)?;
        Ok((regime.tag.as_str().to_string(), regime.margin))
    }

    /// `(condition_holds, p * multiplier - hardy)`.
    fn fractional_condition(&self) -> PyResult<(bool, f64)> {
        exponents::fractional_condition(&self.inner).map_err(to_py)
    }

    /// `(stable, hardy - p * multiplier)` for the singular solution.
    fn singular_stable(&self) -> PyResult<(bool, f64)> {
        singular::is_singular_stable(&self.inner).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Params(n={}, s={}, p={}, m={})",
            self.inner.n, self.inner.s, self.inner.p, self.inner.m
        )
    }
}

/// Homogeneous power-law solution `A |x|^{-beta} d`.
#[pyclass(name = "Singular")]
struct PySingular {
    inner: singular::SingularSolution,
}

#[pymethods]
impl PySingular {
    #[getter]
    fn amplitude(&self) -> f64 {
        self.inner.amplitude
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn direction(&self) -> Vec<f64> {
        self.inner.direction.clone()
    }

    fn value(&self, r: f64) -> Vec<f64> {
        self.inner.value(r)
    }

    fn derivative(&self, r: f64) -> Vec<f64> {
        self.inner.derivative(r)
    }

    /// Pointwise residual of the radial equation at `r` (local orders only).
    fn residual(&self, r: f64) -> PyResult<Vec<f64>> {
        self.inner.residual_local(r).map_err(to_py)
    }

    /// Ball integral of the chosen density up to `radius`.
    fn growth_integral(&self, radius: f64, which: &str) -> PyResult<f64> {
        self.inner
            .growth_integral(radius, parse_growth(which)?)
            .map_err(to_py)
    }

    fn growth_exponent(&self, which: &str) -> PyResult<f64> {
        Ok(self.inner.growth_exponent(parse_growth(which)?))
    }

    /// Sampled radial profile on a log-spaced grid, for the energy routines.
    fn as_solution(&self, r_min: f64, r_max: f64, points: usize) -> PyResult<PySolution> {
        let inner = radial::RadialSolution::from_singular(&self.inner, r_min, r_max, points)
            .map_err(to_py)?;
        Ok(PySolution { inner })
    }

    fn __repr__(&self) -> String {
        format!(
            "Singular(amplitude={}, beta={})",
            self.inner.amplitude, self.inner.beta
        )
    }
}

fn parse_growth(which: &str) -> PyResult<singular::GrowthKind> {
    match which {
        "lp1" => Ok(singular::GrowthKind::Lp1),
        "l2" => Ok(singular::GrowthKind::L2),
        "gradsq" => Ok(singular::GrowthKind::GradSq),
        other => Err(PyValueError::new_err(format!(
            "unknown growth kind {other:?}; expected 'lp1', 'l2', or 'gradsq'"
        ))),
    }
}

/// Radial profile from the shooting solver (or an exact power law).
#[pyclass(name = "Solution")]
struct PySolution {
    inner: radial::RadialSolution,
}

#[pymethods]
impl PySolution {
    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.inner.grid().to_vec()
    }

    #[getter]
    fn r_max(&self) -> f64 {
        self.inner.r_max()
    }

    #[getter]
    fn blow_up(&self) -> Option<f64> {
        self.inner.blow_up
    }

    /// Components and radial derivative at `r`:
    /// `{"u": [...], "du": [...]}` plus `"w"`, `"dw"` for fourth order.
    fn sample<'py>(&self, py: Python<'py>, r: f64) -> PyResult<Bound<'py, PyDict>> {
        let point = self.inner.sample(r).map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("u", point.u)?;
        out.set_item("du", point.du)?;
        if let Some(w) = point.w {
            out.set_item("w", w)?;
        }
        if let Some(dw) = point.dw {
            out.set_item("dw", dw)?;
        }
        Ok(out)
    }

    fn max_residual(&self) -> f64 {
        self.inner.max_residual()
    }

    fn blow_down(&self, lam: f64) -> PyResult<PySolution> {
        Ok(PySolution {
            inner: self.inner.blow_down(lam).map_err(to_py)?,
        })
    }

    fn energy_e1(&self, lam: f64) -> PyResult<f64> {
        energy::energy_E1(&self.inner, lam).map_err(to_py)
    }

    /// `(finite_difference, identity_rhs, residual)` for the derivative
    /// identity of the second-order energy.
    fn energy_e1_identity(&self, lam: f64, h: f64) -> PyResult<(f64, f64, f64)> {
        energy::energy_E1_derivative_identity(&self.inner, lam, h).map_err(to_py)
    }

    /// Fourth-order energy; a positive `h` runs the internal
    /// finite-difference cross-check of the boundary bracket.
    fn energy_e2(&self, lam: f64, h: f64) -> PyResult<f64> {
        energy::energy_E2(&self.inner, lam, h).map_err(to_py)
    }

    /// `(finite_difference, boundary_integrand)` lower-bound pair for the
    /// fourth-order energy derivative.
    fn energy_e2_bound(&self, lam: f64, h: f64) -> PyResult<(f64, f64)> {
        energy::energy_E2_derivative_bound(&self.inner, lam, h).map_err(to_py)
    }

    /// Energy values over a lambda grid:
    /// `{"lambdas": [...], "values": [...], "violations": [...]}`.
    fn energy_scan<'py>(&self, py: Python<'py>, lambdas: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let curve = energy::energy_scan(&self.inner, &lambdas).map_err(to_py)?;
        let out = PyDict::new(py);
        out.set_item("lambdas", curve.lambdas)?;
        out.set_item("values", curve.values)?;
        out.set_item("fd_derivative", curve.fd_derivative)?;
        out.set_item("identity_rhs", curve.identity_rhs)?;
        out.set_item("residuals", curve.residuals)?;
        out.set_item("violations", curve.violations)?;
        Ok(out)
    }

    /// Mismatch between the blow-down energy and the original at `(lam, r)`.
    fn scale_invariance(&self, lam: f64, r: f64) -> PyResult<f64> {
        energy::scale_invariance_check(&self.inner, lam, r).map_err(to_py)
    }

    /// `(slope, degenerate)` of the log-log growth of a ball integral.
    fn growth_slope(&self, radii: Vec<f64>, which: &str) -> PyResult<(f64, bool)> {
        let slope = energy::growth_slope(&self.inner, &radii, parse_growth(which)?)
            .map_err(to_py)?;
        Ok((slope.slope, slope.degenerate))
    }
}

#[pyfunction]
fn sobolev_exponent(n: f64, s: f64) -> f64 {
    exponents::sobolev_exponent(n, s)
}

#[pyfunction]
fn jl_exponent_root(n: f64, s: f64) -> PyResult<f64> {
    exponents::jl_exponent_root(n, s).map_err(to_py)
}

#[pyfunction]
fn jl_exponent_closed_form(n: f64, s: f64) -> PyResult<f64> {
    exponents::jl_exponent_closed_form(n, s).map_err(to_py)
}

#[pyfunction]
fn power_law_multiplier(n: f64, s: f64, beta: f64) -> PyResult<f64> {
    gamma::power_law_multiplier(n, s, beta).map_err(to_py)
}

#[pyfunction]
fn hardy_constant(n: f64, s: f64) -> PyResult<f64> {
    gamma::hardy_constant(n, s).map_err(to_py)
}

#[pyfunction]
fn sphere_area(n: f64) -> PyResult<f64> {
    gamma::sphere_area(n).map_err(to_py)
}

#[pyfunction]
fn make_singular(params: &PyParams, direction: Vec<f64>) -> PyResult<PySingular> {
    let inner = singular::make_singular(&params.inner, &direction).map_err(to_py)?;
    Ok(PySingular { inner })
}

#[pyfunction]
#[pyo3(signature = (params, init_u, r_max, init_w = None, rel_tol = None))]
fn solve_radial(
    params: &PyParams,
    init_u: Vec<f64>,
    r_max: f64,
    init_w: Option<Vec<f64>>,
    rel_tol: Option<f64>,
) -> PyResult<PySolution> {
    let mut cfg = radial::ShootingConfig::new(init_u, r_max);
    if let Some(w) = init_w {
        cfg = cfg.with_init_w(w);
    }
    if let Some(tol) = rel_tol {
        cfg.rel_tol = tol;
        cfg.abs_tol = tol * 1e-2;
    }
    let inner = radial::solve_radial(&params.inner, &cfg).map_err(to_py)?;
    Ok(PySolution { inner })
}

/// Angular equation coefficients `(q, alpha, beta)` for fourth order.
#[pyfunction]
fn angular_coefficients(n: f64, p: f64) -> PyResult<(f64, f64, f64)> {
    let c = angular::angular_coefficients(n, p).map_err(to_py)?;
    Ok((c.q, c.alpha, c.beta))
}

#[pyfunction]
fn constant_solution_check(n: f64, p: f64) -> PyResult<f64> {
    angular::constant_solution_check(n, p).map_err(to_py)
}

#[pyfunction]
fn stability_triple(n: f64, p: f64) -> PyResult<(f64, f64, f64)> {
    angular::stability_triple(n, p).map_err(to_py)
}

#[pyfunction]
fn stability_pair_s1(n: f64, p: f64) -> PyResult<(f64, f64)> {
    angular::stability_pair_s1(n, p).map_err(to_py)
}

/// `(q_value, potential, hardy_weighted)` for the cutoff Rayleigh probe.
#[pyfunction]
fn singular_instability_probe(n: f64, s: f64, p: f64, epsilon: f64) -> PyResult<(f64, f64, f64)> {
    let cutoff = angular::CutoffSpec::new(epsilon).map_err(to_py)?;
    let probe = angular::singular_instability_probe(n, s, p, &cutoff).map_err(to_py)?;
    Ok((probe.q_value, probe.potential, probe.hardy_weighted))
}

#[pyfunction]
#[pyo3(signature = (n, s, alpha, c, rel_tol = 1e-8))]
fn kernel_k(n: f64, s: f64, alpha: f64, c: f64, rel_tol: f64) -> PyResult<f64> {
    let quad = fractional::QuadratureSpec {
        rel_tol,
        ..Default::default()
    };
    fractional::kernel_K(&fractional::KernelQuery { n, s, alpha, c, quad }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, s, p, c, rel_tol = 1e-8))]
fn kernel_monotonicity_gap(n: f64, s: f64, p: f64, c: f64, rel_tol: f64) -> PyResult<f64> {
    let quad = fractional::QuadratureSpec {
        rel_tol,
        ..Default::default()
    };
    fractional::kernel_monotonicity_gap(n, s, p, c, &quad).map_err(to_py)
}

/// Principal-value quadrature for the singular amplitude constant.
#[pyfunction]
#[pyo3(signature = (n, s, p, rel_tol = 1e-8))]
fn a_constant_quadrature(n: f64, s: f64, p: f64, rel_tol: f64) -> PyResult<f64> {
    let quad = fractional::QuadratureSpec {
        rel_tol,
        ..Default::default()
    };
    fractional::A_constant_quadrature(n, s, p, &quad).map_err(to_py)
}

/// Principal-value quadrature for the Hardy constant.
#[pyfunction]
#[pyo3(signature = (n, s, rel_tol = 1e-8))]
fn hardy_integral_quadrature(n: f64, s: f64, rel_tol: f64) -> PyResult<f64> {
    let quad = fractional::QuadratureSpec {
        rel_tol,
        ..Default::default()
    };
    fractional::hardy_integral_quadrature(n, s, &quad).map_err(to_py)
}

#[pymodule]
fn lane_emden_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_class::<PySingular>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(sobolev_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(jl_exponent_root, m)?)?;
    m.add_function(wrap_pyfunction!(jl_exponent_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(power_law_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_constant, m)?)?;
    m.add_function(wrap_pyfunction!(sphere_area, m)?)?;
    m.add_function(wrap_pyfunction!(make_singular, m)?)?;
    m.add_function(wrap_pyfunction!(solve_radial, m)?)?;
    m.add_function(wrap_pyfunction!(angular_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(constant_solution_check, m)?)?;
    m.add_function(wrap_pyfunction!(stability_triple, m)?)?;
    m.add_function(wrap_pyfunction!(stability_pair_s1, m)?)?;
    m.add_function(wrap_pyfunction!(singular_instability_probe, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_k, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_monotonicity_gap, m)?)?;
    m.add_function(wrap_pyfunction!(a_constant_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(hardy_integral_quadrature, m)?)?;
    Ok(())
}
