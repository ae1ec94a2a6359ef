//! Python bindings for `cdwtunnel`.

use std::cell::RefCell;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use cdwtunnel::fitting::{self, FreeParam};
use cdwtunnel::potential::{self, FieldProfile};
use cdwtunnel::transport::{self, CurrentModel, SgeConvention};
use cdwtunnel::{numerics, tunneling, verify, wavefunctional};

fn to_py(e: cdwtunnel::Error) -> PyErr {
    match e {
        cdwtunnel::Error::Domain(_) => PyValueError::new_err(e.to_string()),
        cdwtunnel::Error::Quadrature { .. } => PyRuntimeError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for cdwtunnel::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Parameters of the extended sine-Gordon potential.
#[pyclass(name = "PotentialParams", get_all, set_all, from_py_object)]
#[derive(Clone, Copy)]
struct PyPotentialParams {
    c1: f64,
    c2: f64,
    phi0: f64,
    d1: f64,
    d2: f64,
    mu: f64,
    varphi: f64,
    i0: f64,
}

#[pymethods]
impl PyPotentialParams {
    #[new]
    #[pyo3(signature = (c1=1.0, c2=0.25, phi0=2.0, d1=100.0, d2=1.0, mu=1.0, varphi=0.0, i0=0.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(c1: f64, c2: f64, phi0: f64, d1: f64, d2: f64, mu: f64, varphi: f64, i0: f64) -> Self {
        Self {
            c1,
            c2,
            phi0,
            d1,
            d2,
            mu,
            varphi,
            i0,
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "PotentialParams(c1={}, c2={}, phi0={}, d1={}, d2={}, mu={}, varphi={}, i0={})",
            self.c1, self.c2, self.phi0, self.d1, self.d2, self.mu, self.varphi, self.i0
        )
    }
}

impl From<PyPotentialParams> for potential::PotentialParams {
    fn from(p: PyPotentialParams) -> Self {
        Self {
            c1: p.c1,
            c2: p.c2,
            phi0: p.phi0,
            d1: p.d1,
            d2: p.d2,
            mu: p.mu,
            varphi: p.varphi,
            i0: p.i0,
        }
    }
}

/// Field-to-geometry constants and current-law amplitudes.
#[pyclass(name = "TransportParams", get_all, set_all, from_py_object)]
#[derive(Clone, Copy)]
struct PyTransportParams {
    e_t: f64,
    c_v: f64,
    c_tilde1: f64,
    g_p: f64,
    delta_s: f64,
    e_star: f64,
    eps_g: f64,
    m_e: f64,
    omega: f64,
    e_charge: f64,
}

#[pymethods]
impl PyTransportParams {
    #[new]
    #[pyo3(signature = (e_t=1.0, c_v=1.0, c_tilde1=1.0, g_p=1.0, delta_s=1.0, e_star=1.0, eps_g=1.0, m_e=1.0, omega=1.0, e_charge=1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        e_t: f64,
        c_v: f64,
        c_tilde1: f64,
        g_p: f64,
        delta_s: f64,
        e_star: f64,
        eps_g: f64,
        m_e: f64,
        omega: f64,
        e_charge: f64,
    ) -> PyResult<Self> {
        let p = Self {
            e_t,
            c_v,
            c_tilde1,
            g_p,
            delta_s,
            e_star,
            eps_g,
            m_e,
            omega,
            e_charge,
        };
        transport::TransportParams::from(p).validate().py_err()?;
        Ok(p)
    }

    fn __repr__(&self) -> String {
        format!(
            "TransportParams(e_t={}, c_v={}, c_tilde1={}, g_p={})",
            self.e_t, self.c_v, self.c_tilde1, self.g_p
        )
    }
}

impl From<PyTransportParams> for transport::TransportParams {
    fn from(p: PyTransportParams) -> Self {
        Self {
            e_t: p.e_t,
            c_v: p.c_v,
            c_tilde1: p.c_tilde1,
            g_p: p.g_p,
            delta_s: p.delta_s,
            e_star: p.e_star,
            eps_g: p.eps_g,
            m_e: p.m_e,
            omega: p.omega,
            e_charge: p.e_charge,
        }
    }
}

impl From<transport::TransportParams> for PyTransportParams {
    fn from(p: transport::TransportParams) -> Self {
        Self {
            e_t: p.e_t,
            c_v: p.c_v,
            c_tilde1: p.c_tilde1,
            g_p: p.g_p,
            delta_s: p.delta_s,
            e_star: p.e_star,
            eps_g: p.eps_g,
            m_e: p.m_e,
            omega: p.omega,
            e_charge: p.e_charge,
        }
    }
}

/// Inputs of the analytic tunneling matrix element.
#[pyclass(name = "MatrixElementInputs", get_all, set_all, from_py_object)]
#[derive(Clone, Copy)]
struct PyMatrixElementInputs {
    x_bar: f64,
    l: f64,
    alpha: f64,
    n1: f64,
    c1_norm: f64,
    c2_norm: f64,
    m_star: f64,
}

#[pymethods]
impl PyMatrixElementInputs {
    #[new]
    #[pyo3(signature = (x_bar, l, alpha, n1=1.0, c1_norm=1.0, c2_norm=1.0, m_star=1.0))]
    fn new(
        x_bar: f64,
        l: f64,
        alpha: f64,
        n1: f64,
        c1_norm: f64,
        c2_norm: f64,
        m_star: f64,
    ) -> PyResult<Self> {
        let p = Self {
            x_bar,
            l,
            alpha,
            n1,
            c1_norm,
            c2_norm,
            m_star,
        };
        tunneling::MatrixElementInputs::from(p)
            .validate()
            .py_err()?;
        Ok(p)
    }

    /// Inputs whose exponent matches two Gaussians `separation` apart, width `1/l`.
    #[staticmethod]
    fn matched(l: f64, separation: f64) -> PyResult<Self> {
        let m = tunneling::MatrixElementInputs::matched(l, separation).py_err()?;
        Ok(Self {
            x_bar: m.x_bar,
            l: m.l,
            alpha: m.alpha,
            n1: m.n1,
            c1_norm: m.c1_norm,
            c2_norm: m.c2_norm,
            m_star: m.m_star,
        })
    }

    fn __repr__(&self) -> String {
        format!(
            "MatrixElementInputs(x_bar={}, l={}, alpha={}, n1={}, c1_norm={}, c2_norm={}, m_star={})",
            self.x_bar, self.l, self.alpha, self.n1, self.c1_norm, self.c2_norm, self.m_star
        )
    }
}

impl From<PyMatrixElementInputs> for tunneling::MatrixElementInputs {
    fn from(p: PyMatrixElementInputs) -> Self {
        Self {
            x_bar: p.x_bar,
            l: p.l,
            alpha: p.alpha,
            n1: p.n1,
            c1_norm: p.c1_norm,
            c2_norm: p.c2_norm,
            m_star: p.m_star,
        }
    }
}

#[pyfunction]
fn erf(x: f64) -> f64 {
    numerics::erf(x)
}

#[pyfunction]
fn erfc(x: f64) -> f64 {
    numerics::erfc(x)
}

/// Adaptive quadrature of a Python callable over `[a, b]`.
#[pyfunction]
#[pyo3(signature = (f, a, b, tol=1e-10))]
fn integrate(f: &Bound<'_, PyAny>, a: f64, b: f64, tol: f64) -> PyResult<f64> {
    let failure: RefCell<Option<PyErr>> = RefCell::new(None);
    let value = numerics::integrate_adaptive(
        |x| match f.call1((x,)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        tol,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value.py_err()
}

#[pyfunction]
fn extended_potential(phi: f64, params: PyPotentialParams) -> f64 {
    potential::eval_extended_potential(phi, &params.into())
}

#[pyfunction]
fn delta_e_gap(params: PyPotentialParams, phi_f: f64, phi_t: f64) -> f64 {
    potential::delta_e_gap(&params.into(), phi_f, phi_t)
}

/// Phase of a kink-antikink pair at each `x`.
#[pyfunction]
fn kink_pair_profile(xs: Vec<f64>, x_a: f64, x_b: f64, b: f64) -> PyResult<Vec<f64>> {
    let kp = wavefunctional::KinkPairProfile::new(x_a, x_b, b).py_err()?;
    Ok(xs
        .iter()
        .map(|&x| wavefunctional::kink_pair_profile(x, &kp))
        .collect())
}

/// `(xs, phis)` of a pair of separation `l` centred at 0.
#[pyfunction]
#[pyo3(signature = (l, b, half_width, n=401))]
fn sample_pair(l: f64, b: f64, half_width: f64, n: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let kp = wavefunctional::KinkPairProfile::centered(l, b).py_err()?;
    let p = wavefunctional::sample_profile(&kp, half_width, n).py_err()?;
    Ok((p.xs().to_vec(), p.phis().to_vec()))
}

#[pyfunction]
fn topological_charge(xs: Vec<f64>, phis: Vec<f64>) -> PyResult<f64> {
    Ok(potential::topological_charge(
        &FieldProfile::new(xs, phis).py_err()?,
    ))
}

/// Energy bound check of a sampled profile; returns a dict of the report fields.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
fn bogomolnyi_check<'py>(
    py: Python<'py>,
    xs: Vec<f64>,
    phis: Vec<f64>,
    params: PyPotentialParams,
    phi_c: f64,
    phi_f: f64,
    phi_t: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let profile = FieldProfile::new(xs, phis).py_err()?;
    let r = potential::bogomolnyi_check(&profile, &params.into(), phi_c, phi_f, phi_t);
    let d = PyDict::new(py);
    d.set_item("lhs", r.lhs)?;
    d.set_item("q_abs", r.q_abs)?;
    d.set_item("rhs", r.rhs)?;
    d.set_item("braces", r.braces)?;
    d.set_item("satisfied", r.satisfied)?;
    Ok(d)
}

#[pyfunction]
fn thin_wall_ft(k: f64, l: f64) -> f64 {
    wavefunctional::thin_wall_ft(k, l)
}

#[pyfunction]
fn norm_constant(alpha: f64, l: f64) -> PyResult<f64> {
    wavefunctional::norm_constant(alpha, l).py_err()
}

#[pyfunction]
fn t_if_analytic(inputs: PyMatrixElementInputs) -> PyResult<f64> {
    tunneling::t_if_analytic(&inputs.into()).py_err()
}

#[pyfunction]
fn t_if_simplified(inputs: PyMatrixElementInputs) -> PyResult<f64> {
    tunneling::t_if_simplified(&inputs.into()).py_err()
}

/// Quadrature matrix element between normalized Gaussians of widths
/// `alpha_i`, `alpha_f` centred at `center_i`, `center_f`.
#[pyfunction]
#[pyo3(signature = (alpha_i, center_i, alpha_f, center_f, l, u0=None, m_star=1.0))]
fn t_if_oracle(
    alpha_i: f64,
    center_i: f64,
    alpha_f: f64,
    center_f: f64,
    l: f64,
    u0: Option<f64>,
    m_star: f64,
) -> PyResult<f64> {
    let i = wavefunctional::WavefunctionalSpec::normalized(alpha_i, center_i, l).py_err()?;
    let f = wavefunctional::WavefunctionalSpec::normalized(alpha_f, center_f, l).py_err()?;
    tunneling::t_if_single_mode_oracle(&i, &f, u0, m_star).py_err()
}

fn parse_convention(s: &str) -> PyResult<SgeConvention> {
    match s {
        "as_printed" => Ok(SgeConvention::AsPrinted),
        "back_substituted" => Ok(SgeConvention::BackSubstituted),
        other => Err(PyValueError::new_err(format!(
            "unknown convention '{other}' (expected as_printed or back_substituted)"
        ))),
    }
}

#[pyfunction]
#[pyo3(signature = (e, params, convention="as_printed"))]
fn current_sge(e: f64, params: PyTransportParams, convention: &str) -> PyResult<f64> {
    transport::current_sge_with(e, &params.into(), parse_convention(convention)?).py_err()
}

#[pyfunction]
fn current_zener(e: f64, params: PyTransportParams) -> PyResult<f64> {
    transport::current_zener(e, &params.into()).py_err()
}

/// `(E, I)` pairs of the `"sge"` or `"zener"` law on `grid`.
#[pyfunction]
fn curve(model: &str, params: PyTransportParams, grid: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let model = match model {
        "sge" => CurrentModel::Sge,
        "zener" => CurrentModel::Zener,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown model '{other}' (expected sge or zener)"
            )))
        }
    };
    Ok(transport::curve_series(model, &params.into(), &grid)
        .py_err()?
        .points)
}

fn parse_free(free: Vec<String>) -> PyResult<Vec<FreeParam>> {
    free.iter()
        .map(|s| s.parse::<FreeParam>().py_err())
        .collect()
}

fn fit_report<'py>(
    py: Python<'py>,
    free: &[FreeParam],
    r: numerics::FitResult,
) -> PyResult<Bound<'py, PyDict>> {
    let params = PyDict::new(py);
    for (p, v) in free.iter().zip(&r.params) {
        params.set_item(p.name(), v)?;
    }
    let d = PyDict::new(py);
    d.set_item("params", params)?;
    d.set_item("residual_rms", r.residual_rms)?;
    d.set_item("iterations", r.iterations)?;
    d.set_item("converged", r.converged)?;
    Ok(d)
}

/// Fits the soliton-pair law to `(E, I)` data.
#[pyfunction]
#[pyo3(signature = (data, start, free=vec!["c_tilde1".to_owned(), "c_v".to_owned()]))]
fn fit_sge_to_series<'py>(
    py: Python<'py>,
    data: Vec<(f64, f64)>,
    start: PyTransportParams,
    free: Vec<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let free = parse_free(free)?;
    let r = fitting::fit_sge_to_series(&data, &free, &start.into()).py_err()?;
    fit_report(py, &free, r)
}

/// Fits the soliton-pair law to the Zener law of `target` sampled on `grid`.
#[pyfunction]
#[pyo3(signature = (target, grid, start=None, free=vec!["c_tilde1".to_owned(), "c_v".to_owned()]))]
fn fit_sge_to_zener<'py>(
    py: Python<'py>,
    target: PyTransportParams,
    grid: Vec<f64>,
    start: Option<PyTransportParams>,
    free: Vec<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let free = parse_free(free)?;
    let start = start.unwrap_or(target);
    let r = fitting::fit_sge_to_zener(&target.into(), &grid, &free, &start.into()).py_err()?;
    fit_report(py, &free, r)
}

/// Runs the built-in checks; returns `(name, measured, tol, passed)` tuples.
#[pyfunction]
#[pyo3(signature = (only=None))]
fn run_checks(only: Option<Vec<String>>) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let checks: Vec<&verify::Check> = match only {
        Some(names) => names
            .iter()
            .map(|n| verify::find_check(n).py_err())
            .collect::<PyResult<_>>()?,
        None => verify::CHECKS.iter().collect(),
    };
    Ok(checks
        .into_iter()
        .map(|c| {
            let o = verify::run_check(c, c.default_tol);
            (o.name.to_owned(), o.measured, o.tol, o.pass)
        })
        .collect())
}

#[pymodule]
fn cdwtunnel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPotentialParams>()?;
    m.add_class::<PyTransportParams>()?;
    m.add_class::<PyMatrixElementInputs>()?;
    m.add_function(wrap_pyfunction!(erf, m)?)?;
    m.add_function(wrap_pyfunction!(erfc, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(extended_potential, m)?)?;
    m.add_function(wrap_pyfunction!(delta_e_gap, m)?)?;
    m.add_function(wrap_pyfunction!(kink_pair_profile, m)?)?;
    m.add_function(wrap_pyfunction!(sample_pair, m)?)?;
    m.add_function(wrap_pyfunction!(topological_charge, m)?)?;
    m.add_function(wrap_pyfunction!(bogomolnyi_check, m)?)?;
    m.add_function(wrap_pyfunction!(thin_wall_ft, m)?)?;
    m.add_function(wrap_pyfunction!(norm_constant, m)?)?;
    m.add_function(wrap_pyfunction!(t_if_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(t_if_simplified, m)?)?;
    m.add_function(wrap_pyfunction!(t_if_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(current_sge, m)?)?;
    m.add_function(wrap_pyfunction!(current_zener, m)?)?;
    m.add_function(wrap_pyfunction!(curve, m)?)?;
    m.add_function(wrap_pyfunction!(fit_sge_to_series, m)?)?;
    m.add_function(wrap_pyfunction!(fit_sge_to_zener, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
