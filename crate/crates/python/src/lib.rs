use ladderlab::diffusion::{self, Termination};
use ladderlab::fractal::{self, FractalLadderSpec};
use ladderlab::{admittance, dsl, AdmittanceSample, Complex64, Stage};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(ladderlab, ParseError, PyValueError);
create_exception!(ladderlab, NumericError, PyValueError);

fn numeric(e: ladderlab::Error) -> PyErr {
    NumericError::new_err(e.to_string())
}

fn parse_error(e: dsl::SourceError) -> PyErr {
    ParseError::new_err((e.message, e.position))
}

fn stages_from(pairs: Vec<(f64, f64)>) -> Vec<Stage> {
    pairs.into_iter().map(|(l, r)| Stage::new(l, r)).collect()
}

/// Series-parallel R-L circuit.
#[pyclass(frozen, skip_from_py_object, module = "ladderlab")]
#[derive(Clone)]
pub struct Circuit {
    inner: ladderlab::Circuit,
}

#[pymethods]
impl Circuit {
    /// Parses the `R:1 - (L:2 | R:3)` text form.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        dsl::parse(text)
            .map(|inner| Self { inner })
            .map_err(parse_error)
    }

    /// Ladder forest from `(inertance, resistance)` stages.
    #[staticmethod]
    fn ladder(stages: Vec<(f64, f64)>) -> PyResult<Self> {
        admittance::ladder_forest(&stages_from(stages))
            .map(|inner| Self { inner })
            .map_err(numeric)
    }

    #[getter]
    fn weight(&self) -> usize {
        self.inner.weight()
    }

    fn admittance(&self, omega: f64) -> PyResult<Complex64> {
        admittance::eval_admittance(&self.inner, omega).map_err(numeric)
    }

    fn sweep(&self, omegas: Vec<f64>) -> PyResult<Vec<Complex64>> {
        omegas
            .into_iter()
            .map(|w| admittance::eval_admittance(&self.inner, w).map_err(numeric))
            .collect()
    }

    fn rational(&self) -> PyResult<Rational> {
        admittance::circuit_to_rational(&self.inner)
            .map(|inner| Rational { inner })
            .map_err(numeric)
    }

    fn __str__(&self) -> String {
        dsl::format(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Circuit.parse({:?})", dsl::format(&self.inner))
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Admittance as a rational function of `s = jω`.
#[pyclass(frozen, module = "ladderlab")]
pub struct Rational {
    inner: ladderlab::RationalFunction,
}

#[pymethods]
impl Rational {
    #[getter]
    fn numerator(&self) -> Vec<Complex64> {
        self.inner.num().coeffs().to_vec()
    }

    #[getter]
    fn denominator(&self) -> Vec<Complex64> {
        self.inner.den().coeffs().to_vec()
    }

    fn __call__(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.eval(s).map_err(numeric)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

#[pyfunction]
fn continued_fraction(entries: Vec<Complex64>) -> PyResult<Complex64> {
    admittance::continued_fraction_eval(&entries).map_err(numeric)
}

#[pyfunction]
fn ladder_admittance(stages: Vec<(f64, f64)>, omega: f64) -> PyResult<Complex64> {
    admittance::ladder_admittance_cf(&stages_from(stages), omega).map_err(numeric)
}

#[pyclass(frozen, get_all, module = "ladderlab")]
pub struct ExponentFit {
    gamma: f64,
    k: f64,
    r2: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
}

impl From<fractal::ExponentFit> for ExponentFit {
    fn from(f: fractal::ExponentFit) -> Self {
        Self {
            gamma: f.gamma,
            k: f.k,
            r2: f.r2,
            omega_min: f.window.0,
            omega_max: f.window.1,
            points: f.points,
        }
    }
}

#[pymethods]
impl ExponentFit {
    fn __repr__(&self) -> String {
        format!(
            "ExponentFit(gamma={}, k={}, r2={}, points={})",
            self.gamma, self.k, self.r2, self.points
        )
    }
}

/// Least-squares exponent of `|y|` against `omega` on log-log axes.
#[pyfunction]
#[pyo3(signature = (omegas, ys, omega_min, omega_max))]
fn estimate_exponent(
    omegas: Vec<f64>,
    ys: Vec<Complex64>,
    omega_min: f64,
    omega_max: f64,
) -> PyResult<ExponentFit> {
    if omegas.len() != ys.len() {
        return Err(PyValueError::new_err("omegas and ys differ in length"));
    }
    let samples = omegas
        .into_iter()
        .zip(ys)
        .map(|(w, y)| AdmittanceSample::new(w, y))
        .collect::<ladderlab::Result<Vec<_>>>()
        .map_err(numeric)?;
    fractal::estimate_exponent(&samples, (omega_min, omega_max))
        .map(ExponentFit::from)
        .map_err(numeric)
}

/// Geometric ladder; `rho` defaults to `1/sigma`.
#[pyclass(frozen, module = "ladderlab")]
pub struct FractalLadder {
    spec: FractalLadderSpec,
}

#[pymethods]
impl FractalLadder {
    #[new]
    #[pyo3(signature = (a1, b1, sigma, rho = None))]
    fn new(a1: f64, b1: f64, sigma: f64, rho: Option<f64>) -> PyResult<Self> {
        let spec = match rho {
            Some(rho) => FractalLadderSpec::new(a1, b1, sigma, rho),
            None => FractalLadderSpec::oustaloup(a1, b1, sigma),
        };
        spec.map(|spec| Self { spec }).map_err(numeric)
    }

    #[getter]
    fn is_oustaloup(&self) -> bool {
        self.spec.is_oustaloup()
    }

    fn decorations(&self, n: usize) -> PyResult<Vec<(f64, f64)>> {
        fractal::fractal_decorations(&self.spec, n)
            .map(|v| v.iter().map(|s| (s.inertance, s.resistance)).collect())
            .map_err(numeric)
    }

    fn truncated(&self, n: usize, omega: f64) -> PyResult<Complex64> {
        fractal::truncated_admittance(&self.spec, n, omega).map_err(numeric)
    }

    /// Returns `(y, depth_used, converged)`.
    #[pyo3(signature = (omega, rel_tol = 1e-10, n_max = 65536))]
    fn asymptotic(
        &self,
        omega: f64,
        rel_tol: f64,
        n_max: usize,
    ) -> PyResult<(Complex64, usize, bool)> {
        fractal::asymptotic_admittance(&self.spec, omega, rel_tol, n_max)
            .map(|a| (a.y, a.depth_used, a.converged))
            .map_err(numeric)
    }

    fn scaling_residual(&self, n: usize, omega: f64) -> PyResult<f64> {
        fractal::scaling_residual(&self.spec, n, omega).map_err(numeric)
    }

    #[pyo3(signature = (omega_min = 1e-6, omega_max = 1e-3, points = 40, rel_tol = 1e-10, n_max = 65536))]
    fn exponent(
        &self,
        omega_min: f64,
        omega_max: f64,
        points: usize,
        rel_tol: f64,
        n_max: usize,
    ) -> PyResult<ExponentFit> {
        fractal::exponent_scan(&self.spec, (omega_min, omega_max), points, rel_tol, n_max)
            .map(|s| ExponentFit::from(s.fit))
            .map_err(numeric)
    }
}

/// Input admittance and node values of the discretized diffusion line.
/// Returns `(y_in, u, i)`.
#[pyfunction]
#[pyo3(signature = (z1, delta, n, r0, l0, omega, termination = "short"))]
#[allow(clippy::too_many_arguments)]
fn solve_line(
    z1: f64,
    delta: f64,
    n: usize,
    r0: f64,
    l0: f64,
    omega: f64,
    termination: &str,
) -> PyResult<(Complex64, Vec<Complex64>, Vec<Complex64>)> {
    let termination: Termination = termination.parse().map_err(numeric)?;
    let grid = diffusion::geometric_grid(z1, delta, n).map_err(numeric)?;
    let problem =
        diffusion::DiffusionProblem::new(grid, r0, l0, omega, termination).map_err(numeric)?;
    let sol = diffusion::solve_discrete_line(&problem).map_err(numeric)?;
    Ok((sol.y_in, sol.u, sol.i))
}

/// `(inertance, resistance)` stages sampled from the geometric grid.
#[pyfunction]
fn grid_ladder(z1: f64, delta: f64, n: usize, r0: f64, l0: f64) -> PyResult<Vec<(f64, f64)>> {
    let grid = diffusion::geometric_grid(z1, delta, n).map_err(numeric)?;
    Ok(diffusion::rl_profiles(&grid, r0, l0)
        .into_iter()
        .map(|s| (s.inertance, s.resistance))
        .collect())
}

#[pyfunction]
fn continuum_admittance(r0: f64, l0: f64, omega: f64) -> Complex64 {
    diffusion::continuum_admittance(r0, l0, omega)
}

#[pymodule]
#[pyo3(name = "ladderlab")]
pub fn ladderlab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Circuit>()?;
    m.add_class::<Rational>()?;
    m.add_class::<FractalLadder>()?;
    m.add_class::<ExponentFit>()?;
    m.add_function(wrap_pyfunction!(continued_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_admittance, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(solve_line, m)?)?;
    m.add_function(wrap_pyfunction!(grid_ladder, m)?)?;
    m.add_function(wrap_pyfunction!(continuum_admittance, m)?)?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    Ok(())
}
