//! Python bindings: functions, grids, conjugacies and periodic
//! displacements, plus the residual verifiers, constructors, dualities and
//! the explorer entry points.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bowtie::abel::{AbelConjugacy, PeriodicFunction, SeedProfile};
use bowtie::explorer::{Objective, SearchConfig};
use bowtie::funcalg::{self, Interval, RealFunction, ResidualReport};
use bowtie::jsonspec::{ConjugacySpec, FunctionSpec};
use bowtie::solutions::{self, CandidateSolution, Generator, Provenance};
use bowtie::verify::{self, DecompositionPair};

fn err(e: bowtie::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn report_dict<'py>(py: Python<'py>, r: &ResidualReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("sup", r.sup)?;
    d.set_item("argmax", r.argmax)?;
    d.set_item("grid", &r.grid)?;
    Ok(d)
}

/// A real function on an interval domain.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Function {
    inner: RealFunction,
}

#[pymethods]
impl Function {
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Function> {
        let spec: FunctionSpec = serde_json::from_str(spec).map_err(json_err)?;
        Ok(Function {
            inner: spec.to_function().map_err(err)?,
        })
    }

    #[staticmethod]
    fn linear(slope: f64) -> Function {
        Function {
            inner: RealFunction::linear(slope),
        }
    }

    #[staticmethod]
    fn rational_neg() -> Function {
        Function {
            inner: RealFunction::rational_neg(),
        }
    }

    #[staticmethod]
    fn sin_log_slope(slope: f64, amplitude: f64) -> Function {
        Function {
            inner: RealFunction::sin_log_slope(slope, amplitude),
        }
    }

    fn evaluate(&self, x: f64) -> PyResult<f64> {
        self.inner.evaluate(x).map_err(err)
    }

    fn conjugate_neg(&self) -> Function {
        Function {
            inner: self.inner.conjugate_neg(),
        }
    }

    fn displacement(&self) -> Function {
        Function {
            inner: self.inner.displacement(),
        }
    }

    fn restrict_pos(&self) -> Function {
        Function {
            inner: self.inner.restrict_pos(),
        }
    }

    fn restrict_neg(&self) -> Function {
        Function {
            inner: self.inner.restrict_neg(),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        let spec = FunctionSpec::from_function(&self.inner).map_err(err)?;
        serde_json::to_string(&spec).map_err(json_err)
    }

    fn __repr__(&self) -> String {
        format!("Function(domain={})", self.inner.domain())
    }
}

/// An evaluation grid.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Grid {
    inner: funcalg::Grid,
}

#[pymethods]
impl Grid {
    #[staticmethod]
    fn log_spaced(min: f64, max: f64, points: usize) -> Grid {
        Grid {
            inner: funcalg::Grid::log_spaced(min, max, points),
        }
    }

    #[staticmethod]
    fn linear(min: f64, max: f64, points: usize) -> Grid {
        Grid {
            inner: funcalg::Grid::linear(min, max, points),
        }
    }

    #[staticmethod]
    fn symmetric_log(min: f64, max: f64, points: usize) -> Grid {
        Grid {
            inner: funcalg::Grid::symmetric_log(min, max, points),
        }
    }

    #[staticmethod]
    fn default_symmetric() -> Grid {
        Grid {
            inner: funcalg::Grid::default_symmetric(),
        }
    }

    #[staticmethod]
    fn default_positive() -> Grid {
        Grid {
            inner: funcalg::Grid::default_positive(),
        }
    }

    fn points(&self) -> Vec<f64> {
        self.inner.points().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Grid({})", self.inner.description())
    }
}

/// A periodic displacement P.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Periodic {
    inner: PeriodicFunction,
}

#[pymethods]
impl Periodic {
    #[staticmethod]
    fn constant(period: f64, value: f64) -> Periodic {
        Periodic {
            inner: PeriodicFunction::constant(period, value),
        }
    }

    #[staticmethod]
    fn trig(
        period: f64,
        constant: f64,
        cos_coeffs: Vec<f64>,
        sin_coeffs: Vec<f64>,
    ) -> PyResult<Periodic> {
        Ok(Periodic {
            inner: PeriodicFunction::trig(period, constant, cos_coeffs, sin_coeffs)
                .map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Periodic> {
        Ok(Periodic {
            inner: serde_json::from_str(spec).map_err(json_err)?,
        })
    }

    fn evaluate(&self, u: f64) -> f64 {
        self.inner.evaluate(u)
    }

    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn certify_positive(&self) -> bool {
        self.inner.certify_positive()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(json_err)
    }
}

/// A solved Abel conjugacy (α, ω, g).
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Conjugacy {
    inner: Arc<AbelConjugacy>,
}

#[pymethods]
impl Conjugacy {
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Conjugacy> {
        let spec: ConjugacySpec = serde_json::from_str(spec).map_err(json_err)?;
        Ok(Conjugacy {
            inner: Arc::new(spec.to_conjugacy().map_err(err)?),
        })
    }

    fn alpha(&self, x: f64) -> PyResult<f64> {
        self.inner.alpha(x).map_err(err)
    }

    fn alpha_inverse(&self, t: f64) -> PyResult<f64> {
        self.inner.alpha_inverse(t).map_err(err)
    }

    fn omega(&self) -> f64 {
        self.inner.omega()
    }

    fn x0(&self) -> f64 {
        self.inner.x0()
    }

    fn g(&self) -> Function {
        Function {
            inner: self.inner.g().clone(),
        }
    }

    fn abel_residual<'py>(&self, py: Python<'py>, grid: &Grid) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.abel_residual(&grid.inner).map_err(err)?;
        report_dict(py, &r)
    }

    fn to_json(&self) -> PyResult<String> {
        let spec = ConjugacySpec::from_conjugacy(&self.inner).map_err(err)?;
        serde_json::to_string(&spec).map_err(json_err)
    }
}

fn candidate_of(f: &Function) -> PyResult<CandidateSolution> {
    let generator = Generator::validate(f.inner.restrict_neg()).map_err(err)?;
    CandidateSolution::new(f.inner.clone(), Provenance::User, generator).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (g, omega=1.0, x0=1.0, profile="linear"))]
fn solve_abel(g: &Function, omega: f64, x0: f64, profile: &str) -> PyResult<Conjugacy> {
    let profile = match profile {
        "linear" => SeedProfile::Linear,
        "log" => SeedProfile::Log,
        "smoothstep" => SeedProfile::Smoothstep,
        other => return Err(PyValueError::new_err(format!("unknown profile '{other}'"))),
    };
    Ok(Conjugacy {
        inner: Arc::new(
            bowtie::abel::solve_abel(g.inner.clone(), omega, x0, profile).map_err(err)?,
        ),
    })
}

#[pyfunction]
fn reconstruct_g(c: &Conjugacy) -> Function {
    Function {
        inner: bowtie::abel::reconstruct_g(&c.inner),
    }
}

#[pyfunction]
fn build_branch(c: &Conjugacy, periodic: &Periodic) -> PyResult<Function> {
    Ok(Function {
        inner: bowtie::abel::build_branch(&c.inner, &periodic.inner).map_err(err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (h, c, samples=256))]
fn extract_periodic<'py>(
    py: Python<'py>,
    h: &Function,
    c: &Conjugacy,
    samples: usize,
) -> PyResult<(Periodic, Bound<'py, PyDict>)> {
    let (p, defect) = bowtie::abel::extract_periodic(&h.inner, &c.inner, samples).map_err(err)?;
    Ok((Periodic { inner: p }, report_dict(py, &defect)?))
}

#[pyfunction]
fn corollary1_extend(phi: &Function) -> PyResult<Function> {
    let generator = Generator::validate(phi.inner.clone()).map_err(err)?;
    let c = solutions::corollary1_extend(&generator).map_err(err)?;
    Ok(Function {
        inner: c.function().clone(),
    })
}

#[pyfunction]
fn homogeneous_solution(a: f64, b: f64) -> PyResult<Function> {
    let c = solutions::homogeneous_solution(a, b).map_err(err)?;
    Ok(Function {
        inner: c.function().clone(),
    })
}

#[pyfunction]
fn theorem2_construct<'py>(
    py: Python<'py>,
    psi: &Function,
    p2: &Periodic,
    grid: &Grid,
) -> PyResult<(Function, Bound<'py, PyDict>)> {
    let generator = Generator::validate(psi.inner.clone()).map_err(err)?;
    let (candidate, second) =
        bowtie::abel::theorem2_construct(&generator, &p2.inner, &grid.inner).map_err(err)?;
    Ok((
        Function {
            inner: candidate.function().clone(),
        },
        report_dict(py, &second)?,
    ))
}

#[pyfunction]
fn displacement_dual(f: &Function) -> PyResult<Function> {
    let d = solutions::displacement_dual(&candidate_of(f)?).map_err(err)?;
    Ok(Function {
        inner: d.function().clone(),
    })
}

#[pyfunction]
fn rotate_dual(f: &Function) -> PyResult<Function> {
    let d = solutions::rotate_dual(&candidate_of(f)?).map_err(err)?;
    Ok(Function {
        inner: d.function().clone(),
    })
}

#[pyfunction]
fn eq1_residual<'py>(py: Python<'py>, f: &Function, grid: &Grid) -> PyResult<Bound<'py, PyDict>> {
    let r = solutions::eq1_residual(&f.inner, &grid.inner).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
fn lemma_residuals<'py>(
    py: Python<'py>,
    f: &Function,
    grid: &Grid,
) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyDict>)> {
    let (r1, r2) = solutions::lemma_residuals(&candidate_of(f)?, &grid.inner).map_err(err)?;
    Ok((report_dict(py, &r1)?, report_dict(py, &r2)?))
}

#[pyfunction]
fn eq13_residual<'py>(py: Python<'py>, g: &Function, grid: &Grid) -> PyResult<Bound<'py, PyDict>> {
    let r = verify::eq13_residual(&g.inner, &grid.inner).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (f, r1, grid, r2=None))]
fn sablik_residual<'py>(
    py: Python<'py>,
    f: &Function,
    r1: &Function,
    grid: &Grid,
    r2: Option<&Function>,
) -> PyResult<Bound<'py, PyDict>> {
    let pair = match r2 {
        Some(r2) => DecompositionPair::validate(r1.inner.clone(), r2.inner.clone(), &grid.inner)
            .map_err(err)?,
        None => DecompositionPair::from_displacement(r1.inner.clone(), &grid.inner).map_err(err)?,
    };
    let r = verify::sablik_residual(&f.inner, &pair, &grid.inner).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (g, grid, tol=1e-8))]
fn proposition5_check<'py>(
    py: Python<'py>,
    g: &Function,
    grid: &Grid,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = verify::proposition5_check(&g.inner, &grid.inner, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("commutator", report_dict(py, &r.commute)?)?;
    d.set_item("eq13", report_dict(py, &r.eq13)?)?;
    d.set_item("tol", r.tol)?;
    d.set_item("common_abel_plausible", r.common_abel_plausible)?;
    Ok(d)
}

#[pyfunction]
fn theorem1_decomposition<'py>(
    py: Python<'py>,
    psi: &Function,
    f: &Function,
    grid: &Grid,
) -> PyResult<Bound<'py, PyDict>> {
    let generator = Generator::validate(psi.inner.clone()).map_err(err)?;
    let candidate = candidate_of(f)?;
    let r = verify::theorem1_decomposition(&generator, &candidate, &grid.inner).map_err(err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (g, grid, interval="real", strict=true))]
fn cone_check<'py>(
    py: Python<'py>,
    g: &Function,
    grid: &Grid,
    interval: &str,
    strict: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let interval = match interval {
        "real" => Interval::REAL,
        "pos" => Interval::POS,
        "neg" => Interval::NEG,
        other => return Err(PyValueError::new_err(format!("unknown interval '{other}'"))),
    };
    let r = funcalg::cone_check(&g.inner, interval, &grid.inner, strict).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("member", r.member)?;
    d.set_item("strict", r.strict)?;
    Ok(d)
}

#[pyfunction]
fn perturbation_scan(a: f64, amplitudes: Vec<f64>) -> PyResult<Vec<(f64, f64)>> {
    let config = SearchConfig::default();
    bowtie::explorer::perturbation_scan(a, &amplitudes, &config).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (coeffs=4, amplitude=0.3, restarts=20, seed=42))]
fn search_eq13<'py>(
    py: Python<'py>,
    coeffs: usize,
    amplitude: f64,
    restarts: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let config = SearchConfig {
        objective: Objective::Eq13,
        coeff_count: coeffs,
        amplitude,
        restarts,
        seed,
        ..SearchConfig::default()
    };
    let outcome = bowtie::explorer::search(&config).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("best_a", outcome.best.a)?;
    d.set_item("best_coeffs", outcome.best.coeffs.clone())?;
    d.set_item("best_residual", outcome.best_residual)?;
    d.set_item("best_restart", outcome.best_restart)?;
    d.set_item("verdict", outcome.verdict)?;
    d.set_item("note", outcome.note)?;
    d.set_item("iterations", outcome.trace.len())?;
    Ok(d)
}

#[pymodule]
fn bowtie_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Function>()?;
    m.add_class::<Grid>()?;
    m.add_class::<Periodic>()?;
    m.add_class::<Conjugacy>()?;
    m.add_function(wrap_pyfunction!(solve_abel, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_g, m)?)?;
    m.add_function(wrap_pyfunction!(build_branch, m)?)?;
    m.add_function(wrap_pyfunction!(extract_periodic, m)?)?;
    m.add_function(wrap_pyfunction!(corollary1_extend, m)?)?;
    m.add_function(wrap_pyfunction!(homogeneous_solution, m)?)?;
    m.add_function(wrap_pyfunction!(theorem2_construct, m)?)?;
    m.add_function(wrap_pyfunction!(displacement_dual, m)?)?;
    m.add_function(wrap_pyfunction!(rotate_dual, m)?)?;
    m.add_function(wrap_pyfunction!(eq1_residual, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(eq13_residual, m)?)?;
    m.add_function(wrap_pyfunction!(sablik_residual, m)?)?;
    m.add_function(wrap_pyfunction!(proposition5_check, m)?)?;
    m.add_function(wrap_pyfunction!(theorem1_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(cone_check, m)?)?;
    m.add_function(wrap_pyfunction!(perturbation_scan, m)?)?;
    m.add_function(wrap_pyfunction!(search_eq13, m)?)?;
    Ok(())
}
