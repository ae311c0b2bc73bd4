//! Python bindings: bodies, linear maps, rounding, area bounds, Beltrami
//! coefficients and the discrete modulus solver.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use bmround_core::banach_mazur::{self as bm, RoundingOptions};
use bmround_core::ellipse_field::{self as ef};
use bmround_core::envelopes as env;
use bmround_core::geometry::{BodyKind, Ellipse, LinearMap2, SymmetricConvexBody, Vec2};
use bmround_core::io;
use bmround_core::modulus::{self as md, ModulusOptions};
use bmround_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::SolverLimit { .. } => PyRuntimeError::new_err(e.to_string()),
        Error::Cell { ref source, .. }
            if matches!(**source, Error::NonConvergence { .. } | Error::SolverLimit { .. }) =>
        {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Invertible 2x2 matrix `[[a, b], [c, d]]`.
#[pyclass(name = "Map", module = "bmround", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyMap(LinearMap2);

#[pymethods]
impl PyMap {
    #[new]
    fn new(a: f64, b: f64, c: f64, d: f64) -> PyResult<Self> {
        LinearMap2::new(a, b, c, d).map(PyMap).map_err(py_err)
    }

    #[staticmethod]
    fn identity() -> Self {
        PyMap(LinearMap2::IDENTITY)
    }

    #[staticmethod]
    fn rotation(theta: f64) -> Self {
        PyMap(LinearMap2::rotation(theta))
    }

    #[staticmethod]
    fn diag(sx: f64, sy: f64) -> PyResult<Self> {
        LinearMap2::new(sx, 0.0, 0.0, sy).map(PyMap).map_err(py_err)
    }

    fn entries(&self) -> (f64, f64, f64, f64) {
        (self.0.a, self.0.b, self.0.c, self.0.d)
    }

    fn det(&self) -> f64 {
        self.0.det()
    }

    fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let v = self.0.apply(Vec2::new(x, y));
        (v.x, v.y)
    }

    fn compose(&self, other: &PyMap) -> Self {
        PyMap(self.0.compose(&other.0))
    }

    fn scale(&self, s: f64) -> Self {
        PyMap(self.0.scale(s))
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(PyMap).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Map({}, {}, {}, {})", self.0.a, self.0.b, self.0.c, self.0.d)
    }
}

/// Origin-centered ellipse.
#[pyclass(name = "Ellipse", module = "bmround", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyEllipse(Ellipse);

#[pymethods]
impl PyEllipse {
    #[new]
    fn new(semi_major: f64, semi_minor: f64, angle: f64) -> PyResult<Self> {
        Ellipse::new(semi_major, semi_minor, angle)
            .map(PyEllipse)
            .map_err(py_err)
    }

    #[getter]
    fn semi_major(&self) -> f64 {
        self.0.semi_major
    }

    #[getter]
    fn semi_minor(&self) -> f64 {
        self.0.semi_minor
    }

    #[getter]
    fn angle(&self) -> f64 {
        self.0.angle
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn __repr__(&self) -> String {
        format!(
            "Ellipse({}, {}, {})",
            self.0.semi_major, self.0.semi_minor, self.0.angle
        )
    }
}

/// Symmetric convex body, as a polygon or a sampled radial function.
#[pyclass(name = "Body", module = "bmround", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyBody(SymmetricConvexBody);

#[pymethods]
impl PyBody {
    #[staticmethod]
    fn polygon(vertices: Vec<(f64, f64)>) -> PyResult<Self> {
        SymmetricConvexBody::polygon(vertices.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
            .map(PyBody)
            .map_err(py_err)
    }

    /// Radial function samples on a uniform grid over `[0, pi)`.
    #[staticmethod]
    fn radial(samples: Vec<f64>) -> PyResult<Self> {
        SymmetricConvexBody::radial(samples).map(PyBody).map_err(py_err)
    }

    /// Unit ball of the `l^p` norm; `p = float("inf")` gives the square.
    #[staticmethod]
    fn lp(p: f64) -> PyResult<Self> {
        SymmetricConvexBody::lp_ball(p).map(PyBody).map_err(py_err)
    }

    #[staticmethod]
    fn square() -> Self {
        PyBody(SymmetricConvexBody::square())
    }

    #[staticmethod]
    fn disk() -> Self {
        PyBody(SymmetricConvexBody::disk())
    }

    #[staticmethod]
    #[pyo3(signature = (k, circumradius = 1.0, phase = 0.0))]
    fn regular(k: usize, circumradius: f64, phase: f64) -> PyResult<Self> {
        SymmetricConvexBody::regular_polygon(k, circumradius, phase)
            .map(PyBody)
            .map_err(py_err)
    }

    /// Body from its JSON spec.
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Self> {
        io::parse_body(spec).map(PyBody).map_err(py_err)
    }

    /// Seeded random symmetric polygon from `k` upper half-plane points.
    #[staticmethod]
    fn random(seed: u64, k: usize) -> PyResult<Self> {
        bmround_core::random::random_body(seed, k).map(PyBody).map_err(py_err)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.0.kind() {
            BodyKind::Polygon => "polygon",
            BodyKind::Radial => "radial",
        }
    }

    fn vertices(&self) -> Option<Vec<(f64, f64)>> {
        self.0.vertices().map(|v| v.iter().map(|p| (p.x, p.y)).collect())
    }

    fn gauge(&self, x: f64, y: f64) -> f64 {
        self.0.gauge(Vec2::new(x, y))
    }

    fn radial_point(&self, theta: f64) -> (f64, f64) {
        let p = self.0.radial_point(theta);
        (p.x, p.y)
    }

    fn inner_radius(&self) -> f64 {
        self.0.inner_radius()
    }

    fn outer_radius(&self) -> f64 {
        self.0.outer_radius()
    }

    fn area(&self) -> f64 {
        self.0.area()
    }

    fn apply_map(&self, t: &PyMap) -> PyResult<Self> {
        self.0.apply_map(&t.0).map(PyBody).map_err(py_err)
    }
}

/// Result of `minimize_ratio`.
#[pyclass(name = "RoundingResult", module = "bmround", frozen, skip_from_py_object)]
struct PyRounding(bm::RoundingResult);

#[pymethods]
impl PyRounding {
    #[getter]
    fn t_star(&self) -> PyMap {
        PyMap(self.0.t_star)
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho
    }

    #[getter]
    fn inner(&self) -> f64 {
        self.0.inner
    }

    #[getter]
    fn outer(&self) -> f64 {
        self.0.outer
    }

    #[getter]
    fn outer_contacts(&self) -> Vec<f64> {
        self.0.outer_contacts.clone()
    }

    #[getter]
    fn inner_contacts(&self) -> Vec<f64> {
        self.0.inner_contacts.clone()
    }

    #[getter]
    fn full_circle(&self) -> bool {
        self.0.full_circle
    }

    #[getter]
    fn certified(&self) -> bool {
        self.0.certified
    }

    fn __repr__(&self) -> String {
        format!("RoundingResult(rho={}, certified={})", self.0.rho, self.0.certified)
    }
}

/// `L(TA) / l(TA)`.
#[pyfunction]
fn ratio(body: &PyBody, t: &PyMap) -> PyResult<f64> {
    bm::ratio(&body.0, &t.0).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (body, grid_n = 200, restarts = 3, tol = 1e-9, seed = 0))]
fn minimize_ratio(
    py: Python<'_>,
    body: &PyBody,
    grid_n: usize,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> PyResult<PyRounding> {
    let opts = RoundingOptions {
        grid_n,
        restarts,
        tol,
        seed,
        ..Default::default()
    };
    let b = body.0.clone();
    py.detach(move || bm::minimize_ratio(&b, &opts))
        .map(PyRounding)
        .map_err(py_err)
}

#[pyfunction]
fn canonical_ellipse(result: &PyRounding) -> PyResult<PyEllipse> {
    bm::canonical_ellipse(&result.0).map(PyEllipse).map_err(py_err)
}

#[pyfunction]
fn canonical_deviation(t1: &PyMap, t2: &PyMap) -> PyResult<f64> {
    bm::canonical_deviation(&t1.0, &t2.0).map_err(py_err)
}

#[pyfunction]
fn same_canonical_ellipse(t1: &PyMap, t2: &PyMap, tol: f64) -> PyResult<bool> {
    bm::same_canonical_ellipse(&t1.0, &t2.0, tol).map_err(py_err)
}

#[pyfunction]
fn john_ellipse(body: &PyBody) -> PyResult<PyEllipse> {
    env::john_ellipse(&body.0).map(PyEllipse).map_err(py_err)
}

#[pyfunction]
fn area_upper_envelope(ell: f64) -> PyResult<f64> {
    env::area_upper_envelope(ell).map_err(py_err)
}

#[pyfunction]
fn area_lower_envelope(ell: f64) -> PyResult<f64> {
    env::area_lower_envelope(ell).map_err(py_err)
}

#[pyfunction]
fn envelope_derivatives(ell: f64) -> PyResult<(f64, f64)> {
    env::envelope_derivatives(ell).map_err(py_err)
}

/// Area-bound report as a dict.
#[pyfunction]
#[pyo3(signature = (body, result, tol = None))]
fn verify_area_bounds<'py>(
    py: Python<'py>,
    body: &PyBody,
    result: &PyRounding,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let tol = tol.unwrap_or_else(|| env::default_area_tol(&body.0));
    let r = env::verify_area_bounds(&body.0, &result.0, tol).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("ell", r.ell)?;
    d.set_item("area", r.area)?;
    d.set_item("lower_ok", r.lower_ok)?;
    d.set_item("upper_ok", r.upper_ok)?;
    d.set_item("envelope_ok", r.envelope_ok)?;
    d.set_item("K_O_factor", r.k_o)?;
    d.set_item("K_I_factor", r.k_i)?;
    Ok(d)
}

/// `(K_O, K_I)` for the image `TA`.
#[pyfunction]
fn dilatation_factors(body: &PyBody, t: &PyMap) -> PyResult<(f64, f64)> {
    env::dilatation_factors(&body.0, &t.0).map_err(py_err)
}

/// Beltrami coefficient of an ellipse, as a complex number.
#[pyfunction]
fn ellipse_to_beltrami(e: &PyEllipse) -> num_complex_like::Complex {
    let mu = ef::ellipse_to_beltrami(&e.0);
    num_complex_like::Complex(mu.re, mu.im)
}

/// Per-cell Beltrami coefficients of a norm field given as JSON.
#[pyfunction]
fn field_to_beltrami(py: Python<'_>, field_json: &str) -> PyResult<Vec<num_complex_like::Complex>> {
    let field = io::parse_field(field_json).map_err(py_err)?;
    let mu = py
        .detach(|| ef::field_to_beltrami(&field, &RoundingOptions::default()))
        .map_err(py_err)?;
    Ok(mu.into_iter().map(|m| num_complex_like::Complex(m.re, m.im)).collect())
}

#[pyfunction]
fn affine_uniformizer(body: &PyBody) -> PyResult<PyMap> {
    ef::affine_uniformizer(&body.0, &RoundingOptions::default())
        .map(PyMap)
        .map_err(py_err)
}

/// Field modulus, Euclidean image modulus and their ratio for a constant
/// field, all given as JSON specs.
#[pyfunction]
#[pyo3(signature = (field_json, family_json, n = 64))]
fn modulus_ratio<'py>(py: Python<'py>, field_json: &str, family_json: &str, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let field = io::parse_field(field_json).map_err(py_err)?;
    let fam_json = io::parse_family(family_json).map_err(py_err)?;
    let fam = fam_json.build().map_err(py_err)?;
    let domain = fam_json.domain(field.rect);
    let c = py
        .detach(|| {
            md::modulus_ratio(
                &field,
                &fam,
                domain,
                n,
                &RoundingOptions::default(),
                &ModulusOptions::default(),
            )
        })
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("n", n)?;
    d.set_item("mod_field", c.field.value)?;
    d.set_item("mod_euclid", c.euclidean.value)?;
    d.set_item("ratio", c.ratio)?;
    d.set_item("iterations", c.field.iterations)?;
    d.set_item("min_path_length", c.field.min_path_length)?;
    Ok(d)
}

mod num_complex_like {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// Converts to a Python `complex`.
    pub struct Complex(pub f64, pub f64);

    impl<'py> IntoPyObject<'py> for Complex {
        type Target = PyComplex;
        type Output = Bound<'py, PyComplex>;
        type Error = std::convert::Infallible;

        fn into_pyobject(self, py: Python<'py>) -> Result<Self::Output, Self::Error> {
            Ok(PyComplex::from_doubles(py, self.0, self.1))
        }
    }
}

#[pymodule]
#[pyo3(name = "bmround")]
fn bmround_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_class::<PyEllipse>()?;
    m.add_class::<PyBody>()?;
    m.add_class::<PyRounding>()?;
    m.add_function(wrap_pyfunction!(ratio, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_ellipse, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(same_canonical_ellipse, m)?)?;
    m.add_function(wrap_pyfunction!(john_ellipse, m)?)?;
    m.add_function(wrap_pyfunction!(area_upper_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(area_lower_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(envelope_derivatives, m)?)?;
    m.add_function(wrap_pyfunction!(verify_area_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(dilatation_factors, m)?)?;
    m.add_function(wrap_pyfunction!(ellipse_to_beltrami, m)?)?;
    m.add_function(wrap_pyfunction!(field_to_beltrami, m)?)?;
    m.add_function(wrap_pyfunction!(affine_uniformizer, m)?)?;
    m.add_function(wrap_pyfunction!(modulus_ratio, m)?)?;
    Ok(())
}
