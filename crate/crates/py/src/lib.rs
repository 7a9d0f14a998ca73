//! Python bindings: the graph family, measurement construction, verification
//! checks, eigen-optimum search, Majorana constellations, precision
//! thresholds, and the finite-shot simulator.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qcw_core as core;

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_vector(amplitudes: Vec<Complex64>) -> core::ComplexVector {
    core::ComplexVector::new(amplitudes)
}

fn from_vector(v: &core::ComplexVector) -> Vec<Complex64> {
    v.components().to_vec()
}

/// Compatibility graph on vertices 1..=n with the two complete-part lists.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: core::Graph,
}

#[pymethods]
impl PyGraph {
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(u32, u32)> {
        self.inner.edges().collect()
    }

    #[getter]
    fn part_a(&self) -> Vec<u32> {
        self.inner.part_a().to_vec()
    }

    #[getter]
    fn part_b(&self) -> Vec<u32> {
        self.inner.part_b().to_vec()
    }

    fn adjacent(&self, i: u32, j: u32) -> bool {
        self.inner.adjacent(i, j)
    }

    fn independence_number(&self) -> PyResult<u32> {
        core::independence_number(&self.inner).map_err(err)
    }

    fn maximal_cliques(&self) -> Vec<Vec<u32>> {
        core::maximal_cliques(&self.inner)
            .into_iter()
            .map(|c| c.vertices().to_vec())
            .collect()
    }

    fn to_json(&self) -> String {
        core::formats::graph_to_json(&self.inner)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: core::formats::graph_from_json(text).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Measurement vectors and state in dimension d = n - 2.
#[pyclass(name = "MeasurementFamily", frozen)]
struct PyFamily {
    inner: core::MeasurementFamily,
}

#[pymethods]
impl PyFamily {
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn state(&self) -> Vec<Complex64> {
        from_vector(self.inner.state())
    }

    fn vector(&self, vertex: u32) -> PyResult<Vec<Complex64>> {
        Ok(from_vector(self.inner.vector(vertex).map_err(err)?))
    }

    fn vertices(&self) -> Vec<u32> {
        self.inner.vertices().collect()
    }

    fn to_json(&self) -> String {
        core::formats::family_to_json(&self.inner)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: core::formats::family_from_json(text).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!("MeasurementFamily(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

/// Outcome of verify(): every audited quantity plus the overall flag.
#[pyclass(name = "VerificationReport", frozen)]
struct PyReport {
    inner: core::VerificationReport,
}

#[pymethods]
impl PyReport {
    #[getter]
    fn exclusivity_ok(&self) -> bool {
        self.inner.exclusivity_ok
    }

    #[getter]
    fn worst_edge_overlap(&self) -> f64 {
        self.inner.worst_edge_overlap
    }

    #[getter]
    fn hardy_conditions_ok(&self) -> bool {
        self.inner.hardy_conditions_ok
    }

    #[getter]
    fn residual_a(&self) -> f64 {
        self.inner.residual_a
    }

    #[getter]
    fn residual_b(&self) -> f64 {
        self.inner.residual_b
    }

    #[getter]
    fn p11(&self) -> f64 {
        self.inner.p11
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta
    }

    #[getter]
    fn classical_alpha(&self) -> u32 {
        self.inner.classical_alpha
    }

    #[getter]
    fn classical_hardy_possible_with_x1(&self) -> Option<bool> {
        self.inner.classical_hardy_possible_with_x1
    }

    fn all_pass(&self) -> bool {
        self.inner.all_pass()
    }

    fn to_json(&self) -> String {
        core::formats::report_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "VerificationReport(n={}, p11={}, beta={}, all_pass={})",
            self.inner.n,
            self.inner.p11,
            self.inner.beta,
            self.inner.all_pass()
        )
    }
}

/// Majorana points of a state: merged (theta, phi, multiplicity) triples plus
/// a south-pole count for the degree deficiency.
#[pyclass(name = "Constellation", frozen)]
struct PyConstellation {
    inner: core::Constellation,
}

#[pymethods]
impl PyConstellation {
    #[getter]
    fn d(&self) -> usize {
        self.inner.dim()
    }

    fn points(&self) -> Vec<(f64, f64, u32)> {
        self.inner
            .points()
            .iter()
            .map(|p| (p.theta, p.phi, p.multiplicity))
            .collect()
    }

    #[getter]
    fn south_pole_count(&self) -> u32 {
        self.inner.south_pole_count()
    }

    fn flipped(&self) -> Self {
        Self { inner: self.inner.flipped() }
    }

    fn reconstruct(&self) -> Vec<Complex64> {
        from_vector(&core::reconstruct_state(&self.inner))
    }

    fn to_json(&self) -> String {
        core::formats::constellation_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Constellation(d={}, points={}, south={})",
            self.inner.dim(),
            self.inner.points().len(),
            self.inner.south_pole_count()
        )
    }
}

/// Finite-shot simulation summary.
#[pyclass(name = "SimulationResult", frozen)]
struct PySimulation {
    inner: core::SimulationResult,
    n: u32,
}

#[pymethods]
impl PySimulation {
    #[getter]
    fn shots(&self) -> u64 {
        self.inner.shots
    }

    #[getter]
    fn empirical_beta(&self) -> f64 {
        self.inner.empirical_beta
    }

    #[getter]
    fn empirical_exclusivity_violation(&self) -> f64 {
        self.inner.empirical_exclusivity_violation
    }

    #[getter]
    fn epsilon_estimate(&self) -> f64 {
        self.inner.epsilon_estimate
    }

    fn to_json(&self) -> String {
        core::formats::simulation_to_json(self.n, &self.inner)
    }
}

/// Builds the compatibility graph (pentagon at n = 5, the family above).
#[pyfunction]
fn build_family_graph(n: u32) -> PyResult<PyGraph> {
    Ok(PyGraph { inner: core::build_family_graph(n).map_err(err)? })
}

/// Builds the measurement family for n >= 6.
#[pyfunction]
fn build_measurements(n: u32) -> PyResult<PyFamily> {
    Ok(PyFamily { inner: core::build_measurements(n).map_err(err)? })
}

/// Simplex coefficient rows: m rows, pairwise dot products all `pairwise`.
#[pyfunction]
fn simplex_rows(m: usize, pairwise: f64) -> PyResult<Vec<Vec<f64>>> {
    Ok(core::simplex_rows(m, pairwise).map_err(err)?.rows().to_vec())
}

/// Reverses an amplitude list (the flip involution).
#[pyfunction]
fn flip(amplitudes: Vec<Complex64>) -> Vec<Complex64> {
    from_vector(&to_vector(amplitudes).reversed())
}

/// Least-squares coefficients and residual of `state` in the span of the
/// subset's vectors.
#[pyfunction]
fn decompose_state(
    state: Vec<Complex64>,
    family: &PyFamily,
    subset: Vec<u32>,
) -> PyResult<(Vec<Complex64>, f64)> {
    core::decompose_state(&to_vector(state), &family.inner, &subset).map_err(err)
}

/// Runs every check of the family against its graph at tolerance `tol`.
#[pyfunction]
#[pyo3(signature = (family, tol = 1e-9))]
fn verify(family: &PyFamily, tol: f64) -> PyResult<PyReport> {
    let graph = core::build_family_graph(family.inner.n()).map_err(err)?;
    Ok(PyReport { inner: core::verify_family(&graph, &family.inner, tol).map_err(err)? })
}

/// The KCBS sum over all vertices of |<v_i|psi>|^2.
#[pyfunction]
fn kcbs_value(family: &PyFamily) -> f64 {
    core::kcbs_value(&family.inner)
}

/// (alpha, hardy_possible_with_x1) from exhaustive assignment enumeration.
#[pyfunction]
fn classical_analysis(graph: &PyGraph) -> PyResult<(u32, Option<bool>)> {
    let analysis = core::classical_analysis(&graph.inner).map_err(err)?;
    Ok((analysis.alpha, analysis.hardy_possible_with_x1))
}

/// (lambda_max, argmax state, converged): the top eigenvalue of the projector
/// sum by randomized-restart power iteration.
#[pyfunction]
#[pyo3(signature = (family, restarts = 8, iters = 20_000, tol = 1e-12, seed = 0))]
fn max_violation_state(
    family: &PyFamily,
    restarts: u32,
    iters: u32,
    tol: f64,
    seed: u64,
) -> PyResult<(f64, Vec<Complex64>, bool)> {
    let outcome =
        core::max_violation_state(&family.inner, restarts, iters, tol, seed).map_err(err)?;
    Ok((outcome.lambda_max, from_vector(&outcome.state), outcome.converged))
}

/// Majorana constellation of a unit state.
#[pyfunction]
fn constellation(state: Vec<Complex64>) -> PyResult<PyConstellation> {
    Ok(PyConstellation { inner: core::constellation(&to_vector(state)).map_err(err)? })
}

/// Precision threshold: delta/n for odd n, delta/(n+3) for even n.
#[pyfunction]
fn onc_threshold(n: u32, delta: f64) -> PyResult<f64> {
    Ok(core::onc_threshold(n, delta).map_err(err)?.epsilon_bound)
}

/// Samples every context of the family `shots` times with per-context jitter
/// `eta`; deterministic in `seed`.
#[pyfunction]
#[pyo3(signature = (n, shots, eta = 0.0, seed = 0))]
fn simulate(n: u32, shots: u64, eta: f64, seed: u64) -> PyResult<PySimulation> {
    let family = core::build_measurements(n).map_err(err)?;
    let map = core::perturb_family(&family, eta, seed).map_err(err)?;
    let result = core::simulate_contexts(&map, family.state(), shots, seed).map_err(err)?;
    Ok(PySimulation { inner: result, n })
}

/// SVG figure with one disc per vector (state first).
#[pyfunction]
#[pyo3(signature = (family, columns = 4))]
fn render_family_svg(family: &PyFamily, columns: usize) -> PyResult<String> {
    let mut items = vec![(
        "psi".to_string(),
        core::constellation(family.inner.state()).map_err(err)?,
    )];
    for (&v, vec) in family.inner.vectors() {
        items.push((format!("v{v}"), core::constellation(vec).map_err(err)?));
    }
    Ok(core::svg::render_svg(&items, columns))
}

#[pymodule]
fn qcw_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyFamily>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyConstellation>()?;
    m.add_class::<PySimulation>()?;
    m.add_function(wrap_pyfunction!(build_family_graph, m)?)?;
    m.add_function(wrap_pyfunction!(build_measurements, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_rows, m)?)?;
    m.add_function(wrap_pyfunction!(flip, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_state, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(kcbs_value, m)?)?;
    m.add_function(wrap_pyfunction!(classical_analysis, m)?)?;
    m.add_function(wrap_pyfunction!(max_violation_state, m)?)?;
    m.add_function(wrap_pyfunction!(constellation, m)?)?;
    m.add_function(wrap_pyfunction!(onc_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(render_family_svg, m)?)?;
    Ok(())
}
