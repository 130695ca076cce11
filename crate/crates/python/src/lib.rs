//! Python bindings: graphs, vertex eigenvectors, coefficients, searches and
//! audits. Structured reports are returned as plain dicts.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

use sachs_core::compression;
use sachs_core::search::{self, SearchConfig, SearchMode, DEFAULT_EXHAUSTIVE_MAX_N};
use sachs_core::{partition, Error};

fn py_err(e: Error) -> PyErr {
    if e.is_scale() {
        PyOverflowError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Graph", module = "sachs", eq, frozen, skip_from_py_object)]
#[derive(Clone, PartialEq)]
pub struct PyGraph(sachs_core::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        sachs_core::Graph::from_edges(n, &edges)
            .map(PyGraph)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        sachs_core::Graph::parse_edge_list(text)
            .map(PyGraph)
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        sachs_core::Graph::parse_graph6(text)
            .map(PyGraph)
            .map_err(py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().collect()
    }

    fn to_edge_list(&self) -> String {
        self.0.to_edge_list()
    }

    fn to_graph6(&self) -> String {
        self.0.to_graph6()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn is_connected_bipartite(&self) -> bool {
        self.0.is_connected_bipartite()
    }

    fn a4(&self) -> i64 {
        sachs_core::a4_fast(&self.0)
    }

    /// Coefficients a_0..a_n of det(λI - A) as exact integers.
    fn charpoly<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let int = py.import("builtins")?.getattr("int")?;
        charpoly_strings(&self.0)
            .into_iter()
            .map(|s| int.call1((s,)))
            .collect()
    }

    fn sachs_coefficient(&self, i: usize) -> PyResult<i64> {
        sachs_core::sachs_coefficient(&self.0, i).map_err(py_err)
    }

    fn matchings(&self, k: usize) -> u64 {
        sachs_core::count_matchings(&self.0, k)
    }

    fn is_difference(&self) -> PyResult<bool> {
        sachs_core::is_difference(&self.0).map_err(py_err)
    }

    fn eigenvector(&self) -> PyResult<PyEigenvector> {
        sachs_core::eigenvector_of(&self.0)
            .map(PyEigenvector)
            .map_err(py_err)
    }

    fn compress(&self, u: usize, v: usize) -> PyResult<PyGraph> {
        compression::compress(&self.0, u, v)
            .map(PyGraph)
            .map_err(py_err)
    }

    #[pyo3(signature = (u, v, k = 4))]
    fn audit_compression<'py>(
        &self,
        py: Python<'py>,
        u: usize,
        v: usize,
        k: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let audit = compression::audit_vertex_compression(&self.0, u, v, k).map_err(py_err)?;
        to_py(py, &audit)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={:?})", self.0.n(), self.edges())
    }
}

fn charpoly_strings(g: &sachs_core::Graph) -> Vec<String> {
    sachs_core::charpoly_coefficients(g)
        .as_slice()
        .iter()
        .map(|c| c.to_string())
        .collect()
}

#[pyclass(
    name = "VertexEigenvector",
    module = "sachs",
    eq,
    frozen,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
pub struct PyEigenvector(sachs_core::VertexEigenvector);

#[pymethods]
impl PyEigenvector {
    #[new]
    fn new(x: Vec<usize>, y: Vec<usize>) -> PyResult<Self> {
        sachs_core::VertexEigenvector::new(x, y)
            .map(PyEigenvector)
            .map_err(py_err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(PyEigenvector).map_err(py_err)
    }

    #[getter]
    fn x(&self) -> Vec<usize> {
        self.0.x().to_vec()
    }

    #[getter]
    fn y(&self) -> Vec<usize> {
        self.0.y().to_vec()
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    #[getter]
    fn size(&self) -> usize {
        self.0.size()
    }

    #[getter]
    fn character(&self) -> usize {
        self.0.character()
    }

    fn canonical(&self) -> Self {
        PyEigenvector(self.0.canonical())
    }

    fn realize(&self) -> PyResult<PyGraph> {
        sachs_core::realize(&self.0).map(PyGraph).map_err(py_err)
    }

    fn young_rows(&self) -> Vec<usize> {
        sachs_core::young_matrix(&self.0).rows().to_vec()
    }

    fn characteristic_matrix(&self) -> Vec<Vec<u64>> {
        sachs_core::characteristic_matrix(&self.0)
            .entries()
            .to_vec()
    }

    fn a4_by_blocks(&self) -> i64 {
        sachs_core::a4_by_blocks(&self.0)
    }

    fn a4_by_char_matrix(&self) -> i64 {
        sachs_core::a4_by_char_matrix(&self.0)
    }

    fn a4_by_row_sums(&self) -> i64 {
        sachs_core::a4_by_row_sums(&sachs_core::young_matrix(&self.0))
    }

    fn complement(&self, i: usize) -> PyResult<Self> {
        sachs_core::difference_complement(&self.0, i)
            .map(PyEigenvector)
            .map_err(py_err)
    }

    fn structural(&self) -> (bool, bool) {
        let f = search::structural_predicates(&self.0);
        (f.t46, f.t47)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("VertexEigenvector('{}')", self.0)
    }
}

fn config(mode: &str, max_n: usize) -> PyResult<SearchConfig> {
    Ok(SearchConfig {
        mode: mode.parse::<SearchMode>().map_err(py_err)?,
        max_exhaustive_n: max_n,
        record_timing: false,
    })
}

#[pyfunction]
#[pyo3(signature = (n, m, max_n = DEFAULT_EXHAUSTIVE_MAX_N))]
fn enumerate_bipartite(py: Python<'_>, n: usize, m: usize, max_n: usize) -> PyResult<Vec<PyGraph>> {
    let graphs = py
        .detach(|| search::enumerate_bipartite(n, m, max_n))
        .map_err(py_err)?;
    Ok(graphs.into_iter().map(PyGraph).collect())
}

#[pyfunction]
#[pyo3(signature = (n, m, max_n = DEFAULT_EXHAUSTIVE_MAX_N))]
fn min_a4_bruteforce(
    py: Python<'_>,
    n: usize,
    m: usize,
    max_n: usize,
) -> PyResult<(Option<i64>, Vec<PyGraph>)> {
    let r = py
        .detach(|| search::min_a4_bruteforce(n, m, max_n))
        .map_err(py_err)?;
    Ok((r.min, r.witnesses.into_iter().map(PyGraph).collect()))
}

#[pyfunction]
fn min_a4_difference(n: usize, m: usize) -> (Option<i64>, Vec<PyEigenvector>) {
    let r = search::min_a4_difference(n, m);
    (r.min, r.witnesses.into_iter().map(PyEigenvector).collect())
}

#[pyfunction]
fn enumerate_eigenvectors(n: usize, m: usize) -> Vec<PyEigenvector> {
    search::enumerate_eigenvectors(n, m)
        .into_iter()
        .map(PyEigenvector)
        .collect()
}

#[pyfunction]
fn paper_closed_form<'py>(py: Python<'py>, n: usize, m: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &search::paper_closed_form(n, m))
}

#[pyfunction]
#[pyo3(signature = (n, m, mode = "all", max_n = DEFAULT_EXHAUSTIVE_MAX_N))]
fn search_cell<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    mode: &str,
    max_n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(mode, max_n)?;
    let report = py
        .detach(|| search::search_cell(n, m, &cfg))
        .map_err(py_err)?;
    to_py(py, &report)
}

#[pyfunction]
#[pyo3(signature = (n_min, n_max, mode = "all", max_n = DEFAULT_EXHAUSTIVE_MAX_N))]
fn verify_range<'py>(
    py: Python<'py>,
    n_min: usize,
    n_max: usize,
    mode: &str,
    max_n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(mode, max_n)?;
    let outcome = py
        .detach(|| search::verify_range(n_min, n_max, &cfg, None))
        .map_err(py_err)?;
    to_py(py, &outcome)
}

#[pyfunction]
fn solve_partition<'py>(py: Python<'py>, n: usize, m: usize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &partition::solve(n, m))
}

#[pyfunction]
fn partition_objective(rows: Vec<usize>) -> PyResult<i64> {
    let r = partition::RowSumVector::new(rows).map_err(py_err)?;
    Ok(partition::objective(&r))
}

#[pyfunction]
fn audit_corner_theorem<'py>(py: Python<'py>, n_max: usize) -> PyResult<Bound<'py, PyAny>> {
    let audit = py
        .detach(|| compression::audit_corner_theorem(n_max))
        .map_err(py_err)?;
    to_py(py, &audit)
}

#[pymodule]
fn sachs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyEigenvector>()?;
    m.add_function(wrap_pyfunction!(enumerate_bipartite, m)?)?;
    m.add_function(wrap_pyfunction!(min_a4_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(min_a4_difference, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_eigenvectors, m)?)?;
    m.add_function(wrap_pyfunction!(paper_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(search_cell, m)?)?;
    m.add_function(wrap_pyfunction!(verify_range, m)?)?;
    m.add_function(wrap_pyfunction!(solve_partition, m)?)?;
    m.add_function(wrap_pyfunction!(partition_objective, m)?)?;
    m.add_function(wrap_pyfunction!(audit_corner_theorem, m)?)?;
    Ok(())
}
