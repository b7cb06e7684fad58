//! Python bindings for `bclique`.
//!
//! Results of protocol runs come back as plain dicts shaped like the CLI
//! reports. Field elements and moduli are Python ints.

use std::sync::Arc;

use bclique::graph::{self, GraphKind};
use bclique::protocols::{self, Epsilon, ProtocolError};
use bclique::sketch::{self, FieldElement, SketchError};
use num_bigint::{BigInt, BigUint};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde_json::{json, Value};

create_exception!(bclique, BcliqueError, PyException, "A protocol, sketch or graph error.");

fn err(kind: &str, message: impl std::fmt::Display) -> PyErr {
    BcliqueError::new_err(format!("{kind}: {message}"))
}

fn protocol_err(e: ProtocolError) -> PyErr {
    err(e.kind(), &e)
}

fn sketch_err(e: SketchError) -> PyErr {
    protocol_err(e.into())
}

fn graph_err(e: graph::GraphError) -> PyErr {
    protocol_err(e.into())
}

fn to_py(py: Python<'_>, value: &Value) -> PyResult<Py<PyAny>> {
    let loads = py.import("json")?.getattr("loads")?;
    Ok(loads.call1((value.to_string(),))?.unbind())
}

/// Sketch parameters for dimension `n` and sparsity `d`.
#[pyclass(name = "SketchParams", module = "bclique", frozen)]
struct PySketchParams {
    inner: Arc<sketch::SketchParams>,
}

#[pymethods]
impl PySketchParams {
    #[new]
    fn new(n: usize, d: usize) -> PyResult<Self> {
        let inner = sketch::SketchParams::shared(n, d).map_err(sketch_err)?;
        Ok(PySketchParams { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn p(&self) -> BigUint {
        self.inner.p().clone()
    }

    #[getter]
    fn xbar(&self) -> BigUint {
        self.inner.xbar().clone()
    }

    #[getter]
    fn modulus_bits(&self) -> u64 {
        self.inner.modulus_bits()
    }

    /// Sketch of an integer vector of length `n`.
    fn encode(&self, v: Vec<i64>) -> PyResult<BigUint> {
        Ok(self.inner.encode(&v).map_err(sketch_err)?.into_value())
    }

    fn encode_bool(&self, b: Vec<bool>) -> PyResult<BigUint> {
        Ok(self.inner.encode_bool(&b).map_err(sketch_err)?.into_value())
    }

    fn encode_support(&self, support: Vec<usize>) -> PyResult<BigUint> {
        Ok(self.inner.encode_support(&support).map_err(sketch_err)?.into_value())
    }

    /// Support of the unique sparse Boolean vector with sketch `y`.
    #[pyo3(signature = (y, weight=None))]
    fn decode(&self, y: BigInt, weight: Option<usize>) -> PyResult<Vec<usize>> {
        let y: FieldElement = self.inner.element(&y);
        self.inner.decode(&y, weight).map_err(sketch_err)
    }

    fn add(&self, a: BigInt, b: BigInt) -> BigUint {
        let (a, b) = (self.inner.element(&a), self.inner.element(&b));
        self.inner.add(&a, &b).into_value()
    }

    fn sub(&self, a: BigInt, b: BigInt) -> BigUint {
        let (a, b) = (self.inner.element(&a), self.inner.element(&b));
        self.inner.sub(&a, &b).into_value()
    }

    fn __repr__(&self) -> String {
        format!("SketchParams(n={}, d={}, p={}, xbar={})", self.n(), self.d(), self.inner.p(), self.inner.xbar())
    }
}

/// Undirected simple graph on nodes `0..n`.
#[pyclass(name = "Graph", module = "bclique", frozen, eq)]
#[derive(PartialEq)]
struct PyGraph {
    inner: graph::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges=Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let inner = graph::Graph::from_edges(n, edges).map_err(graph_err)?;
        Ok(PyGraph { inner })
    }

    /// Parses the edge-list text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: graph::load_graph(text).map_err(graph_err)?,
        })
    }

    /// Seeded generator; `kind` is one of path, cycle, complete, star, gnp,
    /// random_forest, random_degenerate.
    #[staticmethod]
    #[pyo3(signature = (kind, n, seed=0, param=None))]
    fn generate(kind: &str, n: usize, seed: u64, param: Option<f64>) -> PyResult<Self> {
        let params: Vec<f64> = param.into_iter().collect();
        let kind = GraphKind::parse(kind, &params).map_err(graph_err)?;
        Ok(PyGraph {
            inner: graph::gen_graph(kind, n, seed).map_err(graph_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().into_iter().map(|e| (e.0, e.1)).collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.check(v)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.check(v)?;
        Ok(self.inner.degree(v))
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn to_text(&self) -> String {
        graph::serialize_graph(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

impl PyGraph {
    fn check(&self, v: usize) -> PyResult<()> {
        if v >= self.inner.n() {
            return Err(graph_err(graph::GraphError::OutOfRange { node: v, n: self.inner.n() }));
        }
        Ok(())
    }
}

/// Greedy smallest-id peel of nodes with residual degree at most `d`.
/// Returns `(sequence, remaining)`.
#[pyfunction]
fn core_peel(g: &PyGraph, d: usize) -> (Vec<(usize, Vec<usize>)>, Vec<usize>) {
    let peel = graph::core_peel(&g.inner, d);
    (peel.sequence, peel.remaining)
}

/// Union-find oracle. Returns `(labels, forest)`.
#[pyfunction]
fn components(g: &PyGraph) -> (Vec<usize>, Vec<(usize, usize)>) {
    let c = graph::components_and_forest(&g.inner);
    (c.labels, c.forest.into_iter().map(|e| (e.0, e.1)).collect())
}

/// Removes the maximum edge of every cycle of length at most `2r`.
/// Returns `(tilde, removed_edges)`.
#[pyfunction]
fn tilde(g: &PyGraph, r: usize) -> (PyGraph, Vec<(usize, usize)>) {
    let t = graph::tilde_global(&g.inner, r);
    (PyGraph { inner: t.tilde }, t.removed.into_iter().map(|e| (e.0, e.1)).collect())
}

/// One-round d-pruning.
#[pyfunction]
fn prune_one_round(py: Python<'_>, g: &PyGraph, d: usize) -> PyResult<Py<PyAny>> {
    let run = protocols::prune_one_round(&g.inner, d).map_err(protocol_err)?;
    let doc = json!({
        "rounds_used": run.transcript.rounds_used(),
        "per_node_bits": run.transcript.per_node_bits(),
        "result": run.result.to_json(),
        "transcript": run.transcript.to_json(),
    });
    let out = to_py(py, &doc)?;
    out.bind(py).set_item("p", run.params.p().clone())?;
    Ok(out)
}

/// Multi-round spanning forest; `eps` is a decimal or a fraction "a/b".
#[pyfunction]
fn spanning_forest(py: Python<'_>, g: &PyGraph, eps: &str) -> PyResult<Py<PyAny>> {
    let eps: Epsilon = eps.parse().map_err(protocol_err)?;
    let run = protocols::spanning_forest_multiround(&g.inner, eps).map_err(protocol_err)?;
    let doc = json!({
        "rounds_used": run.transcript.rounds_used(),
        "per_node_bits": run.transcript.per_node_bits(),
        "neighbor_cap": run.neighbor_cap,
        "labels": run.components.labels,
        "forest": run.components.forest,
        "active_per_round": run.active_per_round,
        "transcript": run.transcript.to_json(),
    });
    to_py(py, &doc)
}

/// One-round connectivity from radius-`r` views.
#[pyfunction]
fn connectivity_one_round(py: Python<'_>, g: &PyGraph, r: usize) -> PyResult<Py<PyAny>> {
    let run = protocols::connectivity_one_round_r(&g.inner, r).map_err(protocol_err)?;
    let doc = json!({
        "rounds_used": run.transcript.rounds_used(),
        "per_node_bits": run.transcript.per_node_bits(),
        "s": run.s,
        "labels": run.components.labels,
        "forest": run.components.forest,
        "transcript": run.transcript.to_json(),
    });
    let out = to_py(py, &doc)?;
    let dict = out.bind(py).cast::<PyDict>()?;
    dict.set_item("tilde", PyGraph { inner: run.tilde })?;
    Ok(out)
}

/// Runs a CLI command line (without the program name).
/// Returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = bclique::cli::run_command(std::iter::once("bclique".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "bclique")]
fn bclique_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BcliqueError", m.py().get_type::<BcliqueError>())?;
    m.add_class::<PySketchParams>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(core_peel, m)?)?;
    m.add_function(wrap_pyfunction!(components, m)?)?;
    m.add_function(wrap_pyfunction!(tilde, m)?)?;
    m.add_function(wrap_pyfunction!(prune_one_round, m)?)?;
    m.add_function(wrap_pyfunction!(spanning_forest, m)?)?;
    m.add_function(wrap_pyfunction!(connectivity_one_round, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
