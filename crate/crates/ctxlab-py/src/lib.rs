//! Python bindings: a `Scenario` class wrapping the core library, with
//! state construction, assignment enumeration, classification, and
//! inequality evaluation.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ctxlab::catalog::{self, CatalogEntry};
use ctxlab::classify::{self, Bound as IneqBound, InequalitySpec};
use ctxlab::states::{self, GraphState};
use ctxlab::{assign, io, scenario};

/// Analysis refusals map to RuntimeError, input problems to ValueError.
fn to_py_err(e: ctxlab::Error) -> PyErr {
    match e.exit_code() {
        1 => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// An inequality argument: a builtin name or a label-to-weight mapping.
#[derive(FromPyObject)]
enum IneqArg {
    Name(String),
    Weights(BTreeMap<String, f64>),
}

/// An exclusivity scenario plus, for builtins, its named states and
/// inequalities.
#[pyclass(module = "ctxlab_py")]
struct Scenario {
    inner: scenario::Scenario,
    entry: Option<CatalogEntry>,
}

impl Scenario {
    fn graph_state(&self, probs: &[f64]) -> PyResult<GraphState> {
        if probs.len() != self.inner.n_atoms() {
            return Err(PyValueError::new_err(format!(
                "expected {} probabilities, got {}",
                self.inner.n_atoms(),
                probs.len()
            )));
        }
        states::validate_state(&self.inner, probs).map_err(to_py_err)
    }

    fn resolve_ineq(&self, arg: IneqArg) -> PyResult<InequalitySpec> {
        match arg {
            IneqArg::Name(name) => match &self.entry {
                Some(entry) => entry.inequality(&name).cloned().map_err(to_py_err),
                None => Err(PyValueError::new_err(
                    "scenario has no named inequalities; pass a weight mapping",
                )),
            },
            IneqArg::Weights(map) => {
                InequalitySpec::new("custom", map).map_err(to_py_err)
            }
        }
    }

    fn labels_of(&self, atoms: &[usize]) -> Vec<String> {
        atoms
            .iter()
            .map(|&v| self.inner.label(v).to_string())
            .collect()
    }
}

#[pymethods]
impl Scenario {
    /// Loads a builtin scenario by name; see `builtin_names()`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Scenario> {
        let entry = catalog::builtin(name).map_err(to_py_err)?;
        Ok(Scenario {
            inner: entry.scenario.clone(),
            entry: Some(entry),
        })
    }

    /// Parses a scenario from its JSON file format.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Scenario> {
        Ok(Scenario {
            inner: io::scenario_from_json(text).map_err(to_py_err)?,
            entry: None,
        })
    }

    /// Serializes the scenario to its JSON file format.
    fn to_json(&self) -> String {
        io::scenario_to_json(&self.inner)
    }

    fn name(&self) -> Option<String> {
        self.inner.name().map(str::to_string)
    }

    fn n_atoms(&self) -> usize {
        self.inner.n_atoms()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    /// Contexts as lists of atom indices.
    fn contexts(&self) -> Vec<Vec<usize>> {
        self.inner.contexts().to_vec()
    }

    /// Exclusivity edges as index pairs.
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.graph().edges()
    }

    /// Hilbert space dimension, or None for abstract scenarios.
    fn dimension(&self) -> Option<usize> {
        self.inner.realization().map(|r| r.dim)
    }

    /// True when every atom lies in at least one context.
    fn is_valid(&self) -> bool {
        self.inner.is_valid()
    }

    /// Names of the builtin states attached to this scenario.
    fn state_names(&self) -> Vec<String> {
        match &self.entry {
            Some(entry) => entry.states.iter().map(|(n, _)| n.clone()).collect(),
            None => Vec::new(),
        }
    }

    /// Names of the builtin inequalities attached to this scenario.
    fn inequality_names(&self) -> Vec<String> {
        match &self.entry {
            Some(entry) => entry
                .inequalities
                .iter()
                .map(|i| i.name().to_string())
                .collect(),
            None => Vec::new(),
        }
    }

    /// Probabilities of a named builtin state, aligned with `labels()`.
    fn state(&self, name: &str) -> PyResult<Vec<f64>> {
        match &self.entry {
            Some(entry) => Ok(entry
                .graph_state(name)
                .map_err(to_py_err)?
                .probs()
                .to_vec()),
            None => Err(PyValueError::new_err(
                "scenario has no named states; build one from probabilities",
            )),
        }
    }

    /// Validates a label-to-probability mapping; missing labels are zero.
    fn state_from_probs(&self, probs: BTreeMap<String, f64>) -> PyResult<Vec<f64>> {
        let mut dense = vec![0.0; self.inner.n_atoms()];
        for (label, value) in &probs {
            dense[self.inner.index_of(label).map_err(to_py_err)?] = *value;
        }
        Ok(states::validate_state(&self.inner, &dense)
            .map_err(to_py_err)?
            .probs()
            .to_vec())
    }

    /// State induced by a density matrix given as rows of [re, im] pairs.
    fn state_from_density(&self, rows: Vec<Vec<[f64; 2]>>) -> PyResult<Vec<f64>> {
        let rho = io::density_from_rows(&rows).map_err(to_py_err)?;
        Ok(states::induce(&self.inner, &rho)
            .map_err(to_py_err)?
            .probs()
            .to_vec())
    }

    /// All deterministic assignments as label lists, plus a truncation flag.
    #[pyo3(signature = (limit=None))]
    fn enumerate_01(&self, limit: Option<usize>) -> (Vec<Vec<String>>, bool) {
        let found = assign::enumerate_01(&self.inner, limit);
        let states = found
            .states
            .iter()
            .map(|z| self.labels_of(z.support()))
            .collect();
        (states, found.truncated)
    }

    /// True when no deterministic assignment exists at all.
    fn is_ks_contextual(&self) -> PyResult<bool> {
        let search = assign::ks_assignment_search(&self.inner, Some(1)).map_err(to_py_err)?;
        Ok(search.assignments.is_empty() && !search.truncated)
    }

    /// One deterministic assignment as a label list, or None.
    fn ks_assignment(&self) -> PyResult<Option<Vec<String>>> {
        let search = assign::ks_assignment_search(&self.inner, Some(1)).map_err(to_py_err)?;
        Ok(search
            .assignments
            .first()
            .map(|z| self.labels_of(z.support())))
    }

    /// Full contextuality classification of a state.
    fn classify<'py>(&self, py: Python<'py>, probs: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.graph_state(&probs)?;
        let r = classify::classify(&self.inner, &p).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("noncontextual", r.noncontextual)?;
        d.set_item("contextual", r.contextual)?;
        d.set_item("logically_contextual", r.logically_contextual)?;
        d.set_item("strongly_contextual", r.strongly_contextual)?;
        d.set_item("maximally_contextual", r.maximally_contextual)?;
        d.set_item("w_nc", r.w_nc)?;
        d.set_item("contextual_fraction", r.contextual_fraction)?;
        d.set_item(
            "logical_witness",
            r.logical_witness.map(|v| self.inner.label(v).to_string()),
        )?;
        d.set_item(
            "strong_counterexample",
            r.strong_counterexample
                .as_ref()
                .map(|z| self.labels_of(z.support())),
        )?;
        Ok(d)
    }

    /// Noncontextual weight, decomposition, residual, and dual prices.
    fn fraction<'py>(&self, py: Python<'py>, probs: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
        let p = self.graph_state(&probs)?;
        let f = classify::noncontextual_fraction(&self.inner, &p).map_err(to_py_err)?;
        let d = PyDict::new(py);
        d.set_item("w_nc", f.w_nc)?;
        d.set_item("contextual_fraction", f.contextual_fraction)?;
        let decomposition: Vec<(f64, Vec<String>)> = f
            .decomposition
            .iter()
            .map(|(z, w)| (*w, self.labels_of(z.support())))
            .collect();
        d.set_item("decomposition", decomposition)?;
        d.set_item("residual", f.residual.as_ref().map(|r| r.probs().to_vec()))?;
        let dual: BTreeMap<String, f64> = self
            .inner
            .labels()
            .iter()
            .zip(&f.dual_certificate)
            .filter(|(_, &y)| y.abs() > 1e-12)
            .map(|(l, &y)| (l.clone(), y))
            .collect();
        d.set_item("dual_atoms", dual)?;
        Ok(d)
    }

    /// Value of an inequality (builtin name or weight mapping) on a state.
    fn eval_inequality(&self, ineq: IneqArg, probs: Vec<f64>) -> PyResult<f64> {
        let spec = self.resolve_ineq(ineq)?;
        let p = self.graph_state(&probs)?;
        classify::eval_inequality(&self.inner, &spec, &p).map_err(to_py_err)
    }

    /// Maximum of an inequality over deterministic assignments, or None
    /// when no assignment exists.
    fn nc_bound(&self, ineq: IneqArg) -> PyResult<Option<f64>> {
        let spec = self.resolve_ineq(ineq)?;
        match classify::nc_bound(&self.inner, &spec).map_err(to_py_err)? {
            IneqBound::Value(v) => Ok(Some(v)),
            IneqBound::MinusInfinity => Ok(None),
        }
    }

    /// Maximum of an inequality over all states, or None when infeasible.
    fn algebraic_bound(&self, ineq: IneqArg) -> PyResult<Option<f64>> {
        let spec = self.resolve_ineq(ineq)?;
        match classify::algebraic_bound(&self.inner, &spec).map_err(to_py_err)? {
            IneqBound::Value(v) => Ok(Some(v)),
            IneqBound::MinusInfinity => Ok(None),
        }
    }

    /// Closes the realization under complement and coarsening; returns the
    /// saturated scenario.
    fn saturate(&self) -> PyResult<Scenario> {
        let real = self.inner.realization().ok_or_else(|| {
            PyValueError::new_err("saturation needs a projector realization")
        })?;
        let labels = self.inner.labels().to_vec();
        let sat = scenario::saturate(&real.projectors, Some(&labels), &Default::default())
            .map_err(to_py_err)?;
        Ok(Scenario {
            inner: sat.scenario,
            entry: None,
        })
    }

    /// True when the exclusivity graphs are isomorphic.
    fn is_isomorphic(&self, other: &Scenario) -> PyResult<bool> {
        scenario::is_isomorphic(self.inner.graph(), other.inner.graph()).map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario({}, {} atoms, {} contexts)",
            self.inner.name().unwrap_or("unnamed"),
            self.inner.n_atoms(),
            self.inner.contexts().len()
        )
    }
}

/// Names accepted by `Scenario.builtin`, not counting `cycle(n)`.
#[pyfunction]
fn builtin_names() -> Vec<String> {
    catalog::BUILTIN_NAMES.iter().map(|s| s.to_string()).collect()
}

/// Contextuality analysis on exclusivity graphs.
#[pymodule]
fn ctxlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}
