//! Python bindings: an `Automaton` class wrapping the core library, plus
//! module-level helpers for the size-bound recurrences and the block
//! schedule arithmetic. Structured values (derivations, run graphs) cross
//! the boundary as the same JSON documents the CLI reads and writes.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use subzero::automaton::{StateId, SubzeroAutomaton};
use subzero::bounds::{BoundError, BoundParams};
use subzero::calculus::Profile;
use subzero::engine::{decide_from, normalize, saturate, Verdict};
use subzero::examples;
use subzero::format;
use subzero::multiset::Multiset;
use subzero::oracle;
use subzero::realizer::RunGraph;
use subzero::runcheck::{self, AllCondition};

fn value_err(message: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(message.to_string())
}

/// A subzero tree automaton.
#[pyclass]
struct Automaton {
    inner: SubzeroAutomaton,
    start: Option<StateId>,
}

impl Automaton {
    fn state(&self, name: &str) -> PyResult<StateId> {
        self.inner
            .state_by_name(name)
            .ok_or_else(|| value_err(format!("unknown state `{name}`")))
    }

    fn ports(&self, names: Vec<String>) -> PyResult<Multiset> {
        let mut ports = Multiset::empty(self.inner.num_states());
        for name in names {
            ports.add(self.state(&name)?, 1);
        }
        Ok(ports)
    }

    fn graph(&self, run_json: &str) -> PyResult<RunGraph> {
        let g = format::run_graph_from_json(&self.inner, run_json).map_err(value_err)?;
        g.check_structure().map_err(value_err)?;
        Ok(g)
    }
}

#[pymethods]
impl Automaton {
    /// Parse the textual automaton format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let doc = format::parse_automaton(text).map_err(value_err)?;
        Ok(Automaton {
            inner: doc.automaton,
            start: doc.start,
        })
    }

    /// The two-state automaton accepting trees whose all-b branches have
    /// measure zero.
    #[staticmethod]
    fn example12() -> Self {
        let inner = examples::make_example12();
        let start = inner.state_by_name("q");
        Automaton { inner, start }
    }

    /// The three-state automaton with a nonempty language but no regular
    /// member.
    #[staticmethod]
    fn l3() -> Self {
        Automaton {
            inner: examples::make_l3(),
            start: None,
        }
    }

    /// One-state parity automaton accepting everything.
    #[staticmethod]
    fn parity_demo() -> Self {
        let inner = examples::make_parity(&["q"], &["a"], &["q"], &[("q", "a", "q", "q")])
            .expect("static automaton");
        let start = inner.state_by_name("q");
        Automaton { inner, start }
    }

    /// Canonical textual rendering.
    fn to_text(&self) -> String {
        format::serialize_automaton(&format::AutomatonDocument {
            automaton: self.inner.clone(),
            start: self.start,
        })
    }

    fn states(&self) -> Vec<String> {
        self.inner.state_names().to_vec()
    }

    fn letters(&self) -> Vec<String> {
        self.inner.letter_names().to_vec()
    }

    /// Structural violations; empty means the automaton is well formed.
    fn validate(&self) -> Vec<String> {
        self.inner
            .validate()
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect()
    }

    /// Decide regular emptiness: "NONEMPTY" or "EMPTY". Without a state,
    /// the stored start state is used if present, otherwise every state
    /// is tried.
    #[pyo3(signature = (state=None))]
    fn decide(&self, state: Option<&str>) -> PyResult<String> {
        Ok(if self.decide_witness(state)?.is_some() {
            "NONEMPTY".to_string()
        } else {
            "EMPTY".to_string()
        })
    }

    /// The witness derivation (JSON) behind a NONEMPTY verdict, or None.
    #[pyo3(signature = (state=None))]
    fn decide_witness(&self, state: Option<&str>) -> PyResult<Option<String>> {
        let states: Vec<StateId> = match state {
            Some(name) => vec![self.state(name)?],
            None => match self.start {
                Some(q) => vec![q],
                None => self.inner.states().collect(),
            },
        };
        let s = saturate(&self.inner).map_err(value_err)?;
        for q in states {
            if let Verdict::NonEmpty(d) = decide_from(&s, q).map_err(value_err)? {
                return Ok(Some(format::derivation_to_json(&self.inner, &d)));
            }
        }
        Ok(None)
    }

    /// Whether the profile `root -><=bound {ports}` is derivable.
    #[pyo3(signature = (root, bound, ports=Vec::new()))]
    fn derivable(&self, root: &str, bound: &str, ports: Vec<String>) -> PyResult<bool> {
        let target = Profile::new(self.state(root)?, self.state(bound)?, self.ports(ports)?);
        subzero::engine::derivable(&self.inner, &target).map_err(value_err)
    }

    /// Display strings of every derived normalized profile.
    fn derived_profiles(&self) -> PyResult<Vec<String>> {
        let s = saturate(&self.inner).map_err(value_err)?;
        Ok(s.derived().map(|np| np.display(&self.inner)).collect())
    }

    /// Violations found in a derivation document; empty means valid.
    fn validate_derivation(&self, derivation_json: &str) -> PyResult<Vec<String>> {
        let d = format::derivation_from_json(&self.inner, derivation_json).map_err(value_err)?;
        Ok(subzero::calculus::validate_derivation(&self.inner, &d)
            .violations
            .iter()
            .map(|v| v.to_string())
            .collect())
    }

    /// Compile a derivation document into a run graph document.
    fn realize(&self, derivation_json: &str) -> PyResult<String> {
        let d = format::derivation_from_json(&self.inner, derivation_json).map_err(value_err)?;
        let g = subzero::realizer::realize(&self.inner, &d).map_err(value_err)?;
        Ok(format::run_graph_to_json(&self.inner, &g))
    }

    /// Full acceptance report for a run graph document.
    fn check_run<'py>(&self, py: Python<'py>, run_json: &str) -> PyResult<Bound<'py, PyDict>> {
        let g = self.graph(run_json)?;
        let report = runcheck::check_partial_run(&self.inner, &g).map_err(value_err)?;
        let dict = PyDict::new(py);
        dict.set_item("transitions_ok", report.transitions_ok)?;
        dict.set_item("all_condition_ok", report.all_condition.is_ok())?;
        let cycle = match &report.all_condition {
            AllCondition::Ok => None,
            AllCondition::Counterexample(cycle) => {
                Some(cycle.iter().map(|id| id.index()).collect::<Vec<_>>())
            }
        };
        dict.set_item("counterexample_cycle", cycle)?;
        dict.set_item(
            "zero_measure",
            format!("{}/{}", report.zero_measure.numer(), report.zero_measure.denom()),
        )?;
        dict.set_item("zero_condition", report.zero_condition)?;
        dict.set_item("accepting", runcheck::is_accepting_run(&self.inner, &g))?;
        Ok(dict)
    }

    /// Exact bad-branch measure of a run graph, as a fraction string.
    fn zero_measure(&self, run_json: &str) -> PyResult<String> {
        let g = self.graph(run_json)?;
        let m = runcheck::zero_measure_exact(&self.inner, &g);
        Ok(format!("{}/{}", m.numer(), m.denom()))
    }

    /// Monte Carlo estimate of the bad-branch measure.
    #[pyo3(signature = (run_json, samples=100_000, horizon=200, seed=0))]
    fn mc_zero_measure(
        &self,
        run_json: &str,
        samples: u64,
        horizon: u64,
        seed: u64,
    ) -> PyResult<f64> {
        let g = self.graph(run_json)?;
        Ok(oracle::mc_zero_measure(&self.inner, &g, samples, horizon, seed))
    }

    /// DOT rendering of a run graph document.
    fn run_graph_dot(&self, run_json: &str) -> PyResult<String> {
        let g = self.graph(run_json)?;
        Ok(format::run_graph_to_dot(&self.inner, &g))
    }

    /// Exhaustive search for a derivation of one profile, as JSON, or
    /// None when nothing exists within the caps.
    #[pyo3(signature = (root, bound, ports, size_cap, mult_cap))]
    fn enumerate_derivation(
        &self,
        root: &str,
        bound: &str,
        ports: Vec<String>,
        size_cap: u64,
        mult_cap: u64,
    ) -> PyResult<Option<String>> {
        let target = Profile::new(self.state(root)?, self.state(bound)?, self.ports(ports)?);
        let caps = oracle::EnumerationCaps::new(size_cap.max(1), mult_cap.max(1), 1);
        let found = oracle::enumerate_derivations(&self.inner, &target, &caps).map_err(value_err)?;
        Ok(found.map(|d| format::derivation_to_json(&self.inner, &d)))
    }

    /// Display strings of all finite-run profiles up to a depth.
    fn finite_run_profiles(&self, root: &str, depth: u64) -> PyResult<Vec<String>> {
        let root = self.state(root)?;
        let profiles =
            oracle::enumerate_finite_runs(&self.inner, root, depth).map_err(value_err)?;
        Ok(profiles.iter().map(|p| p.display(&self.inner)).collect())
    }

    /// Normalized conclusion of a derivation document, as a display
    /// string.
    fn witness_profile(&self, derivation_json: &str) -> PyResult<String> {
        let d = format::derivation_from_json(&self.inner, derivation_json).map_err(value_err)?;
        Ok(normalize(d.conclusion()).display(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!(
            "Automaton(states={:?}, letters={:?}, transitions={})",
            self.inner.state_names(),
            self.inner.letter_names(),
            self.inner.transitions().len()
        )
    }
}

fn bound_params(size_q: u64, c1: u64, c2: u64) -> BoundParams {
    let mut params = BoundParams::new(size_q);
    params.c1 = c1;
    params.c2 = c2;
    params
}

fn bound_result<T: std::fmt::Display>(result: Result<T, BoundError>) -> PyResult<String> {
    match result {
        Ok(value) => Ok(value.to_string()),
        Err(e @ BoundError::Overflow(_)) => Err(PyOverflowError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

/// Derivation-size bound `f(q, n)` as a decimal string.
#[pyfunction]
#[pyo3(signature = (q, n, size_q, c1=8, c2=8))]
fn bound_f(q: u64, n: u64, size_q: u64, c1: u64, c2: u64) -> PyResult<String> {
    bound_result(subzero::bounds::bound_f(&bound_params(size_q, c1, c2), q, n))
}

/// Helper recurrence `h` at level `q`, iterated `k` times.
#[pyfunction]
#[pyo3(signature = (q, n, k, size_q, c1=8, c2=8))]
fn bound_h(q: u64, n: u64, k: u64, size_q: u64, c1: u64, c2: u64) -> PyResult<String> {
    bound_result(subzero::bounds::bound_h(&bound_params(size_q, c1, c2), q, n, k))
}

/// Helper recurrence `g` at level `q`, iterated `k` times.
#[pyfunction]
#[pyo3(signature = (q, n, k, size_q, c1=8, c2=8))]
fn bound_g(q: u64, n: u64, k: u64, size_q: u64, c1: u64, c2: u64) -> PyResult<String> {
    bound_result(subzero::bounds::bound_g(&bound_params(size_q, c1, c2), q, n, k))
}

/// The minimal block schedule `f(0), .., f(k)`.
#[pyfunction]
fn l3_schedule(blocks: usize) -> PyResult<Vec<u64>> {
    if blocks == 0 {
        return Err(value_err("blocks must be at least 1"));
    }
    Ok(examples::l3_block_schedule(blocks).values().to_vec())
}

/// Exact partial sum of per-block probabilities for the minimal schedule,
/// as a fraction string.
#[pyfunction]
fn l3_measure_sum(blocks: usize) -> PyResult<String> {
    if blocks == 0 {
        return Err(value_err("blocks must be at least 1"));
    }
    let (sum, _) = examples::l3_measure_bound(&examples::l3_block_schedule(blocks));
    Ok(format!("{}/{}", sum.numer(), sum.denom()))
}

/// One level of the block-labeled witness prefix: `True` entries carry the
/// letter `a`, left to right.
#[pyfunction]
fn l3_prefix_level(blocks: usize, depth: u64) -> PyResult<Vec<bool>> {
    if blocks == 0 {
        return Err(value_err("blocks must be at least 1"));
    }
    let prefix = examples::l3_witness_prefix(examples::l3_block_schedule(blocks));
    if depth > prefix.depth() {
        return Err(value_err(format!(
            "depth {depth} beyond the prefix (max {})",
            prefix.depth()
        )));
    }
    Ok(prefix.level(depth))
}

#[pymodule]
fn subzero_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Automaton>()?;
    m.add_function(wrap_pyfunction!(bound_f, m)?)?;
    m.add_function(wrap_pyfunction!(bound_h, m)?)?;
    m.add_function(wrap_pyfunction!(bound_g, m)?)?;
    m.add_function(wrap_pyfunction!(l3_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(l3_measure_sum, m)?)?;
    m.add_function(wrap_pyfunction!(l3_prefix_level, m)?)?;
    Ok(())
}
