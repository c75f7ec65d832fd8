//! Python bindings: energy functions, threshold tests, and automata with
//! their reachability and Büchi decision procedures.
//!
//! Rationals cross the boundary as strings ("p" or "p/q") so values stay
//! exact; energy values come back as "bottom", "top", or a rational string.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use energy_automata::efun::Piece;
use energy_automata::rational::{parse_rat, EnergyValue, Rat};
use energy_automata::{
    act, buchi_lasso, omega, reach_bfs, render_witness, replay_witness,
    EnergyAutomaton as CoreAutomaton, PiecewiseEnergyFunction as Pef,
    ThresholdTest as CoreTest,
};

fn rat_arg(s: &str) -> PyResult<Rat> {
    parse_rat(s).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn value_str(v: &EnergyValue) -> String {
    v.to_string()
}

/// A piecewise-affine energy function over exact rationals.
#[pyclass(name = "EnergyFunction", skip_from_py_object)]
#[derive(Clone)]
struct PyEnergyFunction {
    inner: Pef,
}

#[pymethods]
impl PyEnergyFunction {
    /// The function that is undefined everywhere.
    #[staticmethod]
    fn bottom() -> Self {
        PyEnergyFunction { inner: Pef::bottom_function() }
    }

    /// The identity on [0, inf).
    #[staticmethod]
    fn identity() -> Self {
        PyEnergyFunction { inner: Pef::identity() }
    }

    /// Builds a function from (start, start_included, value, slope) tuples
    /// of rational strings, plus an optional (start, included) top region.
    #[staticmethod]
    #[pyo3(signature = (pieces, top_start=None))]
    fn from_pieces(
        pieces: Vec<(String, bool, String, String)>,
        top_start: Option<(String, bool)>,
    ) -> PyResult<Self> {
        let mut built = Vec::new();
        for (start, included, value, slope) in pieces {
            built.push(Piece::new(
                rat_arg(&start)?,
                included,
                rat_arg(&value)?,
                rat_arg(&slope)?,
            ));
        }
        let top = match top_start {
            Some((t, inc)) => Some((rat_arg(&t)?, inc)),
            None => None,
        };
        let inner = Pef::validate(built, top)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyEnergyFunction { inner })
    }

    /// Evaluates at a rational energy; returns "bottom", "top", or "p/q".
    fn eval(&self, x: &str) -> PyResult<String> {
        let x = rat_arg(x)?;
        Ok(value_str(&self.inner.eval_rat(&x)))
    }

    fn join(&self, other: &PyEnergyFunction) -> Self {
        PyEnergyFunction { inner: self.inner.join(&other.inner) }
    }

    fn compose(&self, other: &PyEnergyFunction) -> Self {
        PyEnergyFunction { inner: self.inner.compose(&other.inner) }
    }

    fn star(&self) -> Self {
        PyEnergyFunction { inner: self.inner.star() }
    }

    /// The omega of this function as a threshold test.
    fn omega(&self) -> PyThresholdTest {
        PyThresholdTest { inner: omega(&self.inner) }
    }

    fn render(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("EnergyFunction({})", self.inner)
    }

    fn __eq__(&self, other: &PyEnergyFunction) -> bool {
        self.inner.equals(&other.inner)
    }
}

/// An upward-closed membership test on energy values.
#[pyclass(name = "ThresholdTest", skip_from_py_object)]
#[derive(Clone)]
struct PyThresholdTest {
    inner: CoreTest,
}

#[pymethods]
impl PyThresholdTest {
    #[staticmethod]
    fn never() -> Self {
        PyThresholdTest { inner: CoreTest::bottom() }
    }

    /// Whether a rational energy passes the test.
    fn apply(&self, x: &str) -> PyResult<bool> {
        let x = rat_arg(x)?;
        Ok(self.inner.apply(&EnergyValue::Finite(x)))
    }

    /// The test after first running the given function.
    fn after(&self, f: &PyEnergyFunction) -> Self {
        PyThresholdTest { inner: act(&f.inner, &self.inner) }
    }

    fn render(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("ThresholdTest({})", self.inner)
    }

    fn __eq__(&self, other: &PyThresholdTest) -> bool {
        self.inner == other.inner
    }
}

/// An energy automaton loaded from the JSON document format.
#[pyclass(name = "Automaton")]
struct PyAutomaton {
    inner: CoreAutomaton,
}

#[pymethods]
impl PyAutomaton {
    #[staticmethod]
    fn load(document: &str) -> PyResult<Self> {
        let inner = CoreAutomaton::load(document)
            .map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyAutomaton { inner })
    }

    fn states(&self) -> Vec<String> {
        self.inner
            .user_order()
            .iter()
            .map(|&i| self.inner.name(i).to_string())
            .collect()
    }

    /// The finite behavior |A| as an energy function.
    fn finite_behavior(&self) -> PyEnergyFunction {
        PyEnergyFunction { inner: self.inner.finite_behavior() }
    }

    /// The Büchi behavior ||A|| as a threshold test.
    fn buchi_behavior(&self) -> PyThresholdTest {
        PyThresholdTest { inner: self.inner.buchi_behavior() }
    }

    /// Whether some accepting state is reachable from initial energy x0.
    fn reach(&self, x0: &str) -> PyResult<bool> {
        Ok(self.inner.decide_reach(&rat_arg(x0)?))
    }

    /// Whether some run visits accepting states infinitely often from x0.
    fn buchi(&self, x0: &str) -> PyResult<bool> {
        Ok(self.inner.decide_buchi(&rat_arg(x0)?))
    }

    /// A rendered finite run witnessing reachability, if one exists within
    /// the depth bound.
    #[pyo3(signature = (x0, depth=8))]
    fn reach_witness(&self, x0: &str, depth: usize) -> PyResult<Option<String>> {
        let x0 = rat_arg(x0)?;
        Ok(reach_bfs(&self.inner, &x0, depth).map(|w| {
            assert!(replay_witness(&self.inner, &x0, &w));
            render_witness(&self.inner, &x0, &w)
        }))
    }

    /// A rendered lasso witnessing Büchi acceptance, if one exists within
    /// the bounds.
    #[pyo3(signature = (x0, depth=6, cycle=4))]
    fn buchi_witness(&self, x0: &str, depth: usize, cycle: usize) -> PyResult<Option<String>> {
        let x0 = rat_arg(x0)?;
        Ok(buchi_lasso(&self.inner, &x0, depth, cycle).map(|w| {
            assert!(replay_witness(&self.inner, &x0, &w));
            render_witness(&self.inner, &x0, &w)
        }))
    }

    fn dot(&self) -> String {
        self.inner.to_dot()
    }

    fn __repr__(&self) -> String {
        format!("Automaton(states={:?})", self.states())
    }
}

#[pymodule]
fn energy_automata_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEnergyFunction>()?;
    m.add_class::<PyThresholdTest>()?;
    m.add_class::<PyAutomaton>()?;
    Ok(())
}
