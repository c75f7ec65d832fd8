//! Energy automata: loading from the document schema, finite and Büchi
//! behaviors, and the two decision procedures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::efun::{Piece, PiecewiseEnergyFunction, ValidationError};
use crate::matrix::{row_act, FunctionMatrix, TestVector};
use crate::rational::{parse_rat, EnergyValue, Rat, RatParseError};
use crate::vsem::ThresholdTest;

use PiecewiseEnergyFunction as Pef;

#[derive(Debug, Deserialize, Serialize)]
pub struct AutomatonDoc {
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub accepting: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub function: FunctionDoc,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum FunctionDoc {
    Keyword(String),
    Pieces {
        pieces: Vec<PieceDoc>,
        #[serde(skip_serializing_if = "Option::is_none")]
        top_start: Option<TopDoc>,
    },
}

#[derive(Debug, Deserialize, Serialize)]
pub struct PieceDoc {
    pub start: String,
    pub start_included: bool,
    pub value: String,
    pub slope: String,
}

#[derive(Debug, Deserialize, Serialize)]
pub struct TopDoc {
    pub start: String,
    pub included: bool,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("document parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{name}` referenced in {context}")]
    UnknownState { name: String, context: String },
    #[error("the automaton must have at least one state")]
    NoStates,
    #[error("the automaton must have at least one initial state")]
    NoInitial,
    #[error("transition {index} ({from} -> {to}): unknown function keyword `{keyword}`")]
    UnknownKeyword { index: usize, from: String, to: String, keyword: String },
    #[error("transition {index} ({from} -> {to}): {source}")]
    BadRational {
        index: usize,
        from: String,
        to: String,
        #[source]
        source: RatParseError,
    },
    #[error("transition {index} ({from} -> {to}): {source}")]
    Function {
        index: usize,
        from: String,
        to: String,
        #[source]
        source: ValidationError,
    },
}

/// One transition in original document order, over internal state indices.
#[derive(Debug, Clone)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub label: Pef,
}

/// An energy automaton. Internally, accepting states come first (indices
/// `0..k`); the original document ordering is retained for rendering.
#[derive(Debug, Clone)]
pub struct EnergyAutomaton {
    names: Vec<String>,
    internal_to_user: Vec<usize>,
    user_to_internal: Vec<usize>,
    k: usize,
    alpha: Vec<bool>,
    matrix: FunctionMatrix,
    transitions: Vec<Transition>,
}

impl EnergyAutomaton {
    pub fn load(doc: &str) -> Result<Self, LoadError> {
        let doc: AutomatonDoc = serde_json::from_str(doc)?;
        Self::from_doc(&doc)
    }

    pub fn from_doc(doc: &AutomatonDoc) -> Result<Self, LoadError> {
        if doc.states.is_empty() {
            return Err(LoadError::NoStates);
        }
        let user_index = |name: &str, context: &str| -> Result<usize, LoadError> {
            doc.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| LoadError::UnknownState {
                    name: name.to_string(),
                    context: context.to_string(),
                })
        };
        for (i, s) in doc.states.iter().enumerate() {
            if doc.states[..i].contains(s) {
                return Err(LoadError::DuplicateState(s.clone()));
            }
        }
        let mut accepting = vec![false; doc.states.len()];
        for name in &doc.accepting {
            accepting[user_index(name, "accepting")?] = true;
        }
        let mut initial = vec![false; doc.states.len()];
        for name in &doc.initial {
            initial[user_index(name, "initial")?] = true;
        }
        if !initial.iter().any(|&b| b) {
            return Err(LoadError::NoInitial);
        }

        // Stable accepting-first permutation of the user state order.
        let mut internal_to_user: Vec<usize> = Vec::with_capacity(doc.states.len());
        internal_to_user.extend((0..doc.states.len()).filter(|&i| accepting[i]));
        let k = internal_to_user.len();
        internal_to_user.extend((0..doc.states.len()).filter(|&i| !accepting[i]));
        let mut user_to_internal = vec![0usize; doc.states.len()];
        for (internal, &user) in internal_to_user.iter().enumerate() {
            user_to_internal[user] = internal;
        }

        let n = doc.states.len();
        let names: Vec<String> =
            internal_to_user.iter().map(|&u| doc.states[u].clone()).collect();
        let mut alpha = vec![false; n];
        for (u, &init) in initial.iter().enumerate() {
            if init {
                alpha[user_to_internal[u]] = true;
            }
        }

        let mut matrix = FunctionMatrix::zero(n, n);
        let mut transitions = Vec::with_capacity(doc.transitions.len());
        for (index, t) in doc.transitions.iter().enumerate() {
            let from = user_to_internal[user_index(&t.from, "transitions")?];
            let to = user_to_internal[user_index(&t.to, "transitions")?];
            let label = parse_function(&t.function).map_err(|e| match e {
                FunctionParseError::Keyword(keyword) => LoadError::UnknownKeyword {
                    index,
                    from: t.from.clone(),
                    to: t.to.clone(),
                    keyword,
                },
                FunctionParseError::Rational(source) => LoadError::BadRational {
                    index,
                    from: t.from.clone(),
                    to: t.to.clone(),
                    source,
                },
                FunctionParseError::Validation(source) => LoadError::Function {
                    index,
                    from: t.from.clone(),
                    to: t.to.clone(),
                    source,
                },
            })?;
            // Parallel edges collapse by join in the matrix; the original
            // edge list is kept for the simulation oracle and rendering.
            let joined = matrix.get(from, to).join(&label);
            *matrix.get_mut(from, to) = joined;
            transitions.push(Transition { from, to, label });
        }

        Ok(EnergyAutomaton {
            names,
            internal_to_user,
            user_to_internal,
            k,
            alpha,
            matrix,
            transitions,
        })
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    /// Number of accepting states; accepting states are internal indices 0..k.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_accepting(&self, internal: usize) -> bool {
        internal < self.k
    }

    pub fn is_initial(&self, internal: usize) -> bool {
        self.alpha[internal]
    }

    pub fn alpha(&self) -> &[bool] {
        &self.alpha
    }

    pub fn matrix(&self) -> &FunctionMatrix {
        &self.matrix
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn name(&self, internal: usize) -> &str {
        &self.names[internal]
    }

    pub fn user_to_internal(&self, user: usize) -> usize {
        self.user_to_internal[user]
    }

    pub fn internal_to_user(&self, internal: usize) -> usize {
        self.internal_to_user[internal]
    }

    /// |A| = α M* κ as a single energy function: the join of the closure
    /// entries from initial to accepting states.
    pub fn finite_behavior(&self) -> Pef {
        let star = self.matrix.star_elim().expect("square by construction");
        let mut acc = Pef::bottom_function();
        for i in 0..self.n() {
            if !self.alpha[i] {
                continue;
            }
            for j in 0..self.k {
                acc = acc.join(star.get(i, j));
            }
        }
        acc
    }

    /// ‖A‖ = α ((a ∨ b d* c)ᵚ ; d* c (a ∨ b d* c)ᵚ) with M split at k.
    /// Trivially `never` when there is no accepting state.
    pub fn buchi_behavior(&self) -> ThresholdTest {
        if self.k == 0 {
            return ThresholdTest::bottom();
        }
        let (a, b, c, d) = self.matrix.split(self.k);
        let d_star = d.star_block().expect("square block");
        let e = a
            .join(&b.mul(&d_star).unwrap().mul(&c).unwrap())
            .expect("k x k blocks");
        let top = e.omega_block().expect("square block");
        let bottom = d_star.mul(&c).unwrap().act(&top).unwrap();
        let mut stacked = top.0;
        stacked.extend(bottom.0);
        row_act(&self.alpha, &TestVector(stacked)).expect("alpha length")
    }

    /// Problem 1: is there a finite run from an initial state to an
    /// accepting state with initial energy x0?
    pub fn decide_reach(&self, x0: &Rat) -> bool {
        self.finite_behavior().eval_rat(x0) > EnergyValue::Bottom
    }

    /// Problem 2: is there an infinite run from an initial state with
    /// initial energy x0 which visits accepting states infinitely often?
    pub fn decide_buchi(&self, x0: &Rat) -> bool {
        self.buchi_behavior().apply(&EnergyValue::Finite(x0.clone()))
    }

    /// DOT rendering in document state order; `bottom` edges are omitted.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph energy_automaton {\n  rankdir=LR;\n");
        for (u, &internal) in self.user_order().iter().enumerate() {
            let shape = if self.is_accepting(internal) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  \"{}\" [shape={}];", self.names[internal], shape);
            if self.alpha[internal] {
                let _ = writeln!(out, "  __init_{} [shape=point, label=\"\"];", u);
                let _ = writeln!(out, "  __init_{} -> \"{}\";", u, self.names[internal]);
            }
        }
        for t in &self.transitions {
            if t.label.is_bottom() {
                continue;
            }
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.names[t.from], self.names[t.to], t.label
            );
        }
        out.push_str("}\n");
        out
    }

    /// Internal indices listed in document order.
    pub fn user_order(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.user_to_internal[u]).collect()
    }
}

enum FunctionParseError {
    Keyword(String),
    Rational(RatParseError),
    Validation(ValidationError),
}

fn parse_function(doc: &FunctionDoc) -> Result<Pef, FunctionParseError> {
    match doc {
        FunctionDoc::Keyword(word) if word == "bottom" => Ok(Pef::bottom_function()),
        FunctionDoc::Keyword(word) => Err(FunctionParseError::Keyword(word.clone())),
        FunctionDoc::Pieces { pieces, top_start } => {
            let rat = |s: &str| parse_rat(s).map_err(FunctionParseError::Rational);
            let mut ps: Vec<Piece> = Vec::with_capacity(pieces.len());
            for p in pieces {
                ps.push(Piece::new(
                    rat(&p.start)?,
                    p.start_included,
                    rat(&p.value)?,
                    rat(&p.slope)?,
                ));
            }
            let top = match top_start {
                Some(t) => Some((rat(&t.start)?, t.included)),
                None => None,
            };
            Pef::validate(ps, top).map_err(FunctionParseError::Validation)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    pub fn three_state_json() -> String {
        serde_json::json!({
            "states": ["s1", "s2", "s3"],
            "initial": ["s1"],
            "accepting": ["s2"],
            "transitions": [
                {"from": "s1", "to": "s2", "function": {"pieces": [
                    {"start": "2", "start_included": true, "value": "4", "slope": "1"}]}},
                {"from": "s1", "to": "s2", "function": {"pieces": [
                    {"start": "1", "start_included": false, "value": "4", "slope": "1"}]}},
                {"from": "s2", "to": "s2", "function": {"pieces": [
                    {"start": "1", "start_included": true, "value": "0", "slope": "2"}]}},
                {"from": "s2", "to": "s3", "function": {"pieces": [
                    {"start": "1", "start_included": false, "value": "0", "slope": "1"}]}},
                {"from": "s3", "to": "s2", "function": {"pieces": [
                    {"start": "0", "start_included": true, "value": "1", "slope": "1"}]}}
            ]
        })
        .to_string()
    }

    #[test]
    fn loads_with_accepting_first_permutation() {
        let a = EnergyAutomaton::load(&three_state_json()).unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(a.k(), 1);
        assert_eq!(a.name(0), "s2");
        assert!(a.is_initial(a.user_to_internal(0)));
        // duplicate s1→s2 edges joined to x+3 on (1,∞)
        let entry = a.matrix().get(a.user_to_internal(0), 0);
        assert_eq!(
            entry.eval_rat(&rat(3, 2)),
            EnergyValue::Finite(rat(9, 2))
        );
        assert_eq!(entry.eval_rat(&rat(1, 1)), EnergyValue::Bottom);
    }

    #[test]
    fn behaviors_on_three_state() {
        let a = EnergyAutomaton::load(&three_state_json()).unwrap();
        let fb = a.finite_behavior();
        assert_eq!(fb.to_string(), "top(start=1, included=false)");
        assert_eq!(a.buchi_behavior().to_string(), "above(1)");
    }

    #[test]
    fn decisions_on_three_state() {
        let a = EnergyAutomaton::load(&three_state_json()).unwrap();
        let cases = [
            ((0, 1), false),
            ((1, 1), false),
            ((9, 8), true),
            ((3, 2), true),
            ((2, 1), true),
            ((5, 1), true),
        ];
        for ((n, d), expect) in cases {
            assert_eq!(a.decide_reach(&rat(n, d)), expect, "reach at {n}/{d}");
            assert_eq!(a.decide_buchi(&rat(n, d)), expect, "buchi at {n}/{d}");
        }
    }

    #[test]
    fn degenerate_shapes() {
        // single accepting initial state, no transitions: |A| = identity
        let single = serde_json::json!({
            "states": ["s"], "initial": ["s"], "accepting": ["s"], "transitions": []
        })
        .to_string();
        let a = EnergyAutomaton::load(&single).unwrap();
        assert_eq!(a.finite_behavior(), Pef::identity());
        // no infinite paths over the zero matrix
        assert_eq!(a.buchi_behavior(), ThresholdTest::bottom());

        // no accepting state at all
        let k0 = serde_json::json!({
            "states": ["s"], "initial": ["s"], "accepting": [], "transitions": []
        })
        .to_string();
        let a = EnergyAutomaton::load(&k0).unwrap();
        assert_eq!(a.finite_behavior(), Pef::bottom_function());
        assert_eq!(a.buchi_behavior(), ThresholdTest::bottom());

        // decreasing self-loop: reachable but not Büchi-acceptable
        let dec = serde_json::json!({
            "states": ["a", "b"], "initial": ["a"], "accepting": ["b"],
            "transitions": [
                {"from": "a", "to": "b", "function": {"pieces": [
                    {"start": "1", "start_included": false, "value": "0", "slope": "1"}]}},
                {"from": "b", "to": "b", "function": {"pieces": [
                    {"start": "1", "start_included": false, "value": "0", "slope": "1"}]}}
            ]
        })
        .to_string();
        let a = EnergyAutomaton::load(&dec).unwrap();
        assert!(a.decide_reach(&rat(3, 1)));
        assert!(!a.decide_buchi(&rat(3, 1)));
    }

    #[test]
    fn load_errors() {
        let bad = serde_json::json!({
            "states": ["s"], "initial": ["s"], "accepting": [],
            "transitions": [{"from": "s", "to": "t", "function": "bottom"}]
        })
        .to_string();
        assert!(matches!(
            EnergyAutomaton::load(&bad),
            Err(LoadError::UnknownState { .. })
        ));
        let no_init = serde_json::json!({
            "states": ["s"], "initial": [], "accepting": [], "transitions": []
        })
        .to_string();
        assert!(matches!(EnergyAutomaton::load(&no_init), Err(LoadError::NoInitial)));
    }

    #[test]
    fn permutation_invariance() {
        let a = EnergyAutomaton::load(&three_state_json()).unwrap();
        let doc: AutomatonDoc = serde_json::from_str(&three_state_json()).unwrap();
        let reordered = AutomatonDoc {
            states: vec!["s3".into(), "s2".into(), "s1".into()],
            initial: doc.initial,
            accepting: doc.accepting,
            transitions: doc.transitions,
        };
        let b = EnergyAutomaton::from_doc(&reordered).unwrap();
        for x in [rat(0, 1), rat(1, 1), rat(9, 8), rat(5, 1)] {
            assert_eq!(a.decide_reach(&x), b.decide_reach(&x));
            assert_eq!(a.decide_buchi(&x), b.decide_buchi(&x));
        }
    }
}
