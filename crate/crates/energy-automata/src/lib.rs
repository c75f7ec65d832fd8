//! A solver for energy problems on energy automata.
//!
//! Transition labels are piecewise-affine energy functions over exact
//! rationals. Together with threshold tests they form a semiring-semimodule
//! pair with star and omega operations, so reachability and Büchi acceptance
//! reduce to closure computations on the automaton's transition matrix. A
//! brute-force simulation oracle cross-checks the algebraic answers at desk
//! scale.

pub mod automaton;
pub mod efun;
pub mod matrix;
pub mod oracle;
pub mod rational;
pub mod vsem;

pub use automaton::{EnergyAutomaton, LoadError};
pub use efun::{Piece, PiecewiseEnergyFunction, ValidationError};
pub use matrix::{row_act, FunctionMatrix, MatrixError, TestVector};
pub use oracle::{buchi_lasso, reach_bfs, render_witness, replay_witness, Witness};
pub use rational::{parse_rat, render_rat, EnergyValue, Rat};
pub use vsem::{act, compose_all, infinite_product_up, omega, ThresholdTest};
