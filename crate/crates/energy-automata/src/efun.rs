//! The semiring of extended energy functions.
//!
//! An energy function is a partial map on nonnegative rationals defined on an
//! up-closed interval, where an increase of the input yields at least the same
//! increase of the output. Here they are represented exactly as finitely many
//! affine pieces with slope >= 1, an optional region where the value is ⊤,
//! and the everywhere-⊥ function as the semiring zero. All arithmetic is
//! exact; equality is decidable through a canonical form.

use std::fmt;

use num::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{render_rat, EnergyValue, Rat};

/// One affine piece. `value` is the value of the affine formula at `start`,
/// whether or not `start` itself is covered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Rat,
    pub start_included: bool,
    pub value: Rat,
    pub slope: Rat,
}

impl Piece {
    pub fn new(start: Rat, start_included: bool, value: Rat, slope: Rat) -> Self {
        Piece { start, start_included, value, slope }
    }

    fn admits(&self, x: &Rat) -> bool {
        *x > self.start || (*x == self.start && self.start_included)
    }

    pub fn value_at(&self, x: &Rat) -> Rat {
        &self.value + &self.slope * (x - &self.start)
    }
}

/// Lexicographic order on piece boundaries: at equal starts, an included
/// boundary comes first. Two pieces may share a start exactly when the first
/// covers only the start point itself (a jump at that point).
fn key_lt(a: (&Rat, bool), b: (&Rat, bool)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 && !b.1)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error("piece {0}: slope must be at least 1")]
    SlopeTooSmall(usize),
    #[error("piece {0}: downward jump across the previous piece boundary")]
    NegativeJump(usize),
    #[error("piece {0}: piece starts must be strictly increasing")]
    UnsortedPieces(usize),
    #[error("piece {0}: negative start or value")]
    NegativeValue(usize),
    #[error("top region start must be nonnegative")]
    NegativeTopStart,
}

/// An extended energy function in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PiecewiseEnergyFunction {
    /// The semiring zero: ⊥ everywhere.
    BottomFunction,
    /// Sorted affine pieces, optionally followed by a region of value ⊤.
    /// `pieces` may be empty only when `top_start` is present (a function
    /// that is ⊥ below the top region and ⊤ inside it).
    Proper {
        pieces: Vec<Piece>,
        top_start: Option<(Rat, bool)>,
    },
}

use PiecewiseEnergyFunction as Pef;

impl PiecewiseEnergyFunction {
    /// The semiring zero.
    pub fn bottom_function() -> Self {
        Pef::BottomFunction
    }

    /// The semiring unit: the identity on [0, ∞).
    pub fn identity() -> Self {
        Pef::Proper {
            pieces: vec![Piece::new(Rat::zero(), true, Rat::zero(), Rat::one())],
            top_start: None,
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Pef::BottomFunction)
    }

    /// Checks a raw piece list against the energy-function conditions and
    /// returns the canonicalized function.
    pub fn validate(
        pieces: Vec<Piece>,
        top_start: Option<(Rat, bool)>,
    ) -> Result<Self, ValidationError> {
        for (i, p) in pieces.iter().enumerate() {
            if p.slope < Rat::one() {
                return Err(ValidationError::SlopeTooSmall(i));
            }
            if p.start.is_negative() || p.value.is_negative() {
                return Err(ValidationError::NegativeValue(i));
            }
        }
        for i in 1..pieces.len() {
            let prev = &pieces[i - 1];
            let cur = &pieces[i];
            if !key_lt(
                (&prev.start, prev.start_included),
                (&cur.start, cur.start_included),
            ) {
                return Err(ValidationError::UnsortedPieces(i));
            }
            if cur.value < prev.value_at(&cur.start) {
                return Err(ValidationError::NegativeJump(i));
            }
        }
        if let Some((t, _)) = &top_start {
            if t.is_negative() {
                return Err(ValidationError::NegativeTopStart);
            }
        }
        if pieces.is_empty() && top_start.is_none() {
            return Ok(Pef::BottomFunction);
        }
        Ok(Pef::Proper { pieces, top_start }.canonicalize())
    }

    pub fn eval(&self, x: &EnergyValue) -> EnergyValue {
        match self {
            Pef::BottomFunction => EnergyValue::Bottom,
            Pef::Proper { .. } => match x {
                EnergyValue::Bottom => EnergyValue::Bottom,
                EnergyValue::Top => EnergyValue::Top,
                EnergyValue::Finite(r) => self.eval_rat(r),
            },
        }
    }

    /// Evaluation at a finite point.
    pub fn eval_rat(&self, x: &Rat) -> EnergyValue {
        match self {
            Pef::BottomFunction => EnergyValue::Bottom,
            Pef::Proper { pieces, top_start } => {
                if let Some((t, incl)) = top_start {
                    if x > t || (x == t && *incl) {
                        return EnergyValue::Top;
                    }
                }
                match pieces.iter().rev().find(|p| p.admits(x)) {
                    Some(p) => EnergyValue::Finite(p.value_at(x)),
                    None => EnergyValue::Bottom,
                }
            }
        }
    }

    /// Pointwise maximum. The result's domain is the union of the domains.
    pub fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (Pef::BottomFunction, g) => g.clone(),
            (f, Pef::BottomFunction) => f.clone(),
            (
                f @ Pef::Proper { pieces: pf, top_start: tf },
                g @ Pef::Proper { pieces: pg, top_start: tg },
            ) => {
                let mut candidates: Vec<Rat> = Vec::new();
                for p in pf.iter().chain(pg.iter()) {
                    candidates.push(p.start.clone());
                }
                for t in [tf, tg].into_iter().flatten() {
                    candidates.push(t.0.clone());
                }
                // Crossings of affine pieces are the only further breakpoints.
                for a in pf {
                    for b in pg {
                        if a.slope != b.slope {
                            let ca = &a.value - &a.slope * &a.start;
                            let cb = &b.value - &b.slope * &b.start;
                            candidates.push((ca - cb) / (&b.slope - &a.slope));
                        }
                    }
                }
                rebuild(candidates, &|x| f.eval_rat(x).max(g.eval_rat(x)))
            }
        }
    }

    /// Composition in diagrammatic order: `self` is applied first.
    pub fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (Pef::BottomFunction, _) | (_, Pef::BottomFunction) => Pef::BottomFunction,
            (f @ Pef::Proper { pieces: pf, top_start: tf }, g @ Pef::Proper { pieces: pg, top_start: tg }) => {
                let mut candidates: Vec<Rat> = Vec::new();
                for p in pf {
                    candidates.push(p.start.clone());
                }
                if let Some((t, _)) = tf {
                    candidates.push(t.clone());
                }
                // Preimages under each piece of `f` of the breakpoints of `g`.
                let mut g_bounds: Vec<Rat> = pg.iter().map(|p| p.start.clone()).collect();
                if let Some((t, _)) = tg {
                    g_bounds.push(t.clone());
                }
                for p in pf {
                    for b in &g_bounds {
                        candidates.push(&p.start + (b - &p.value) / &p.slope);
                    }
                }
                rebuild(candidates, &|x| g.eval(&f.eval_rat(x)))
            }
        }
    }

    /// Kleene star: the identity below the first point where the function
    /// gains energy, ⊤ from there on.
    pub fn star(&self) -> Self {
        match self {
            Pef::BottomFunction => Pef::identity(),
            f => {
                let roots = fixed_point_candidates(f);
                match upward_boundary(f, roots, &|x, fx| {
                    *fx > EnergyValue::Finite(x.clone())
                }) {
                    None => Pef::identity(),
                    Some((t, at_point)) => {
                        let mut pieces = Vec::new();
                        if !(at_point && t.is_zero()) {
                            pieces.push(Piece::new(Rat::zero(), true, Rat::zero(), Rat::one()));
                        }
                        Pef::Proper { pieces, top_start: Some((t, at_point)) }
                    }
                }
            }
        }
    }

    /// Recomputes the canonical form. Idempotent; constructors already
    /// return canonical values.
    pub fn canonicalize(&self) -> Self {
        match self {
            Pef::BottomFunction => Pef::BottomFunction,
            Pef::Proper { pieces, top_start } => {
                let mut candidates: Vec<Rat> =
                    pieces.iter().map(|p| p.start.clone()).collect();
                if let Some((t, _)) = top_start {
                    candidates.push(t.clone());
                }
                rebuild(candidates, &|x| self.eval_rat(x))
            }
        }
    }

    /// Structural equality of canonical forms; coincides with pointwise
    /// equality on all of L.
    pub fn equals(&self, other: &Self) -> bool {
        self == other
    }

    /// n-fold composition with itself; `pow(0)` is the identity.
    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Pef::identity();
        for _ in 0..n {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn piece_starts(&self) -> Vec<Rat> {
        match self {
            Pef::BottomFunction => Vec::new(),
            Pef::Proper { pieces, top_start } => {
                let mut v: Vec<Rat> = pieces.iter().map(|p| p.start.clone()).collect();
                if let Some((t, _)) = top_start {
                    v.push(t.clone());
                }
                v
            }
        }
    }
}

/// Candidate fixed points: per-piece solutions of f(x) = x.
fn fixed_point_candidates(f: &Pef) -> Vec<Rat> {
    let Pef::Proper { pieces, .. } = f else { return Vec::new() };
    pieces
        .iter()
        .filter(|p| p.slope != Rat::one())
        .map(|p| (&p.slope * &p.start - &p.value) / (&p.slope - Rat::one()))
        .collect()
}

/// Finds the boundary of the upward-closed set `{x >= 0 : pred(x, f(x))}`.
///
/// `extra` must contain every crossing point of the predicate inside a piece;
/// all other boundaries are piece or top starts. Returns the infimum together
/// with whether the set contains it, or `None` for the empty set.
pub(crate) fn upward_boundary(
    f: &Pef,
    extra: Vec<Rat>,
    pred: &dyn Fn(&Rat, &EnergyValue) -> bool,
) -> Option<(Rat, bool)> {
    let mut candidates = f.piece_starts();
    candidates.extend(extra);
    candidates.push(Rat::zero());
    candidates.retain(|c| !c.is_negative());
    candidates.sort();
    candidates.dedup();
    let holds = |x: &Rat| pred(x, &f.eval_rat(x));
    for (i, c) in candidates.iter().enumerate() {
        if holds(c) {
            return Some((c.clone(), true));
        }
        let probe = match candidates.get(i + 1) {
            Some(next) => c + (next - c) / Rat::from_integer(2.into()),
            None => c + Rat::one(),
        };
        if holds(&probe) {
            return Some((c.clone(), false));
        }
    }
    None
}

enum Segment {
    Bottom,
    Top,
    Affine { right_limit: Rat, slope: Rat },
}

/// Reconstructs the canonical piece list of a function from pointwise
/// evaluation. `candidates` must contain every breakpoint of the function
/// (piece boundaries, domain lower bound, top region start); between
/// consecutive candidates the function must be constantly ⊥, constantly ⊤,
/// or affine.
fn rebuild(mut candidates: Vec<Rat>, oracle: &dyn Fn(&Rat) -> EnergyValue) -> Pef {
    candidates.push(Rat::zero());
    candidates.retain(|c| !c.is_negative());
    candidates.sort();
    candidates.dedup();

    let segment_after = |i: usize| -> Segment {
        let lo = &candidates[i];
        let (m1, m2) = match candidates.get(i + 1) {
            Some(hi) => {
                let third = (hi - lo) / Rat::from_integer(3.into());
                (lo + &third, lo + &third * Rat::from_integer(2.into()))
            }
            None => (lo + Rat::one(), lo + Rat::from_integer(2.into())),
        };
        match (oracle(&m1), oracle(&m2)) {
            (EnergyValue::Bottom, EnergyValue::Bottom) => Segment::Bottom,
            (EnergyValue::Top, EnergyValue::Top) => Segment::Top,
            (EnergyValue::Finite(w1), EnergyValue::Finite(w2)) => {
                let slope = (&w2 - &w1) / (&m2 - &m1);
                let right_limit = &w1 - &slope * (&m1 - lo);
                Segment::Affine { right_limit, slope }
            }
            _ => panic!("rebuild: candidate set misses a breakpoint"),
        }
    };

    let mut pieces: Vec<Piece> = Vec::new();
    let mut top_start: Option<(Rat, bool)> = None;

    for i in 0..candidates.len() {
        let c = candidates[i].clone();
        let v = oracle(&c);
        match v {
            EnergyValue::Top => {
                top_start = Some((c, true));
                break;
            }
            EnergyValue::Bottom => {
                assert!(pieces.is_empty(), "rebuild: domain is not up-closed");
                match segment_after(i) {
                    Segment::Bottom => {}
                    Segment::Affine { right_limit, slope } => {
                        pieces.push(Piece::new(c, false, right_limit, slope));
                    }
                    Segment::Top => {
                        top_start = Some((c, false));
                        break;
                    }
                }
            }
            EnergyValue::Finite(val) => {
                let left = pieces.last().map(|p| (p.value_at(&c), p.slope.clone()));
                match segment_after(i) {
                    Segment::Bottom => panic!("rebuild: domain is not up-closed"),
                    Segment::Top => {
                        match &left {
                            Some((lv, _)) if *lv == val => {}
                            _ => pieces.push(Piece::new(c.clone(), true, val, Rat::one())),
                        }
                        top_start = Some((c, false));
                        break;
                    }
                    Segment::Affine { right_limit, slope } => match left {
                        Some((lv, lslope)) if lv == val => {
                            if !(right_limit == val && slope == lslope) {
                                pieces.push(Piece::new(c, false, right_limit, slope));
                            }
                        }
                        _ => {
                            if val == right_limit {
                                pieces.push(Piece::new(c, true, val, slope));
                            } else {
                                debug_assert!(val < right_limit);
                                pieces.push(Piece::new(c.clone(), true, val, Rat::one()));
                                pieces.push(Piece::new(c, false, right_limit, slope));
                            }
                        }
                    },
                }
            }
        }
    }

    if pieces.is_empty() && top_start.is_none() {
        Pef::BottomFunction
    } else {
        Pef::Proper { pieces, top_start }
    }
}

/// The sampling grid that pins down piecewise-affine functions: 0, every
/// breakpoint of the given functions, midpoints between consecutive
/// breakpoints, and every breakpoint shifted by ±1.
pub fn sample_grid(fs: &[&Pef]) -> Vec<Rat> {
    let mut breakpoints: Vec<Rat> = Vec::new();
    for f in fs {
        breakpoints.extend(f.piece_starts());
    }
    breakpoints.sort();
    breakpoints.dedup();
    let mut grid = vec![Rat::zero()];
    for w in breakpoints.windows(2) {
        grid.push((&w[0] + &w[1]) / Rat::from_integer(2.into()));
    }
    for b in &breakpoints {
        grid.push(b + Rat::one());
        grid.push(b - Rat::one());
        grid.push(b.clone());
    }
    grid.retain(|x| !x.is_negative());
    grid.sort();
    grid.dedup();
    grid
}

impl fmt::Display for PiecewiseEnergyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pef::BottomFunction => write!(f, "bottom"),
            Pef::Proper { pieces, top_start } => {
                let mut parts: Vec<String> = pieces
                    .iter()
                    .map(|p| {
                        format!(
                            "piece(start={}, included={}, value={}, slope={})",
                            render_rat(&p.start),
                            p.start_included,
                            render_rat(&p.value),
                            render_rat(&p.slope)
                        )
                    })
                    .collect();
                if let Some((t, incl)) = top_start {
                    parts.push(format!("top(start={}, included={})", render_rat(t), incl));
                }
                write!(f, "{}", parts.join("; "))
            }
        }
    }
}
