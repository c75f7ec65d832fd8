//! The semimodule of threshold tests.
//!
//! A threshold test maps an energy value to ⊤ or ⊥; its ⊤-set is an
//! upward-closed set of the lattice L with a rational boundary. These are
//! exactly the finitely additive ⊤-continuous maps L → 2, so they are closed
//! under join, under precomposition with energy functions, and under the
//! infinite products of ultimately periodic function sequences.

use std::fmt;

use thiserror::Error;

use crate::efun::{upward_boundary, PiecewiseEnergyFunction};
use crate::rational::{render_rat, EnergyValue, Rat};

use PiecewiseEnergyFunction as Pef;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdTest {
    /// ⊥ everywhere (including at ⊤).
    Bottom,
    /// ⊤ at x > threshold (strict) or x >= threshold (weak), and at ⊤ itself.
    Test { threshold: Rat, strict: bool },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VsemError {
    #[error("infinite products require a nonempty cycle")]
    EmptyCycle,
}

impl ThresholdTest {
    pub fn bottom() -> Self {
        ThresholdTest::Bottom
    }

    pub fn test(threshold: Rat, strict: bool) -> Self {
        ThresholdTest::Test { threshold, strict }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, ThresholdTest::Bottom)
    }

    /// Membership of `x` in the ⊤-set.
    pub fn apply(&self, x: &EnergyValue) -> bool {
        match self {
            ThresholdTest::Bottom => false,
            ThresholdTest::Test { threshold, strict } => match x {
                EnergyValue::Bottom => false,
                EnergyValue::Top => true,
                EnergyValue::Finite(r) => {
                    if *strict {
                        r > threshold
                    } else {
                        r >= threshold
                    }
                }
            },
        }
    }

    /// Pointwise supremum: the larger ⊤-set wins.
    pub fn join(&self, other: &Self) -> Self {
        match (self, other) {
            (ThresholdTest::Bottom, v) => v.clone(),
            (v, ThresholdTest::Bottom) => v.clone(),
            (
                ThresholdTest::Test { threshold: t1, strict: s1 },
                ThresholdTest::Test { threshold: t2, strict: _ },
            ) => {
                if t1 < t2 || (t1 == t2 && !s1) {
                    self.clone()
                } else {
                    other.clone()
                }
            }
        }
    }
}

/// The left action f·v = f;v: `apply(act(f, v), x) = apply(v, eval(f, x))`.
pub fn act(f: &Pef, v: &ThresholdTest) -> ThresholdTest {
    match (f, v) {
        (Pef::BottomFunction, _) | (_, ThresholdTest::Bottom) => ThresholdTest::Bottom,
        (f, ThresholdTest::Test { threshold, strict }) => {
            let roots = preimage_candidates(f, threshold);
            let found = upward_boundary(f, roots, &|_, fx| match fx {
                EnergyValue::Bottom => false,
                EnergyValue::Top => true,
                EnergyValue::Finite(r) => {
                    if *strict {
                        r > threshold
                    } else {
                        r >= threshold
                    }
                }
            });
            let (t, attained) =
                found.expect("a proper energy function eventually exceeds any threshold");
            ThresholdTest::Test { threshold: t, strict: !attained }
        }
    }
}

/// The ω of a single function: ⊤ at x exactly when the orbit x, xf, xf², …
/// never hits ⊥, which happens exactly when x is in the domain and f(x) >= x.
pub fn omega(f: &Pef) -> ThresholdTest {
    match f {
        Pef::BottomFunction => ThresholdTest::Bottom,
        f => {
            let roots = identity_crossings(f);
            match upward_boundary(f, roots, &|x, fx| {
                !fx.is_bottom() && *fx >= EnergyValue::Finite(x.clone())
            }) {
                None => ThresholdTest::Bottom,
                Some((t, attained)) => ThresholdTest::Test { threshold: t, strict: !attained },
            }
        }
    }
}

/// The infinite product of the ultimately periodic sequence stem·cycle^ω.
pub fn infinite_product_up(
    stem: &[Pef],
    cycle: &[Pef],
) -> Result<ThresholdTest, VsemError> {
    if cycle.is_empty() {
        return Err(VsemError::EmptyCycle);
    }
    let stem_fn = compose_all(stem);
    let cycle_fn = compose_all(cycle);
    Ok(act(&stem_fn, &omega(&cycle_fn)))
}

/// Composition of a list in diagrammatic order; empty list is the identity.
pub fn compose_all(fs: &[Pef]) -> Pef {
    fs.iter().fold(Pef::identity(), |acc, f| acc.compose(f))
}

fn preimage_candidates(f: &Pef, threshold: &Rat) -> Vec<Rat> {
    let Pef::Proper { pieces, .. } = f else { return Vec::new() };
    pieces
        .iter()
        .map(|p| &p.start + (threshold - &p.value) / &p.slope)
        .collect()
}

fn identity_crossings(f: &Pef) -> Vec<Rat> {
    let Pef::Proper { pieces, .. } = f else { return Vec::new() };
    pieces
        .iter()
        .filter(|p| p.slope != Rat::from_integer(1.into()))
        .map(|p| (&p.slope * &p.start - &p.value) / (&p.slope - Rat::from_integer(1.into())))
        .collect()
}

impl fmt::Display for ThresholdTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdTest::Bottom => write!(f, "never"),
            ThresholdTest::Test { threshold, strict: true } => {
                write!(f, "above({})", render_rat(threshold))
            }
            ThresholdTest::Test { threshold, strict: false } => {
                write!(f, "from({})", render_rat(threshold))
            }
        }
    }
}
