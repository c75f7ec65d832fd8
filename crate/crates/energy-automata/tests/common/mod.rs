//! Shared fixtures and seeded generators for the integration suites.

#![allow(dead_code)]

use energy_automata::efun::Piece;
use energy_automata::rational::{render_rat, EnergyValue, Rat};
use energy_automata::{EnergyAutomaton, FunctionMatrix, PiecewiseEnergyFunction as Pef};
use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// The three-state example: s1 initial, s2 accepting, s2 has a doubling loop
/// 2x-2 on [1,inf), s1 feeds s2 via x+4 on (1,inf) join x+4 on [2,inf)
/// (written at the start point), and s2 <-> s3 via x-1 on (1,inf) and x+1 on
/// [0,inf).
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

pub fn three_state() -> EnergyAutomaton {
    EnergyAutomaton::load(&three_state_json()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational k/2 with k in [0, 2*max].
fn small_rat(rng: &mut ChaCha8Rng, max: i64) -> Rat {
    rat(rng.gen_range(0..=2 * max), 2)
}

/// A random valid piecewise energy function with 1..=max_pieces pieces and an
/// optional top region. Values stay small so exact arithmetic stays cheap.
pub fn random_pef(rng: &mut ChaCha8Rng, max_pieces: usize) -> Pef {
    if rng.gen_bool(0.1) {
        return Pef::bottom_function();
    }
    let n = rng.gen_range(1..=max_pieces);
    let mut pieces: Vec<Piece> = Vec::new();
    let mut start = small_rat(rng, 3);
    for i in 0..n {
        let included = rng.gen_bool(0.5);
        let slope = rat_int(rng.gen_range(1..=3));
        let value = if let Some(prev) = pieces.last() {
            prev.value_at(&start) + small_rat(rng, 2)
        } else {
            small_rat(rng, 4)
        };
        pieces.push(Piece::new(start.clone(), included, value, slope));
        if i + 1 < n {
            start += rat(rng.gen_range(1..=4), 2);
        }
    }
    let top_start = if rng.gen_bool(0.3) {
        let t = &start + rat(rng.gen_range(1..=4), 2);
        Some((t, rng.gen_bool(0.5)))
    } else {
        None
    };
    Pef::validate(pieces, top_start).unwrap()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, max_pieces: usize) -> FunctionMatrix {
    let entries: Vec<Pef> = (0..n * n).map(|_| random_pef(rng, max_pieces)).collect();
    FunctionMatrix::new(n, n, entries).unwrap()
}

/// A random automaton document with 1..=max_states states, at least one
/// initial state, and a possibly empty accepting set.
pub fn random_automaton(rng: &mut ChaCha8Rng, max_states: usize) -> EnergyAutomaton {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let initial: Vec<String> = {
        let mut v: Vec<String> = states
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        if v.is_empty() {
            v.push(states[rng.gen_range(0..n)].clone());
        }
        v
    };
    let accepting: Vec<String> = states
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    let mut transitions = Vec::new();
    for from in &states {
        for to in &states {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let f = random_pef(rng, 2);
            transitions.push(serde_json::json!({
                "from": from,
                "to": to,
                "function": pef_to_doc(&f),
            }));
        }
    }
    let doc = serde_json::json!({
        "states": states,
        "initial": initial,
        "accepting": accepting,
        "transitions": transitions,
    });
    EnergyAutomaton::load(&doc.to_string()).unwrap()
}

pub fn pef_to_doc(f: &Pef) -> serde_json::Value {
    match f {
        Pef::BottomFunction => serde_json::json!("bottom"),
        Pef::Proper { pieces, top_start } => {
            let pieces: Vec<serde_json::Value> = pieces
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "start": render_rat(&p.start),
                        "start_included": p.start_included,
                        "value": render_rat(&p.value),
                        "slope": render_rat(&p.slope),
                    })
                })
                .collect();
            let mut doc = serde_json::json!({ "pieces": pieces });
            if let Some((t, inc)) = top_start {
                doc["top_start"] = serde_json::json!({
                    "start": render_rat(t),
                    "included": inc,
                });
            }
            doc
        }
    }
}

/// Whether the orbit x, xf, xf^2, ... stays defined forever. Terminates
/// because a step that loses energy keeps losing at least as much on every
/// later step, so a non-surviving orbit falls out of the domain.
pub fn orbit_survives(f: &Pef, x0: &Rat) -> bool {
    let mut y = EnergyValue::Finite(x0.clone());
    loop {
        let next = f.eval(&y);
        match (&y, &next) {
            (_, EnergyValue::Bottom) => return false,
            (_, EnergyValue::Top) => return true,
            (EnergyValue::Finite(a), EnergyValue::Finite(b)) => {
                if b >= a {
                    return true;
                }
            }
            _ => unreachable!("orbit starts finite and stays finite until it ends"),
        }
        y = next;
    }
}

/// A grid of sample points covering the breakpoints of all given functions.
pub fn grid_for(fs: &[&Pef]) -> Vec<Rat> {
    energy_automata::efun::sample_grid(fs)
}

/// Pointwise equality of two functions over a shared sampling grid plus
/// requested extras, including the point at infinity.
pub fn agree_on_grid(f: &Pef, g: &Pef, extra: &[Rat]) -> bool {
    let mut grid = grid_for(&[f, g]);
    grid.extend_from_slice(extra);
    grid.push(Rat::zero());
    grid.push(Rat::one());
    grid.iter()
        .all(|x| f.eval_rat(x) == g.eval_rat(x))
        && f.eval(&EnergyValue::Top) == g.eval(&EnergyValue::Top)
}
