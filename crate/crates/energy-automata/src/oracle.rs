//! Brute-force simulation oracle over the graph of global states.
//!
//! The oracle enumerates concrete runs with exact energies and produces
//! replayable witnesses. It is one-sided: a witness certifies the property,
//! absence of a witness within the bounds proves nothing.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::automaton::EnergyAutomaton;
use crate::rational::{EnergyValue, Rat};

/// One fired transition: target state, index into the automaton's transition
/// list, and the exact energy after firing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub state: usize,
    pub transition: usize,
    pub energy: EnergyValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    FinitePath {
        start: usize,
        steps: Vec<Step>,
    },
    Lasso {
        start: usize,
        stem: Vec<Step>,
        cycle: Vec<Step>,
        cycle_entry_energy: EnergyValue,
    },
}

#[derive(Clone)]
struct Node {
    state: usize,
    energy: EnergyValue,
    parent: Option<usize>,
    via: Option<usize>,
}

fn path_to(arena: &[Node], mut idx: usize) -> (usize, Vec<Step>) {
    let mut steps = Vec::new();
    loop {
        let node = &arena[idx];
        match (node.parent, node.via) {
            (Some(p), Some(t)) => {
                steps.push(Step {
                    state: node.state,
                    transition: t,
                    energy: node.energy.clone(),
                });
                idx = p;
            }
            _ => {
                steps.reverse();
                return (node.state, steps);
            }
        }
    }
}

/// Explores the global-state graph breadth-first from every initial state,
/// pruning energies dominated at the same automaton state, and returns the
/// first path into an accepting state using at most `max_len` transitions.
pub fn reach_bfs(a: &EnergyAutomaton, x0: &Rat, max_len: usize) -> Option<Witness> {
    let mut arena: Vec<Node> = Vec::new();
    let mut best: HashMap<usize, EnergyValue> = HashMap::new();
    let mut frontier: Vec<usize> = Vec::new();
    for s in 0..a.n() {
        if a.is_initial(s) {
            if a.is_accepting(s) {
                return Some(Witness::FinitePath { start: s, steps: vec![] });
            }
            arena.push(Node {
                state: s,
                energy: EnergyValue::Finite(x0.clone()),
                parent: None,
                via: None,
            });
            best.insert(s, EnergyValue::Finite(x0.clone()));
            frontier.push(arena.len() - 1);
        }
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (state, energy) = (arena[idx].state, arena[idx].energy.clone());
            for (ti, t) in a.transitions().iter().enumerate() {
                if t.from != state {
                    continue;
                }
                let y = t.label.eval(&energy);
                if y.is_bottom() {
                    continue;
                }
                if best.get(&t.to).is_some_and(|b| *b >= y) {
                    continue;
                }
                arena.push(Node { state: t.to, energy: y.clone(), parent: Some(idx), via: Some(ti) });
                let new_idx = arena.len() - 1;
                if a.is_accepting(t.to) {
                    let (start, steps) = path_to(&arena, new_idx);
                    return Some(Witness::FinitePath { start, steps });
                }
                best.insert(t.to, y);
                next.push(new_idx);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    None
}

/// Looks for a lasso certificate: a stem of at most `max_stem` transitions to
/// some state with energy y, plus a cycle of at most `max_cycle` transitions
/// through an accepting state whose composed function g satisfies
/// eval(g, y) >= y. Such a cycle can be pumped forever.
pub fn buchi_lasso(
    a: &EnergyAutomaton,
    x0: &Rat,
    max_stem: usize,
    max_cycle: usize,
) -> Option<Witness> {
    let mut arena: Vec<Node> = Vec::new();
    let mut best: HashMap<usize, EnergyValue> = HashMap::new();
    let mut reached: Vec<usize> = Vec::new();
    let mut frontier: Vec<usize> = Vec::new();
    for s in 0..a.n() {
        if a.is_initial(s) {
            arena.push(Node {
                state: s,
                energy: EnergyValue::Finite(x0.clone()),
                parent: None,
                via: None,
            });
            best.insert(s, EnergyValue::Finite(x0.clone()));
            reached.push(arena.len() - 1);
            frontier.push(arena.len() - 1);
        }
    }
    for _ in 0..max_stem {
        let mut next = Vec::new();
        for &idx in &frontier {
            let (state, energy) = (arena[idx].state, arena[idx].energy.clone());
            for (ti, t) in a.transitions().iter().enumerate() {
                if t.from != state {
                    continue;
                }
                let y = t.label.eval(&energy);
                if y.is_bottom() {
                    continue;
                }
                if best.get(&t.to).is_some_and(|b| *b >= y) {
                    continue;
                }
                best.insert(t.to, y.clone());
                arena.push(Node { state: t.to, energy: y, parent: Some(idx), via: Some(ti) });
                reached.push(arena.len() - 1);
                next.push(arena.len() - 1);
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    for &idx in &reached {
        let anchor = arena[idx].state;
        let entry = arena[idx].energy.clone();
        let mut cycle: Vec<usize> = Vec::new();
        if let Some(found) = search_cycle(
            a,
            anchor,
            anchor,
            a.is_accepting(anchor),
            &entry,
            max_cycle,
            &mut cycle,
        ) {
            let (start, stem) = path_to(&arena, idx);
            return Some(Witness::Lasso {
                start,
                stem,
                cycle: found,
                cycle_entry_energy: entry,
            });
        }
    }
    None
}

/// Depth-first enumeration of cycles back to `anchor`, in transition-list
/// order. Accepts the first cycle that visits an accepting state and whose
/// composed effect does not lose energy at `entry`.
fn search_cycle(
    a: &EnergyAutomaton,
    anchor: usize,
    current: usize,
    seen_accepting: bool,
    entry: &EnergyValue,
    budget: usize,
    path: &mut Vec<usize>,
) -> Option<Vec<Step>> {
    if budget == 0 {
        return None;
    }
    for (ti, t) in a.transitions().iter().enumerate() {
        if t.from != current {
            continue;
        }
        path.push(ti);
        let accepting = seen_accepting || a.is_accepting(t.to);
        if t.to == anchor && accepting {
            if let Some(steps) = replay_cycle(a, entry, path) {
                path.pop();
                return Some(steps);
            }
        }
        if let Some(found) =
            search_cycle(a, anchor, t.to, accepting, entry, budget - 1, path)
        {
            path.pop();
            return Some(found);
        }
        path.pop();
    }
    None
}

/// Replays a candidate cycle from the entry energy; succeeds only if every
/// step stays defined and the final energy is at least the entry energy.
fn replay_cycle(a: &EnergyAutomaton, entry: &EnergyValue, path: &[usize]) -> Option<Vec<Step>> {
    let mut energy = entry.clone();
    let mut steps = Vec::with_capacity(path.len());
    for &ti in path {
        let t = &a.transitions()[ti];
        energy = t.label.eval(&energy);
        if energy.is_bottom() {
            return None;
        }
        steps.push(Step { state: t.to, transition: ti, energy: energy.clone() });
    }
    if energy >= *entry {
        Some(steps)
    } else {
        None
    }
}

/// Re-validates a witness by independent replay through `eval`.
pub fn replay_witness(a: &EnergyAutomaton, x0: &Rat, w: &Witness) -> bool {
    let check_path = |start: usize, from_energy: &EnergyValue, steps: &[Step]| -> Option<(usize, EnergyValue)> {
        let mut state = start;
        let mut energy = from_energy.clone();
        for step in steps {
            let t = a.transitions().get(step.transition)?;
            if t.from != state || t.to != step.state {
                return None;
            }
            energy = t.label.eval(&energy);
            if energy.is_bottom() || energy != step.energy {
                return None;
            }
            state = step.state;
        }
        Some((state, energy))
    };
    let x0 = EnergyValue::Finite(x0.clone());
    match w {
        Witness::FinitePath { start, steps } => {
            if !a.is_initial(*start) {
                return false;
            }
            match check_path(*start, &x0, steps) {
                Some((end, _)) => a.is_accepting(end),
                None => false,
            }
        }
        Witness::Lasso { start, stem, cycle, cycle_entry_energy } => {
            if !a.is_initial(*start) || cycle.is_empty() {
                return false;
            }
            let Some((anchor, energy)) = check_path(*start, &x0, stem) else {
                return false;
            };
            if energy != *cycle_entry_energy {
                return false;
            }
            let Some((back, end_energy)) = check_path(anchor, &energy, cycle) else {
                return false;
            };
            back == anchor
                && end_energy >= *cycle_entry_energy
                && cycle.iter().any(|s| a.is_accepting(s.state))
        }
    }
}

/// Text rendering: one `state --label--> state @ energy` line per step, the
/// cycle section prefixed with `cycle:`.
pub fn render_witness(a: &EnergyAutomaton, x0: &Rat, w: &Witness) -> String {
    let mut out = String::new();
    let line = |from: usize, step: &Step, out: &mut String| {
        let t = &a.transitions()[step.transition];
        let _ = writeln!(
            out,
            "{} --{}--> {} @ {}",
            a.name(from),
            t.label,
            a.name(step.state),
            step.energy
        );
    };
    match w {
        Witness::FinitePath { start, steps } => {
            if steps.is_empty() {
                let _ = writeln!(out, "{} @ {} (already accepting)", a.name(*start), x0);
            }
            let mut from = *start;
            for step in steps {
                line(from, step, &mut out);
                from = step.state;
            }
        }
        Witness::Lasso { start, stem, cycle, cycle_entry_energy } => {
            let mut from = *start;
            for step in stem {
                line(from, step, &mut out);
                from = step.state;
            }
            let _ = writeln!(out, "cycle: (entry energy {})", cycle_entry_energy);
            for step in cycle {
                line(from, step, &mut out);
                from = step.state;
            }
        }
    }
    out
}
