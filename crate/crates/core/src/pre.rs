//! Predecessor operators over a game graph.
//!
//! Each operator is a single pass over the successor lists. The public
//! functions check set widths; the fixed-point solvers go through [`Ops`],
//! which skips the checks and counts invocations.

use std::cell::Cell;

use thiserror::Error;

use crate::graph::{GameGraph, Player, StateId};
use crate::set::StateSet;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("state set width {found} does not match graph size {expected}")]
pub struct WidthMismatch {
    pub expected: usize,
    pub found: usize,
}

fn check(g: &GameGraph, sets: &[&StateSet]) -> Result<(), WidthMismatch> {
    match sets.iter().find(|s| s.width() != g.len()) {
        Some(s) => Err(WidthMismatch {
            expected: g.len(),
            found: s.width(),
        }),
        None => Ok(()),
    }
}

/// States with at least one successor in `p`.
pub fn pre_exists(g: &GameGraph, p: &StateSet) -> Result<StateSet, WidthMismatch> {
    check(g, &[p])?;
    Ok(Ops::new(g).exists(p))
}

/// States whose successors all lie in `p`.
pub fn pre_forall(g: &GameGraph, p: &StateSet) -> Result<StateSet, WidthMismatch> {
    check(g, &[p])?;
    Ok(Ops::new(g).forall(p))
}

/// States from which player `l` can force the next state into `p`.
pub fn pre_ctrl(g: &GameGraph, l: Player, p: &StateSet) -> Result<StateSet, WidthMismatch> {
    check(g, &[p])?;
    Ok(Ops::new(g).ctrl(l, p))
}

/// Conditional predecessor: `p` is reachable in one step and the system
/// keeps the next state inside `p ∪ p2`.
pub fn apre(g: &GameGraph, p: &StateSet, p2: &StateSet) -> Result<StateSet, WidthMismatch> {
    check(g, &[p, p2])?;
    Ok(Ops::new(g).apre(p, p2))
}

/// Dual of [`apre`]: all successors in `p`, or the environment can move into
/// `p ∩ p2`.
pub fn apre_dual(g: &GameGraph, p: &StateSet, p2: &StateSet) -> Result<StateSet, WidthMismatch> {
    check(g, &[p, p2])?;
    Ok(Ops::new(g).apre_dual(p, p2))
}

/// Unchecked operators with an invocation counter.
pub struct Ops<'g> {
    g: &'g GameGraph,
    calls: Cell<u64>,
}

impl<'g> Ops<'g> {
    pub fn new(g: &'g GameGraph) -> Self {
        Ops {
            g,
            calls: Cell::new(0),
        }
    }

    pub fn graph(&self) -> &'g GameGraph {
        self.g
    }

    /// Number of operator invocations so far.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    fn collect(&self, keep: impl Fn(StateId, &[StateId]) -> bool) -> StateSet {
        self.calls.set(self.calls.get() + 1);
        let g = self.g;
        StateSet::from_states(g.len(), g.states().filter(|&q| keep(q, g.succ(q))))
    }

    pub fn exists(&self, p: &StateSet) -> StateSet {
        self.collect(|_, succ| succ.iter().any(|&t| p.contains(t)))
    }

    pub fn forall(&self, p: &StateSet) -> StateSet {
        self.collect(|_, succ| succ.iter().all(|&t| p.contains(t)))
    }

    pub fn ctrl(&self, l: Player, p: &StateSet) -> StateSet {
        self.collect(|q, succ| {
            if self.g.owner(q) == l {
                succ.iter().any(|&t| p.contains(t))
            } else {
                succ.iter().all(|&t| p.contains(t))
            }
        })
    }

    pub fn apre(&self, p: &StateSet, p2: &StateSet) -> StateSet {
        self.collect(|q, succ| {
            let some = succ.iter().any(|&t| p.contains(t));
            match self.g.owner(q) {
                Player::Sys => some,
                Player::Env => some && succ.iter().all(|&t| p.contains(t) || p2.contains(t)),
            }
        })
    }

    pub fn apre_dual(&self, p: &StateSet, p2: &StateSet) -> StateSet {
        self.collect(|q, succ| {
            let all = succ.iter().all(|&t| p.contains(t));
            match self.g.owner(q) {
                Player::Sys => all,
                Player::Env => all || succ.iter().any(|&t| p.contains(t) && p2.contains(t)),
            }
        })
    }
}
