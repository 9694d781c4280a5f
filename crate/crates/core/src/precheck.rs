//! Sufficient condition `L(H, F_G) ⊆ L(H, F_A)` and guarantee augmentation.
//!
//! For every assumption set `F_A^b`, the plays that satisfy all guarantees
//! but visit `F_A^b` only finitely often are those that eventually stay in
//! the graph with `F_A^b` deleted. Such a play exists iff that graph has a
//! nontrivial SCC, reachable from the initial state in the full graph, that
//! meets every guarantee set.

use crate::graph::{GR1Spec, GameGraph};
use crate::scc::{is_nontrivial, tarjan};
use crate::set::StateSet;

/// Zero-based indices `b` for which some guarantee-satisfying play visits
/// `F_A^b` only finitely often.
pub fn check_inclusion(g: &GameGraph, s: &GR1Spec) -> Vec<usize> {
    if s.assumptions.is_empty() {
        return Vec::new();
    }
    let c = s.conditions(g);
    let reach = g.reachable_from(g.init());
    let succ: Vec<&[usize]> = g.states().map(|q| g.succ(q)).collect();
    (0..c.m())
        .filter(|&b| {
            let alive = prune_dead_ends(g, &c.assumptions[b].complement());
            let active: Vec<bool> = g.states().map(|q| alive.contains(q)).collect();
            tarjan(&succ, &active).iter().any(|comp| {
                is_nontrivial(&succ, comp)
                    && reach.contains(comp[0])
                    && c.guarantees
                        .iter()
                        .all(|fg| comp.iter().any(|&q| fg.contains(q)))
            })
        })
        .collect()
}

/// Largest subset of `keep` in which every state has a successor.
fn prune_dead_ends(g: &GameGraph, keep: &StateSet) -> StateSet {
    let mut alive = keep.clone();
    let mut out_deg: Vec<usize> = g
        .states()
        .map(|q| g.succ(q).iter().filter(|&&t| keep.contains(t)).count())
        .collect();
    let mut work: Vec<usize> = alive.iter().filter(|&q| out_deg[q] == 0).collect();
    while let Some(q) = work.pop() {
        if !alive.contains(q) {
            continue;
        }
        alive.remove(q);
        for &p in g.pred(q) {
            if alive.contains(p) {
                out_deg[p] -= 1;
                if out_deg[p] == 0 {
                    work.push(p);
                }
            }
        }
    }
    alive
}

/// Appends `F_A^b` for every failed `b` to the guarantees, skipping sets
/// that are already guarantees.
pub fn augment_guarantees(s: &GR1Spec, failed: &[usize]) -> GR1Spec {
    let mut out = s.clone();
    for &b in failed {
        let set = &s.assumptions[b];
        if !out.guarantees.contains(set) {
            out.guarantees.push(set.clone());
        }
    }
    out
}
