//! Extracted strategies checked by the verifier and by the cycle oracle.

mod common;

use common::*;
use gr1_core::fixtures;
use gr1_core::graph::{GameGraph, Player, StateId};
use gr1_core::oracle::{cycle_groups, oracle_verify, simple_cycles};
use gr1_core::precheck::{augment_guarantees, check_inclusion};
use gr1_core::singleton::MemorylessStrategy;
use gr1_core::strategy::{Controller, Node};
use gr1_core::verifier::{build_closed_loop, verify};
use gr1_core::{synthesize, Algorithm, GR1Spec, Precheck};
use rand::Rng;

const BUDGET: usize = 200_000;

#[test]
fn strategies_pass_every_check() {
    let mut r = rng(21);
    let mut checked = 0;
    for k in 0..300 {
        let (n, m) = (1 + k % 3, 1 + (k / 3) % 3);
        let (g, s) = random_instance(&mut r, 4 + k % 20, n, m);
        for algo in [Algorithm::FourFp, Algorithm::Heuristic] {
            // augmentation can break the n = m shape the heuristic needs
            let Ok(syn) = synthesize(&g, &s, algo, Precheck::Auto) else {
                continue;
            };
            let Some(strat) = &syn.strategy else { continue };
            let c = syn.spec.conditions(&g);
            let cl = build_closed_loop(&g, strat).unwrap();
            let report = verify(&cl, &c);
            assert!(report.gr1.holds, "instance {k} {algo}");
            assert!(report.guarantee_play, "instance {k} {algo}");
            if check_inclusion(&g, &s).is_empty() {
                assert!(report.nonconflicting.holds, "instance {k} {algo}");
            }
            checked += 1;
        }
    }
    assert!(checked > 50, "only {checked} realizable instances");
}

#[test]
fn classical_strategies_win() {
    let mut r = rng(22);
    for k in 0..200 {
        let (g, s) = random_instance(&mut r, 4 + k % 20, 1 + k % 3, 1 + (k / 3) % 3);
        let syn = synthesize(&g, &s, Algorithm::ThreeFp, Precheck::Off).unwrap();
        if let Some(strat) = &syn.strategy {
            let cl = build_closed_loop(&g, strat).unwrap();
            assert!(verify(&cl, &s.conditions(&g)).gr1.holds, "instance {k}");
        }
    }
}

/// A uniformly random memoryless choice at every system state.
fn random_memoryless(r: &mut rand_chacha::ChaCha8Rng, g: &GameGraph) -> MemorylessStrategy {
    let mut out = MemorylessStrategy::default();
    for q in g.states().filter(|&q| g.owner(q) == Player::Sys) {
        let succ = g.succ(q);
        out.moves.insert(q, succ[r.gen_range(0..succ.len())]);
    }
    out
}

#[test]
fn verifier_agrees_with_cycle_oracle() {
    let mut r = rng(23);
    let mut disagreements = Vec::new();
    let mut compared = 0;
    for k in 0..300 {
        let (g, s) = random_instance(&mut r, 4 + k % 14, 1 + k % 2, 1 + (k / 2) % 2);
        let c = s.conditions(&g);
        let mut loops = Vec::new();
        let rand_strat = random_memoryless(&mut r, &g);
        loops.push(build_closed_loop(&g, &(&g, &rand_strat)).unwrap());
        for algo in [Algorithm::ThreeFp, Algorithm::FourFp] {
            if let Some(strat) = synthesize(&g, &s, algo, Precheck::Off).unwrap().strategy {
                loops.push(build_closed_loop(&g, &strat).unwrap());
            }
        }
        for cl in loops.iter().filter(|cl| cl.len() <= 64) {
            let report = verify(cl, &c);
            let oracle = oracle_verify(cl, &c, BUDGET).unwrap();
            let ours = (
                report.gr1.holds,
                report.nonconflicting.holds,
                report.guarantee_play,
            );
            let theirs = (
                oracle.gr1_holds,
                oracle.nonconflicting,
                oracle.guarantee_play,
            );
            if ours != theirs {
                disagreements.push((k, ours, theirs));
            }
            compared += 1;
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
    assert!(compared > 300);
}

/// Indices `b` for which some lasso from the initial state visits every
/// guarantee set infinitely often while avoiding `F_A^b` on its loop.
fn lasso_failures(g: &GameGraph, s: &GR1Spec) -> Vec<usize> {
    let c = s.conditions(g);
    let succ: Vec<Vec<usize>> = g.states().map(|q| g.succ(q).to_vec()).collect();
    let reach = g.reachable_from(g.init());
    (0..c.m())
        .filter(|&b| {
            let allowed: Vec<bool> = g
                .states()
                .map(|q| reach.contains(q) && !c.assumptions[b].contains(q))
                .collect();
            let cycles = simple_cycles(&succ, &allowed, BUDGET).unwrap();
            cycle_groups(g.len(), &cycles).iter().any(|grp| {
                c.guarantees
                    .iter()
                    .all(|fg| grp.iter().any(|&q| fg.contains(q)))
            })
        })
        .collect()
}

#[test]
fn precheck_matches_lasso_search() {
    let mut r = rng(24);
    for k in 0..300 {
        let (g, s) = random_instance(&mut r, 2 + k % 16, 1 + k % 3, 1 + (k / 3) % 3);
        assert_eq!(
            check_inclusion(&g, &s),
            lasso_failures(&g, &s),
            "instance {k}"
        );
    }
}

/// Two-state memory machine over `EX1`: `choice[mem]` is the successor of
/// `b1`, `update[state][mem]` the memory after entering `state`.
struct MemoryMachine<'g> {
    g: &'g GameGraph,
    choice: [StateId; 2],
    update: [[usize; 2]; 4],
}

impl Controller for MemoryMachine<'_> {
    fn initial(&self) -> Option<Node> {
        let q0 = self.g.init();
        Some(Node::new(q0, self.update[q0][0], 0))
    }

    fn sys_move(&self, at: Node) -> Option<Node> {
        let to = match self.g.id(at.state) {
            "b1" => self.choice[at.a],
            _ => self.g.succ(at.state)[0],
        };
        Some(Node::new(to, self.update[to][at.a], 0))
    }

    fn env_move(&self, at: Node, to: StateId) -> Option<Node> {
        Some(Node::new(to, self.update[to][at.a], 0))
    }
}

/// Every strategy with at most two memory states on the augmented `EX1`
/// specification, checked by the cycle oracle alone.
#[test]
fn augmented_ex1_has_a_two_memory_solution() {
    let (g, s) = fixtures::ex1();
    let aug = augment_guarantees(&s, &check_inclusion(&g, &s));
    assert_eq!(aug.guarantees.len(), 2);
    let c = aug.conditions(&g);
    let (a0, a1) = (g.lookup("a0").unwrap(), g.lookup("a1").unwrap());
    let mut winners = Vec::new();
    let mut memoryless_winners = 0;
    for bits in 0u32..(1 << 10) {
        let choice = [
            [a0, a1][(bits & 1) as usize],
            [a0, a1][(bits >> 1 & 1) as usize],
        ];
        let mut update = [[0; 2]; 4];
        for (i, cell) in update.iter_mut().flatten().enumerate() {
            *cell = (bits >> (2 + i) & 1) as usize;
        }
        let machine = MemoryMachine {
            g: &g,
            choice,
            update,
        };
        let cl = build_closed_loop(&g, &machine).unwrap();
        let v = oracle_verify(&cl, &c, BUDGET).unwrap();
        if v.gr1_holds && v.nonconflicting && v.guarantee_play {
            let constant_memory = update.iter().flatten().all(|&x| x == update[0][0]);
            let memoryless = choice[0] == choice[1] || constant_memory;
            memoryless_winners += memoryless as u32;
            winners.push(bits);
        }
    }
    assert!(!winners.is_empty());
    assert_eq!(memoryless_winners, 0, "no memoryless strategy wins");
    let syn = synthesize(&g, &s, Algorithm::FourFp, Precheck::Auto).unwrap();
    assert!(syn.realizable());
}
