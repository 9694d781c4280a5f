//! Shared generators and independent oracles for the integration tests.

#![allow(dead_code)]

use gr1_core::graph::{Conditions, GR1Spec, GameGraph, Player, StateId};
use gr1_core::pre::{apre_dual, pre_ctrl};
use gr1_core::singleton::RankTable;
use gr1_core::vector::ModedRankTable;
use gr1_core::{Rank, StateSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random valid arena with `len` states: state 0 is the environment-owned
/// initial state, owners are random (both present), and every state gets one
/// to three successors of the other player.
pub fn random_game(rng: &mut ChaCha8Rng, len: usize) -> GameGraph {
    let len = len.max(2);
    let mut owner: Vec<Player> = (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Player::Env
            } else {
                Player::Sys
            }
        })
        .collect();
    owner[0] = Player::Env;
    owner[1] = Player::Sys;
    let env: Vec<StateId> = (0..len).filter(|&q| owner[q] == Player::Env).collect();
    let sys: Vec<StateId> = (0..len).filter(|&q| owner[q] == Player::Sys).collect();
    let mut edges = Vec::new();
    for q in 0..len {
        let pool = if owner[q] == Player::Env { &sys } else { &env };
        let k = rng.gen_range(1..=3.min(pool.len()));
        let mut picked: Vec<StateId> = Vec::new();
        while picked.len() < k {
            let t = pool[rng.gen_range(0..pool.len())];
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        edges.extend(picked.into_iter().map(|t| (q, t)));
    }
    let ids = (0..len).map(|q| format!("s{q}")).collect();
    GameGraph::new(ids, owner, edges, 0)
}

pub fn random_set(rng: &mut ChaCha8Rng, len: usize, p: f64) -> Vec<StateId> {
    (0..len).filter(|_| rng.gen_bool(p)).collect()
}

pub fn random_state_set(rng: &mut ChaCha8Rng, len: usize) -> StateSet {
    let p = rng.gen_range(0.0..1.0);
    StateSet::from_states(len, random_set(rng, len, p))
}

/// A random game with `n` guarantee and `m` assumption sets.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    len: usize,
    n: usize,
    m: usize,
) -> (GameGraph, GR1Spec) {
    let g = random_game(rng, len);
    let assumptions = (0..m).map(|_| random_set(rng, g.len(), 0.3)).collect();
    let guarantees = (0..n).map(|_| random_set(rng, g.len(), 0.3)).collect();
    (g, GR1Spec::new(assumptions, guarantees))
}

/// Literal negation of the vector fixed point, line by line:
///
/// ```text
/// μZ̄. line a: νȲ. ⋀_b μX̄. νW̄. (¬F_G^a ∪ Pre⁰(Z̄^{a⁺})) ∩ Pre⁰(Ȳ)
///                              ∩ (F_A^b ∪ Apre‾(W̄, X̄ ∪ F_A^b))
/// ```
pub fn negated_vector_exact(g: &GameGraph, c: &Conditions) -> Vec<StateSet> {
    negated_vector(g, c, |pz, py, not_fg, fa, dual| {
        not_fg
            .union(pz)
            .intersection(py)
            .intersection(&fa.union(dual))
    })
}

/// The line-wise simplified negation, which drops `Pre⁰(Ȳ)` from the
/// `Apre‾` disjunct:
///
/// ```text
/// μZ̄. line a: νȲ. ⋀_b μX̄. νW̄. Pre⁰(Z̄^{a⁺}) ∪ (¬F_G^a ∩ F_A^b ∩ Pre⁰(Ȳ))
///                              ∪ (¬F_G^a ∩ Apre‾(W̄, X̄ ∪ F_A^b))
/// ```
pub fn negated_vector_simplified(g: &GameGraph, c: &Conditions) -> Vec<StateSet> {
    negated_vector(g, c, |pz, py, not_fg, fa, dual| {
        let mut out = not_fg.intersection(fa).intersection(py);
        out.union_with(&not_fg.intersection(dual));
        out.union_with(pz);
        out
    })
}

/// Evaluates a negated vector fixed point whose innermost body is
/// `body(Pre⁰(Z̄^{a⁺}), Pre⁰(Ȳ), ¬F_G^a, F_A^b, Apre‾(W̄, X̄ ∪ F_A^b))`.
/// Returns the losing region of every line.
fn negated_vector(
    g: &GameGraph,
    c: &Conditions,
    body: impl Fn(&StateSet, &StateSet, &StateSet, &StateSet, &StateSet) -> StateSet,
) -> Vec<StateSet> {
    let (n, len) = (c.n(), g.len());
    let pre0 = |p: &StateSet| pre_ctrl(g, Player::Env, p).unwrap();
    let mut z = vec![StateSet::empty(len); n];
    loop {
        let next: Vec<StateSet> = (0..n)
            .map(|a| {
                let not_fg = c.guarantees[a].complement();
                let pz = pre0(&z[(a + 1) % n]);
                let mut y = StateSet::full(len);
                loop {
                    let py = pre0(&y);
                    let mut y_next = StateSet::full(len);
                    for fa in &c.assumptions {
                        let mut x = StateSet::empty(len);
                        loop {
                            let x_fa = x.union(fa);
                            let mut w = StateSet::full(len);
                            loop {
                                let dual = apre_dual(g, &w, &x_fa).unwrap();
                                let next_w = body(&pz, &py, &not_fg, fa, &dual);
                                if next_w == w {
                                    break;
                                }
                                w = next_w;
                            }
                            if w == x {
                                break;
                            }
                            x = w;
                        }
                        y_next.intersect_with(&x);
                    }
                    if y_next == y {
                        break y;
                    }
                    y = y_next;
                }
            })
            .collect();
        if next == z {
            return z;
        }
        z = next;
    }
}

fn below(r: Option<Rank>, bound: Rank) -> bool {
    r.is_some_and(|r| r < bound)
}

/// Violations of the singleton rank biconditionals and of the per-state case
/// analysis (a)-(c) for system and (a')-(c') for environment states.
pub fn singleton_rank_violations(
    g: &GameGraph,
    fa: &StateSet,
    fg: &StateSet,
    rt: &RankTable,
) -> Vec<String> {
    let mut out = Vec::new();
    for q in g.states() {
        let r = rt.rank(q);
        if r.is_some() != rt.z.contains(q) {
            out.push(format!("{q}: ranked iff winning"));
        }
        let Some(r) = r else { continue };
        let in_fg = fg.contains(q);
        let in_fa = fa.contains(q);
        let kind_d = r == Rank::TOP;
        let kind_e = r.j == 1 && r.i > 1;
        let kind_r = r.j > 1;
        if kind_d != in_fg || kind_e != (in_fa && !in_fg) || kind_r != (!in_fa && !in_fg) {
            out.push(format!(
                "{q}: rank {r} disagrees with membership (fa {in_fa}, fg {in_fg})"
            ));
        }
        let succ = g.succ(q);
        let rank_of = |t: &StateId| rt.rank(*t);
        let ok = match g.owner(q) {
            Player::Sys if kind_d => succ.iter().any(|t| rt.z.contains(*t)),
            Player::Sys if kind_e => succ.iter().any(|t| rank_of(t).is_some_and(|s| s.i < r.i)),
            Player::Sys => succ.iter().any(|t| below(rank_of(t), r)),
            Player::Env if kind_d => succ.iter().all(|t| rt.z.contains(*t)),
            Player::Env if kind_e => succ.iter().all(|t| rank_of(t).is_some_and(|s| s.i < r.i)),
            Player::Env => {
                succ.iter().any(|t| below(rank_of(t), r))
                    && succ.iter().all(|t| {
                        below(rank_of(t), r)
                            || (rank_of(t).is_some_and(|s| s.i <= r.i) && !fa.contains(*t))
                    })
            }
        };
        if !ok {
            out.push(format!("{q}: case analysis fails at rank {r}"));
        }
    }
    out
}

/// Violations of the moded rank implications and, for the full solver, of
/// the moded case analysis.
pub fn moded_rank_violations(g: &GameGraph, c: &Conditions, t: &ModedRankTable) -> Vec<String> {
    let mut out = Vec::new();
    for a in 0..t.n {
        let a_next = t.next_a(a);
        for q in g.states() {
            let bs = t.conjuncts(a);
            for &b in &bs {
                let Some(r) = t.rank(a, b, q) else { continue };
                if !t.z[a].contains(q) {
                    out.push(format!(
                        "line {a} state {q}: ranked outside the line region"
                    ));
                }
                if r == Rank::TOP && !c.guarantees[a].contains(q) {
                    out.push(format!("line {a} state {q}: rank (1,1) outside F_G"));
                }
                if r.j > 1 && c.assumptions[b].contains(q) {
                    out.push(format!("line {a} conj {b} state {q}: rank {r} inside F_A"));
                }
                if r.j == 1 && bs.iter().any(|&b2| t.rank(a, b2, q) != Some(r)) {
                    out.push(format!(
                        "line {a} state {q}: rank {r} not shared by every b"
                    ));
                }
            }
            if t.z[a].contains(q) && bs.iter().all(|&b| t.rank(a, b, q).is_none()) {
                out.push(format!("line {a} state {q}: winning but unranked"));
            }
            if t.heuristic {
                continue;
            }
            for &b in &bs {
                let Some(r) = t.rank(a, b, q) else { continue };
                let succ = g.succ(q);
                let in_za = |s: &StateId| t.z[a].contains(*s);
                let level_below = |s: &StateId| t.level(a, *s).is_some_and(|i| i < r.i);
                let prev_w = &t.w[a][b][r.i as usize][r.j as usize - 1];
                let ab_below = |s: &StateId| below(t.rank(a, b, *s), r) || prev_w.contains(*s);
                let any_b_rank_next =
                    |s: &StateId| (0..t.m).any(|b2| t.rank(a_next, b2, *s).is_some());
                let ok = match g.owner(q) {
                    Player::Sys if r == Rank::TOP => succ.iter().any(any_b_rank_next),
                    Player::Sys if r.j == 1 => succ.iter().any(|s| in_za(s) && level_below(s)),
                    Player::Sys => succ.iter().any(|s| in_za(s) && ab_below(s)),
                    Player::Env if r == Rank::TOP => succ
                        .iter()
                        .all(|s| t.z[a_next].contains(*s) && any_b_rank_next(s)),
                    Player::Env if r.j == 1 => succ.iter().all(|s| in_za(s) && level_below(s)),
                    Player::Env => {
                        let fa = &c.assumptions[b];
                        succ.iter().all(in_za)
                            && succ.iter().any(ab_below)
                            && succ.iter().all(|s| {
                                let same_i = t.rank(a, b, *s).is_some_and(|x| x.i == r.i);
                                ab_below(s) || ((same_i || level_below(s)) && !fa.contains(*s))
                            })
                    }
                };
                if !ok {
                    out.push(format!(
                        "line {a} conj {b} state {q}: case analysis fails at rank {r}"
                    ));
                }
            }
        }
    }
    out
}
