//! Four-nested fixed point for general GR(1) conditions.
//!
//! Line `a` of the vector fixed point is
//!
//! ```text
//! μY. ⋁_b νX. μW. (F_G^a ∩ Pre¹(Z^{a⁺})) ∪ Pre¹(Y) ∪ (¬F_A^b ∩ Apre(W, X \ F_A^b))
//! ```
//!
//! with `a⁺ = (a mod n) + 1`. The moded rank `rank_ab(q) = (i, j)` is defined
//! when `q` first enters `Y` of line `a` in iteration `i` and lies in the final
//! `X` of conjunct `b` at that iteration; it is undefined otherwise.

use thiserror::Error;

use crate::graph::{Conditions, GameGraph, Player, StateId};
use crate::pre::Ops;
use crate::rank::{entry_index, Rank, SolveStats};
use crate::set::StateSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("the a = b heuristic needs as many assumptions as guarantees (n = {n}, m = {m})")]
    HeuristicShape { n: usize, m: usize },
}

/// Line fixed points, iterates and moded ranks of the vector fixed point.
///
/// Indices `a` and `b` are zero-based here and one-based in files.
#[derive(Clone, Debug)]
pub struct ModedRankTable {
    pub n: usize,
    pub m: usize,
    pub heuristic: bool,
    /// `z[a] = ᵃZ∞`.
    pub z: Vec<StateSet>,
    /// `y[a][i] = ᵃY^i`, with `y[a][0] = ∅`.
    pub y: Vec<Vec<StateSet>>,
    /// `w[a][b][i][j] = ᵃᵇW^i_j`; empty for conjuncts skipped by the heuristic.
    pub w: Vec<Vec<Vec<Vec<StateSet>>>>,
    ranks: Vec<Vec<Vec<Option<Rank>>>>,
    pub guarantees: Vec<StateSet>,
    pub assumptions: Vec<StateSet>,
    pub stats: SolveStats,
}

impl ModedRankTable {
    pub fn rank(&self, a: usize, b: usize, q: StateId) -> Option<Rank> {
        self.ranks[a][b][q]
    }

    /// The `Y` iteration in which `q` entered line `a`.
    pub fn level(&self, a: usize, q: StateId) -> Option<u32> {
        entry_index(&self.y[a], q).map(|i| i as u32)
    }

    /// Union of the line fixed points.
    pub fn winning(&self) -> StateSet {
        let mut out = self.z[0].clone();
        for z in &self.z[1..] {
            out.union_with(z);
        }
        out
    }

    pub fn next_a(&self, a: usize) -> usize {
        (a + 1) % self.n
    }

    /// Conjuncts evaluated for line `a`.
    pub fn conjuncts(&self, a: usize) -> Vec<usize> {
        if self.heuristic {
            vec![a]
        } else {
            (0..self.m).collect()
        }
    }

    /// The defined rank of `q` in line `a` with the smallest `(rank, b)`.
    pub fn best_b(&self, a: usize, q: StateId) -> Option<(Rank, usize)> {
        (0..self.m)
            .filter_map(|b| self.rank(a, b, q).map(|r| (r, b)))
            .min()
    }
}

struct Line {
    y: Vec<StateSet>,
    w: Vec<Vec<Vec<StateSet>>>,
}

/// Evaluates the vector fixed point. With `heuristic` set, line `a` only
/// evaluates conjunct `b = a`, which requires `n == m`.
pub fn solve_4fp_vector(
    g: &GameGraph,
    c: &Conditions,
    heuristic: bool,
) -> Result<ModedRankTable, SolveError> {
    let (n, m) = (c.n(), c.m());
    if heuristic && n != m {
        return Err(SolveError::HeuristicShape { n, m });
    }
    let mut stats = SolveStats {
        pre_calls: vec![0; n],
        ..SolveStats::default()
    };
    let mut z = vec![StateSet::full(g.len()); n];
    loop {
        stats.outer_iterations += 1;
        let lines: Vec<Line> = (0..n)
            .map(|a| {
                let ops = Ops::new(g);
                let bs: Vec<usize> = if heuristic { vec![a] } else { (0..m).collect() };
                let line = solve_line(
                    &ops,
                    c,
                    a,
                    &z[(a + 1) % n],
                    &bs,
                    &mut stats.inner_iterations,
                );
                stats.pre_calls[a] += ops.calls();
                line
            })
            .collect();
        let next: Vec<StateSet> = lines.iter().map(|l| l.y.last().unwrap().clone()).collect();
        if next == z {
            let ranks = lines.iter().map(|l| line_ranks(g.len(), m, l)).collect();
            let (y, w) = lines.into_iter().map(|l| (l.y, l.w)).unzip();
            return Ok(ModedRankTable {
                n,
                m,
                heuristic,
                z,
                y,
                w,
                ranks,
                guarantees: c.guarantees.clone(),
                assumptions: c.assumptions.clone(),
                stats,
            });
        }
        z = next;
    }
}

fn solve_line(
    ops: &Ops,
    c: &Conditions,
    a: usize,
    z_next: &StateSet,
    bs: &[usize],
    inner: &mut u64,
) -> Line {
    let width = ops.graph().len();
    let goal = c.guarantees[a].intersection(&ops.ctrl(Player::Sys, z_next));
    let mut ys = vec![StateSet::empty(width)];
    let mut ws: Vec<Vec<Vec<StateSet>>> = vec![vec![vec![StateSet::empty(width)]]; c.m()];
    for b in 0..c.m() {
        if !bs.contains(&b) {
            ws[b].clear();
        }
    }
    loop {
        let base = goal.union(&ops.ctrl(Player::Sys, ys.last().unwrap()));
        let mut y_next = StateSet::empty(width);
        let mut chains = Vec::with_capacity(bs.len());
        for &b in bs {
            let chain = nu_x(ops, &base, &c.assumptions[b], inner);
            y_next.union_with(chain.last().unwrap());
            chains.push((b, chain));
        }
        if &y_next == ys.last().unwrap() {
            return Line { y: ys, w: ws };
        }
        ys.push(y_next);
        for (b, chain) in chains {
            ws[b].push(chain);
        }
    }
}

/// `νX. μW. base ∪ (¬F_A ∩ Apre(W, X \ F_A))`, returning the `W` chain of the
/// final `X` iteration.
fn nu_x(ops: &Ops, base: &StateSet, fa: &StateSet, inner: &mut u64) -> Vec<StateSet> {
    let width = base.width();
    let not_fa = fa.complement();
    let mut x = StateSet::full(width);
    loop {
        let x_rest = x.difference(fa);
        let mut chain = vec![StateSet::empty(width)];
        loop {
            *inner += 1;
            let mut next = ops.apre(chain.last().unwrap(), &x_rest);
            next.intersect_with(&not_fa);
            next.union_with(base);
            if &next == chain.last().unwrap() {
                break;
            }
            chain.push(next);
        }
        if chain.last().unwrap() == &x {
            return chain;
        }
        x = chain.last().unwrap().clone();
    }
}

fn line_ranks(width: usize, m: usize, line: &Line) -> Vec<Vec<Option<Rank>>> {
    let mut ranks = vec![vec![None; width]; m];
    for (b, chains) in line.w.iter().enumerate() {
        if chains.is_empty() {
            continue;
        }
        for i in 1..line.y.len() {
            for q in line.y[i].difference(&line.y[i - 1]).iter() {
                if let Some(j) = entry_index(&chains[i], q) {
                    ranks[b][q] = Some(Rank::new(i as u32, j as u32));
                }
            }
        }
    }
    ranks
}

/// The starting mode at `q0`: the first guarantee, and the assumption index
/// with the smallest rank there.
pub fn initial_mode(mrt: &ModedRankTable, q0: StateId) -> Option<(usize, usize)> {
    mrt.best_b(0, q0).map(|(_, b)| (0, b))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModeError {
    #[error("state {0} is outside the winning region of the current mode")]
    Unranked(StateId),
    #[error("successor {0} has no rank in the next mode")]
    SuccessorUnranked(StateId),
}

/// Mode update along an environment move from `q` (in mode `(a, b)`) to `to`.
///
/// At rank `(1,1)` the guarantee index advances; at `(i,1)` it is kept; in
/// both cases the assumption index is re-chosen greedily at `to`. At `(i,j)`
/// with `j > 1` the mode is kept, unless `to` has no rank for `(a, b)`: it then
/// entered line `a` in an earlier iteration and `b` is re-chosen.
pub fn comply_mode(
    mrt: &ModedRankTable,
    (q, a, b): (StateId, usize, usize),
    to: StateId,
) -> Result<(usize, usize), ModeError> {
    let r = mrt.rank(a, b, q).ok_or(ModeError::Unranked(q))?;
    let a2 = if r == Rank::TOP { mrt.next_a(a) } else { a };
    if r.j > 1 && mrt.rank(a, b, to).is_some() {
        return Ok((a, b));
    }
    mrt.best_b(a2, to)
        .map(|(_, b2)| (a2, b2))
        .ok_or(ModeError::SuccessorUnranked(to))
}

/// The system move at `(q, a, b)`: successor and next mode.
///
/// At `(1,1)` the guarantee index advances and the successor minimizes its
/// rank in the next line. At `(i,1)` the successor has a smaller first rank
/// component. At `(i,j)`, `j > 1`, the successor keeps `b` and has a smaller
/// rank; if none exists (possible only via states ranked in an earlier
/// iteration under another `b`) any successor with a smaller first component
/// is taken. Ties: smaller rank, then smaller `b`, then smaller state index.
pub fn sys_choice(
    g: &GameGraph,
    mrt: &ModedRankTable,
    (q, a, b): (StateId, usize, usize),
) -> Option<(StateId, usize, usize)> {
    let r = mrt.rank(a, b, q)?;
    let best_in = |line: usize, keep: &dyn Fn(Rank, usize) -> bool| {
        g.succ(q)
            .iter()
            .flat_map(|&t| (0..mrt.m).map(move |b2| (t, b2)))
            .filter_map(|(t, b2)| mrt.rank(line, b2, t).map(|rt| (rt, b2, t)))
            .filter(|&(rt, b2, _)| keep(rt, b2))
            .min()
            .map(|(_, b2, t)| (t, line, b2))
    };
    if r == Rank::TOP {
        return best_in(mrt.next_a(a), &|_, _| true);
    }
    if r.j > 1 {
        if let Some(hit) = best_in(a, &|rt, b2| b2 == b && rt < r) {
            return Some(hit);
        }
    }
    best_in(a, &|rt, _| rt.i < r.i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::singleton::solve_4fp_singleton;

    #[test]
    fn singleton_case_matches_singleton_solver() {
        for (g, s) in [fixtures::ex0(), fixtures::ex1(), fixtures::h1()] {
            let c = s.conditions(&g);
            let rt = solve_4fp_singleton(&g, &c.assumptions[0], &c.guarantees[0]);
            let mrt = solve_4fp_vector(&g, &c, false).unwrap();
            assert_eq!(mrt.z[0], rt.z);
            for q in g.states() {
                assert_eq!(mrt.rank(0, 0, q), rt.rank(q));
            }
        }
    }

    #[test]
    fn heuristic_needs_square_shape() {
        let (g, mut s) = fixtures::h2();
        s.guarantees.pop();
        let err = solve_4fp_vector(&g, &s.conditions(&g), true).unwrap_err();
        assert_eq!(err, SolveError::HeuristicShape { n: 1, m: 2 });
    }

    #[test]
    fn h2_ranks() {
        let (g, s) = fixtures::h2();
        let mrt = solve_4fp_vector(&g, &s.conditions(&g), false).unwrap();
        assert_eq!(mrt.stats.outer_iterations, 1);
        assert!(mrt.z[0].is_full() && mrt.z[1].is_full());
        let q = |n: &str| g.lookup(n).unwrap();
        let check = |a: usize, b: usize, expected: &[(&str, Option<(u32, u32)>)]| {
            for &(name, r) in expected {
                assert_eq!(
                    mrt.rank(a, b, q(name)),
                    r.map(|(i, j)| Rank::new(i, j)),
                    "rank {a}{b} of {name}"
                );
            }
        };
        check(
            0,
            0,
            &[
                ("q3", Some((1, 1))),
                ("q2", Some((1, 2))),
                ("q1", Some((1, 3))),
                ("q0", Some((1, 4))),
                ("q5", Some((1, 5))),
                ("q8", Some((1, 5))),
                ("q10", Some((1, 5))),
                ("q7", Some((1, 6))),
                ("q9", Some((1, 6))),
                ("q6", Some((1, 7))),
                ("q4", Some((2, 1))),
            ],
        );
        check(
            0,
            1,
            &[("q3", Some((1, 1))), ("q2", None), ("q4", Some((2, 1)))],
        );
        check(
            1,
            0,
            &[
                ("q8", Some((1, 1))),
                ("q10", Some((1, 1))),
                ("q7", Some((1, 2))),
                ("q9", Some((1, 2))),
                ("q6", Some((1, 3))),
                ("q1", Some((1, 3))),
                ("q0", Some((1, 4))),
                ("q5", Some((1, 5))),
                ("q4", Some((2, 1))),
                ("q2", Some((2, 2))),
                ("q3", Some((2, 2))),
            ],
        );
        check(
            1,
            1,
            &[
                ("q8", Some((1, 1))),
                ("q10", Some((1, 1))),
                ("q6", None),
                ("q4", Some((2, 1))),
                ("q2", Some((2, 2))),
                ("q3", Some((2, 2))),
            ],
        );
    }

    #[test]
    fn h2_modes() {
        let (g, s) = fixtures::h2();
        let mrt = solve_4fp_vector(&g, &s.conditions(&g), false).unwrap();
        let q = |n: &str| g.lookup(n).unwrap();
        assert_eq!(initial_mode(&mrt, q("q0")), Some((0, 0)));
        assert_eq!(comply_mode(&mrt, (q("q2"), 1, 1), q("q6")), Ok((1, 0)));
        assert_eq!(comply_mode(&mrt, (q("q2"), 1, 1), q("q3")), Ok((1, 1)));
        assert_eq!(sys_choice(&g, &mrt, (q("q1"), 1, 0)), Some((q("q9"), 1, 0)));
        assert_eq!(sys_choice(&g, &mrt, (q("q1"), 0, 0)), Some((q("q2"), 0, 0)));
        assert_eq!(sys_choice(&g, &mrt, (q("q3"), 0, 0)), Some((q("q4"), 1, 0)));
    }
}
