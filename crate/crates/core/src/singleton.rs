//! Four-nested fixed point for one assumption set and one guarantee set.
//!
//! ```text
//! νZ. μY. νX. μW. (F_G ∩ Pre¹(Z)) ∪ Pre¹(Y) ∪ (¬F_A ∩ Apre(W, X \ F_A))
//! ```
//!
//! The iterates of the last pass over `Z` (and the last pass over `X` inside
//! each `Y` iteration) are kept, so that every winning state gets an exact
//! rank `(i, j)`.

use std::collections::BTreeMap;

use crate::graph::{GameGraph, Player, StateId};
use crate::pre::Ops;
use crate::rank::{entry_index, Rank, RankClass, SolveStats};
use crate::set::StateSet;

/// Winning region and ranks of the singleton fixed point.
#[derive(Clone, Debug)]
pub struct RankTable {
    /// `Z∞`.
    pub z: StateSet,
    /// `y[i] = Y^i`, with `y[0] = ∅` and the last entry equal to `Z∞`.
    pub y: Vec<StateSet>,
    /// `w[i][j] = W^i_j`, with `w[i][0] = ∅`; `w[0]` is `[∅]`.
    pub w: Vec<Vec<StateSet>>,
    ranks: Vec<Option<Rank>>,
    pub stats: SolveStats,
}

impl RankTable {
    pub fn rank(&self, q: StateId) -> Option<Rank> {
        self.ranks[q]
    }

    pub fn ranks(&self) -> &[Option<Rank>] {
        &self.ranks
    }
}

/// Evaluates the fixed point and derives ranks from its final iterates.
pub fn solve_4fp_singleton(g: &GameGraph, fa: &StateSet, fg: &StateSet) -> RankTable {
    let ops = Ops::new(g);
    let not_fa = fa.complement();
    let mut stats = SolveStats::default();
    let mut z = StateSet::full(g.len());
    loop {
        stats.outer_iterations += 1;
        let goal = fg.intersection(&ops.ctrl(Player::Sys, &z));
        let mut ys = vec![StateSet::empty(g.len())];
        let mut ws = vec![vec![StateSet::empty(g.len())]];
        loop {
            let base = goal.union(&ops.ctrl(Player::Sys, ys.last().unwrap()));
            let mut x = StateSet::full(g.len());
            let chain = loop {
                let x_rest = x.difference(fa);
                let mut chain = vec![StateSet::empty(g.len())];
                loop {
                    stats.inner_iterations += 1;
                    let mut next = ops.apre(chain.last().unwrap(), &x_rest);
                    next.intersect_with(&not_fa);
                    next.union_with(&base);
                    if &next == chain.last().unwrap() {
                        break;
                    }
                    chain.push(next);
                }
                let w = chain.last().unwrap();
                if *w == x {
                    break chain;
                }
                x = w.clone();
            };
            let y_next = chain.last().unwrap().clone();
            if &y_next == ys.last().unwrap() {
                break;
            }
            ys.push(y_next);
            ws.push(chain);
        }
        let y = ys.last().unwrap().clone();
        if y == z {
            stats.pre_calls = vec![ops.calls()];
            let ranks = rank_states(g.len(), &ys, &ws);
            return RankTable {
                z,
                y: ys,
                w: ws,
                ranks,
                stats,
            };
        }
        z = y;
    }
}

fn rank_states(width: usize, ys: &[StateSet], ws: &[Vec<StateSet>]) -> Vec<Option<Rank>> {
    let mut ranks = vec![None; width];
    for i in 1..ys.len() {
        for q in ys[i].difference(&ys[i - 1]).iter() {
            let j = entry_index(&ws[i], q).expect("Y^i is the last W^i iterate");
            ranks[q] = Some(Rank::new(i as u32, j as u32));
        }
    }
    ranks
}

/// Classifies `q` by its rank.
pub fn classify_rank(rt: &RankTable, q: StateId) -> RankClass {
    RankClass::of(rt.rank(q))
}

/// A memoryless system strategy: one successor per winning system state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MemorylessStrategy {
    pub moves: BTreeMap<StateId, StateId>,
}

/// Picks, at every ranked system state, a successor of strictly smaller rank;
/// at rank `(1,1)` any successor inside `Z∞`. Ties go to the smaller rank and
/// then the smaller state index.
pub fn extract_strategy_singleton(g: &GameGraph, rt: &RankTable) -> MemorylessStrategy {
    let mut moves = BTreeMap::new();
    for q in rt.z.iter().filter(|&q| g.owner(q) == Player::Sys) {
        let r = rt.rank(q).expect("Z∞ states are ranked");
        let best = g
            .succ(q)
            .iter()
            .filter_map(|&t| rt.rank(t).map(|rt_| (rt_, t)))
            .filter(|&(rt_, _)| r == Rank::TOP || rt_ < r)
            .min();
        if let Some((_, t)) = best {
            moves.insert(q, t);
        }
    }
    MemorylessStrategy { moves }
}

/// Evaluates the negated fixed point
///
/// ```text
/// μZ̄. νȲ. μX̄. νW̄. Pre⁰(Z̄) ∪ (¬F_G ∩ F_A ∩ Pre⁰(Ȳ)) ∪ (¬F_G ∩ Apre‾(W̄, X̄ ∪ F_A))
/// ```
///
/// whose value is the set of states from which no environmentally-friendly
/// winning strategy exists.
pub fn solve_4fp_negated(g: &GameGraph, fa: &StateSet, fg: &StateSet) -> StateSet {
    let ops = Ops::new(g);
    let not_fg = fg.complement();
    let assume = not_fg.intersection(fa);
    let mut z = StateSet::empty(g.len());
    loop {
        let pz = ops.ctrl(Player::Env, &z);
        let mut y = StateSet::full(g.len());
        let y_fix = loop {
            let base = pz.union(&assume.intersection(&ops.ctrl(Player::Env, &y)));
            let mut x = StateSet::empty(g.len());
            let x_fix = loop {
                let x_fa = x.union(fa);
                let mut w = StateSet::full(g.len());
                let w_fix = loop {
                    let mut next = ops.apre_dual(&w, &x_fa);
                    next.intersect_with(&not_fg);
                    next.union_with(&base);
                    if next == w {
                        break w;
                    }
                    w = next;
                };
                if w_fix == x {
                    break x;
                }
                x = w_fix;
            };
            if x_fix == y {
                break y;
            }
            y = x_fix;
        };
        if y_fix == z {
            return z;
        }
        z = y_fix;
    }
}
