//! The classical three-nested GR(1) fixed point, in vector form:
//!
//! ```text
//! line a:  μY. ⋁_b νX. (F_G^a ∩ Pre¹(Z^{a⁺})) ∪ Pre¹(Y) ∪ (¬F_A^b ∩ Pre¹(X))
//! ```
//!
//! Strategy extraction uses the rank `(r, β)` of a state in line `a`: `r` is
//! the `Y` iteration it entered, `β` the smallest conjunct whose final `X` at
//! that iteration contains it.

use std::collections::BTreeMap;

use crate::graph::{Conditions, GameGraph, Player, StateId};
use crate::pre::Ops;
use crate::rank::SolveStats;
use crate::set::StateSet;

#[derive(Clone, Debug)]
pub struct ClassicResult {
    pub n: usize,
    pub m: usize,
    /// Union of the line fixed points.
    pub winning: StateSet,
    pub z: Vec<StateSet>,
    /// `y[a][i] = ᵃY^i`, with `y[a][0] = ∅`.
    pub y: Vec<Vec<StateSet>>,
    /// `x[a][i][b]`: final `X` of conjunct `b` in the `i`-th `Y` iteration.
    pub x: Vec<Vec<Vec<StateSet>>>,
    pub guarantees: Vec<StateSet>,
    /// `(sys state, a) ↦ (successor, a′)` on every winning system state.
    pub moves: BTreeMap<(StateId, usize), (StateId, usize)>,
    pub stats: SolveStats,
}

impl ClassicResult {
    /// `(r, β)` of `q` in line `a`.
    pub fn rank(&self, a: usize, q: StateId) -> Option<(usize, usize)> {
        let r = self.y[a].iter().position(|s| s.contains(q))?;
        let beta = self.x[a][r].iter().position(|s| s.contains(q))?;
        Some((r, beta))
    }

    /// The `Y` iteration in which `q` entered line `a`.
    pub fn y_rank(&self, a: usize, q: StateId) -> Option<usize> {
        self.y[a].iter().position(|s| s.contains(q))
    }

    pub fn next_a(&self, a: usize) -> usize {
        (a + 1) % self.n
    }
}

pub fn solve_3fp(g: &GameGraph, c: &Conditions) -> ClassicResult {
    let (n, m) = (c.n(), c.m());
    let mut stats = SolveStats {
        pre_calls: vec![0; n],
        ..SolveStats::default()
    };
    let mut z = vec![StateSet::full(g.len()); n];
    let (ys, xs) = loop {
        stats.outer_iterations += 1;
        let mut ys = Vec::with_capacity(n);
        let mut xs = Vec::with_capacity(n);
        for a in 0..n {
            let ops = Ops::new(g);
            let (y, x) = solve_line(&ops, c, a, &z[(a + 1) % n], &mut stats.inner_iterations);
            stats.pre_calls[a] += ops.calls();
            ys.push(y);
            xs.push(x);
        }
        let next: Vec<StateSet> = ys
            .iter()
            .map(|y: &Vec<StateSet>| y.last().unwrap().clone())
            .collect();
        if next == z {
            break (ys, xs);
        }
        z = next;
    };
    let mut winning = z[0].clone();
    for s in &z[1..] {
        winning.union_with(s);
    }
    let mut res = ClassicResult {
        n,
        m,
        winning,
        z,
        y: ys,
        x: xs,
        guarantees: c.guarantees.clone(),
        moves: BTreeMap::new(),
        stats,
    };
    res.moves = extract(g, &res);
    res
}

fn solve_line(
    ops: &Ops,
    c: &Conditions,
    a: usize,
    z_next: &StateSet,
    inner: &mut u64,
) -> (Vec<StateSet>, Vec<Vec<StateSet>>) {
    let width = ops.graph().len();
    let goal = c.guarantees[a].intersection(&ops.ctrl(Player::Sys, z_next));
    let mut ys = vec![StateSet::empty(width)];
    let mut xs = vec![vec![StateSet::empty(width); c.m()]];
    loop {
        let base = goal.union(&ops.ctrl(Player::Sys, ys.last().unwrap()));
        let mut y_next = StateSet::empty(width);
        let mut per_b = Vec::with_capacity(c.m());
        for fa in &c.assumptions {
            let not_fa = fa.complement();
            let mut x = StateSet::full(width);
            loop {
                *inner += 1;
                let mut next = ops.ctrl(Player::Sys, &x);
                next.intersect_with(&not_fa);
                next.union_with(&base);
                if next == x {
                    break;
                }
                x = next;
            }
            y_next.union_with(&x);
            per_b.push(x);
        }
        if &y_next == ys.last().unwrap() {
            return (ys, xs);
        }
        ys.push(y_next);
        xs.push(per_b);
    }
}

fn extract(g: &GameGraph, res: &ClassicResult) -> BTreeMap<(StateId, usize), (StateId, usize)> {
    let mut moves = BTreeMap::new();
    for a in 0..res.n {
        for q in res.winning.iter().filter(|&q| g.owner(q) == Player::Sys) {
            if let Some(choice) = classic_choice(g, res, q, a) {
                moves.insert((q, a), choice);
            }
        }
    }
    moves
}

/// At a guarantee state of line `a`, advance to `a⁺` and move to the
/// successor of least `Y` iteration there. Otherwise move into
/// `Y^{r-1} ∪ X^{r,β}`, again to the successor of least `Y` iteration. Ties
/// go to the smaller state index.
fn classic_choice(
    g: &GameGraph,
    res: &ClassicResult,
    q: StateId,
    a: usize,
) -> Option<(StateId, usize)> {
    let pick = |line: usize, allowed: &dyn Fn(StateId) -> bool| {
        g.succ(q)
            .iter()
            .filter(|&&t| allowed(t))
            .filter_map(|&t| res.y_rank(line, t).map(|r| (r, t)))
            .min()
            .map(|(_, t)| (t, line))
    };
    if res.guarantees[a].contains(q) {
        let a2 = res.next_a(a);
        return pick(a2, &|t| res.z[a2].contains(t));
    }
    let (r, beta) = res.rank(a, q)?;
    let lower = &res.y[a][r - 1];
    let stay = &res.x[a][r][beta];
    pick(a, &|t| lower.contains(t) || stay.contains(t))
}
