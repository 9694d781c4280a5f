//! Independent closed-loop checker based on explicit cycle enumeration.
//!
//! The states a play visits infinitely often form a strongly connected set,
//! which is a union of simple cycles linked by shared nodes. This module
//! enumerates simple cycles, groups overlapping ones, and evaluates every
//! acceptance question on those groups. It shares no code with the SCC-based
//! verifier and is meant for small graphs only.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::Conditions;
use crate::set::StateSet;
use crate::verifier::ClosedLoopGraph;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cycle enumeration exceeded the budget of {0} cycles")]
pub struct BudgetExceeded(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleVerdict {
    pub gr1_holds: bool,
    pub nonconflicting: bool,
    pub guarantee_play: bool,
}

/// Simple cycles of the subgraph induced by `allowed`, each as a node list.
pub fn simple_cycles(
    succ: &[Vec<usize>],
    allowed: &[bool],
    budget: usize,
) -> Result<Vec<Vec<usize>>, BudgetExceeded> {
    let n = succ.len();
    let mut out = Vec::new();
    for start in (0..n).filter(|&s| allowed[s]) {
        // Cycles whose least node is `start`.
        let mut path = vec![start];
        let mut on_path = vec![false; n];
        on_path[start] = true;
        let mut cursor = vec![0usize];
        while let Some(&v) = path.last() {
            let pos = *cursor.last().unwrap();
            if pos == succ[v].len() {
                on_path[v] = false;
                path.pop();
                cursor.pop();
                continue;
            }
            *cursor.last_mut().unwrap() += 1;
            let w = succ[v][pos];
            if w == start {
                out.push(path.clone());
                if out.len() > budget {
                    return Err(BudgetExceeded(budget));
                }
            } else if w > start && allowed[w] && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                cursor.push(0);
            }
        }
    }
    Ok(out)
}

/// Node sets of maximal groups of cycles connected by shared nodes.
pub fn cycle_groups(n: usize, cycles: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    let mut on_cycle = vec![false; n];
    for cyc in cycles {
        for &v in cyc {
            on_cycle[v] = true;
            let (a, b) = (find(&mut parent, cyc[0]), find(&mut parent, v));
            parent[a] = b;
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in (0..n).filter(|&v| on_cycle[v]) {
        let r = find(&mut parent, v);
        groups[r].push(v);
    }
    groups.into_iter().filter(|g| !g.is_empty()).collect()
}

fn meets_all(cl: &ClosedLoopGraph, group: &[usize], sets: &[StateSet]) -> bool {
    sets.iter()
        .all(|s| group.iter().any(|&v| s.contains(cl.nodes[v].state)))
}

fn reachable(succ: &[Vec<usize>], from: usize) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Evaluates GR(1) satisfaction, non-conflictingness and the existence of a
/// guarantee-satisfying play by brute force.
pub fn oracle_verify(
    cl: &ClosedLoopGraph,
    c: &Conditions,
    budget: usize,
) -> Result<OracleVerdict, BudgetExceeded> {
    let n = cl.len();
    let mut gr1_holds = true;
    for fg in &c.guarantees {
        let allowed: Vec<bool> = cl.nodes.iter().map(|x| !fg.contains(x.state)).collect();
        let cycles = simple_cycles(&cl.succ, &allowed, budget)?;
        if cycle_groups(n, &cycles)
            .iter()
            .any(|grp| meets_all(cl, grp, &c.assumptions))
        {
            gr1_holds = false;
        }
    }
    let cycles = simple_cycles(&cl.succ, &vec![true; n], budget)?;
    let groups = cycle_groups(n, &cycles);
    let mut fair = vec![false; n];
    for grp in groups.iter().filter(|g| meets_all(cl, g, &c.assumptions)) {
        for &v in grp {
            fair[v] = true;
        }
    }
    let from_init = reachable(&cl.succ, cl.init());
    let nonconflicting = (0..n).filter(|&v| from_init[v]).all(|v| {
        reachable(&cl.succ, v)
            .iter()
            .zip(&fair)
            .any(|(&r, &f)| r && f)
    });
    let guarantee_play = groups.iter().any(|g| meets_all(cl, g, &c.guarantees));
    Ok(OracleVerdict {
        gr1_holds,
        nonconflicting,
        guarantee_play,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_cycles() {
        let succ = vec![vec![1], vec![0, 2], vec![2, 0]];
        let mut cycles = simple_cycles(&succ, &[true; 3], 100).unwrap();
        cycles.sort();
        assert_eq!(cycles, vec![vec![0, 1], vec![0, 1, 2], vec![2]]);
        assert_eq!(cycle_groups(3, &cycles), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn budget_is_enforced() {
        let succ: Vec<Vec<usize>> = (0..6)
            .map(|v| (0..6).filter(|&w| w != v).collect())
            .collect();
        assert_eq!(
            simple_cycles(&succ, &[true; 6], 10),
            Err(BudgetExceeded(10))
        );
    }

    #[test]
    fn disjoint_cycles_stay_separate() {
        let succ = vec![vec![1], vec![0], vec![3], vec![2]];
        let cycles = simple_cycles(&succ, &[true; 4], 100).unwrap();
        assert_eq!(cycle_groups(4, &cycles).len(), 2);
    }
}
