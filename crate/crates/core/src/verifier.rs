//! Closed-loop construction and SCC-based checks.
//!
//! The closed loop of a strategy is the graph of reachable nodes
//! `(state, a, b)`: system nodes have the single edge chosen by the strategy,
//! environment nodes keep every arena move. Its infinite paths are exactly
//! the plays compliant with the strategy.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Conditions, GameGraph, Player, StateId};
use crate::scc::{is_nontrivial, tarjan};
use crate::set::StateSet;
use crate::strategy::{Controller, Node, NodeDoc};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("strategy has no initial node")]
    NoInitial,
    #[error("reachable system state {state} in mode ({a},{b}) is outside the strategy domain")]
    Uncovered { state: String, a: usize, b: usize },
    #[error("strategy move from {from} to {to} is not an edge of the game")]
    IllegalMove { from: String, to: String },
    #[error("no mode update for the environment move from {from} to {to}")]
    NoUpdate { from: String, to: String },
}

#[derive(Clone, Debug)]
pub struct ClosedLoopGraph {
    pub nodes: Vec<Node>,
    pub succ: Vec<Vec<usize>>,
    index: HashMap<Node, usize>,
}

impl ClosedLoopGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn init(&self) -> usize {
        0
    }

    pub fn index_of(&self, node: Node) -> Option<usize> {
        self.index.get(&node).copied()
    }

    /// Nodes whose arena state lies in `set`.
    pub fn project(&self, set: &StateSet) -> Vec<bool> {
        self.nodes.iter().map(|n| set.contains(n.state)).collect()
    }

    /// Builds a closed loop directly from nodes and edges; node 0 is initial.
    pub fn from_parts(nodes: Vec<Node>, succ: Vec<Vec<usize>>) -> Self {
        let index = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        ClosedLoopGraph { nodes, succ, index }
    }
}

/// Explores the product of `g` and `ctrl` from the initial node.
pub fn build_closed_loop(
    g: &GameGraph,
    ctrl: &dyn Controller,
) -> Result<ClosedLoopGraph, VerifyError> {
    let init = ctrl.initial().ok_or(VerifyError::NoInitial)?;
    let mut nodes = vec![init];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index = HashMap::from([(init, 0)]);
    let mut queue = VecDeque::from([0]);
    let name = |q: StateId| g.id(q).to_string();
    while let Some(v) = queue.pop_front() {
        let node = nodes[v];
        let targets = match g.owner(node.state) {
            Player::Sys => {
                let to = ctrl.sys_move(node).ok_or_else(|| VerifyError::Uncovered {
                    state: name(node.state),
                    a: node.a + 1,
                    b: node.b + 1,
                })?;
                if !g.succ(node.state).contains(&to.state) {
                    return Err(VerifyError::IllegalMove {
                        from: name(node.state),
                        to: name(to.state),
                    });
                }
                vec![to]
            }
            Player::Env => g
                .succ(node.state)
                .iter()
                .map(|&t| {
                    ctrl.env_move(node, t).ok_or_else(|| VerifyError::NoUpdate {
                        from: name(node.state),
                        to: name(t),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        for to in targets {
            let w = *index.entry(to).or_insert_with(|| {
                nodes.push(to);
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            });
            if !succ[v].contains(&w) {
                succ[v].push(w);
            }
        }
    }
    Ok(ClosedLoopGraph { nodes, succ, index })
}

/// A finite witness of an infinite play: `stem` then `cycle` repeated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub stem: Vec<Node>,
    pub cycle: Vec<Node>,
}

#[derive(Serialize)]
struct LassoDoc {
    stem: Vec<NodeDoc>,
    cycle: Vec<NodeDoc>,
}

impl Lasso {
    pub fn to_json(&self, g: &GameGraph) -> serde_json::Value {
        let conv = |v: &[Node]| v.iter().map(|&n| NodeDoc::from_node(g, n)).collect();
        serde_json::to_value(LassoDoc {
            stem: conv(&self.stem),
            cycle: conv(&self.cycle),
        })
        .expect("plain data serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gr1Verdict {
    pub holds: bool,
    pub counterexample: Option<Lasso>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonconflictVerdict {
    pub holds: bool,
    pub stuck: Option<Node>,
}

/// Nontrivial SCCs of the subgraph induced by `active`.
fn components(cl: &ClosedLoopGraph, active: &[bool]) -> Vec<Vec<usize>> {
    tarjan(&cl.succ, active)
        .into_iter()
        .filter(|c| is_nontrivial(&cl.succ, c))
        .collect()
}

fn hits_all(cl: &ClosedLoopGraph, comp: &[usize], sets: &[StateSet]) -> bool {
    sets.iter()
        .all(|s| comp.iter().any(|&v| s.contains(cl.nodes[v].state)))
}

/// Whether every compliant play that visits all assumption sets infinitely
/// often also visits all guarantee sets infinitely often.
///
/// A violation is a strongly connected set of nodes that avoids some
/// `F_G^a` and meets every `F_A^b`.
pub fn check_gr1_holds(cl: &ClosedLoopGraph, c: &Conditions) -> Gr1Verdict {
    for fg in &c.guarantees {
        let active: Vec<bool> = cl.nodes.iter().map(|n| !fg.contains(n.state)).collect();
        if let Some(comp) = components(cl, &active)
            .into_iter()
            .find(|comp| hits_all(cl, comp, &c.assumptions))
        {
            return Gr1Verdict {
                holds: false,
                counterexample: Some(lasso_through(cl, &comp, &c.assumptions)),
            };
        }
    }
    Gr1Verdict {
        holds: true,
        counterexample: None,
    }
}

/// Whether from every reachable node the environment can still satisfy all
/// its assumptions. The stuck node is the reachable node closest to the
/// initial node from which no assumption-satisfying continuation exists.
pub fn check_nonconflicting(cl: &ClosedLoopGraph, assumptions: &[StateSet]) -> NonconflictVerdict {
    let all = vec![true; cl.len()];
    let mut good = vec![false; cl.len()];
    for comp in components(cl, &all) {
        if hits_all(cl, &comp, assumptions) {
            for v in comp {
                good[v] = true;
            }
        }
    }
    let can_reach = backward_closure(cl, &good);
    let stuck = bfs_order(cl).into_iter().find(|&v| !can_reach[v]);
    NonconflictVerdict {
        holds: stuck.is_none(),
        stuck: stuck.map(|v| cl.nodes[v]),
    }
}

/// The strategy prevents the environment from meeting its assumptions on
/// some reachable prefix.
pub fn detect_falsifying(cl: &ClosedLoopGraph, assumptions: &[StateSet]) -> bool {
    !check_nonconflicting(cl, assumptions).holds
}

/// Whether some compliant play visits every guarantee set infinitely often.
pub fn has_guarantee_play(cl: &ClosedLoopGraph, guarantees: &[StateSet]) -> bool {
    let all = vec![true; cl.len()];
    components(cl, &all)
        .iter()
        .any(|comp| hits_all(cl, comp, guarantees))
}

fn backward_closure(cl: &ClosedLoopGraph, targets: &[bool]) -> Vec<bool> {
    let mut pred = vec![Vec::new(); cl.len()];
    for (v, succ) in cl.succ.iter().enumerate() {
        for &w in succ {
            pred[w].push(v);
        }
    }
    let mut seen = targets.to_vec();
    let mut stack: Vec<usize> = (0..cl.len()).filter(|&v| targets[v]).collect();
    while let Some(v) = stack.pop() {
        for &p in &pred[v] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

fn bfs_order(cl: &ClosedLoopGraph) -> Vec<usize> {
    let mut seen = vec![false; cl.len()];
    let mut order = Vec::with_capacity(cl.len());
    let mut queue = VecDeque::from([cl.init()]);
    seen[cl.init()] = true;
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &cl.succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    order
}

/// Shortest path from `from` to any node satisfying `goal`, moving only
/// through `allowed` nodes; returns the nodes after `from`.
fn shortest_path(
    cl: &ClosedLoopGraph,
    from: usize,
    allowed: &dyn Fn(usize) -> bool,
    goal: &dyn Fn(usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent = vec![usize::MAX; cl.len()];
    let mut queue = VecDeque::from([from]);
    let mut seen = vec![false; cl.len()];
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &cl.succ[v] {
            if !allowed(w) {
                continue;
            }
            if goal(w) {
                let mut path = vec![w];
                let mut cur = v;
                while cur != from {
                    path.push(cur);
                    cur = parent[cur];
                }
                path.reverse();
                return Some(path);
            }
            if !seen[w] {
                seen[w] = true;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// A lasso whose cycle stays in `comp` and visits every set in `sets`.
fn lasso_through(cl: &ClosedLoopGraph, comp: &[usize], sets: &[StateSet]) -> Lasso {
    let inside: Vec<bool> = {
        let mut m = vec![false; cl.len()];
        for &v in comp {
            m[v] = true;
        }
        m
    };
    let entry = if inside[cl.init()] {
        cl.init()
    } else {
        *shortest_path(cl, cl.init(), &|_| true, &|w| inside[w])
            .expect("components are reachable")
            .last()
            .unwrap()
    };
    let mut stem = vec![cl.init()];
    if entry != cl.init() {
        stem.extend(shortest_path(cl, cl.init(), &|_| true, &|w| w == entry).unwrap());
    }
    stem.pop();
    let mut cycle = vec![entry];
    let mut cur = entry;
    for set in sets {
        if cycle.iter().any(|&v| set.contains(cl.nodes[v].state)) {
            continue;
        }
        let path = shortest_path(cl, cur, &|w| inside[w], &|w| {
            set.contains(cl.nodes[w].state)
        })
        .expect("component meets every set");
        cur = *path.last().unwrap();
        cycle.extend(path);
    }
    let back = shortest_path(cl, cur, &|w| inside[w], &|w| w == entry).expect("strongly connected");
    cycle.extend(&back[..back.len() - 1]);
    Lasso {
        stem: stem.into_iter().map(|v| cl.nodes[v]).collect(),
        cycle: cycle.into_iter().map(|v| cl.nodes[v]).collect(),
    }
}

/// Combined verdict of all closed-loop checks.
#[derive(Clone, Debug)]
pub struct Report {
    pub gr1: Gr1Verdict,
    pub nonconflicting: NonconflictVerdict,
    pub falsifying: bool,
    pub guarantee_play: bool,
    pub nodes: usize,
}

pub fn verify(cl: &ClosedLoopGraph, c: &Conditions) -> Report {
    let nonconflicting = check_nonconflicting(cl, &c.assumptions);
    Report {
        gr1: check_gr1_holds(cl, c),
        falsifying: !nonconflicting.holds,
        nonconflicting,
        guarantee_play: has_guarantee_play(cl, &c.guarantees),
        nodes: cl.len(),
    }
}
