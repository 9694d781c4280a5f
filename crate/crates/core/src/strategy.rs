//! Finite-memory strategies as explicit Mealy machines over `(state, a, b)`.
//!
//! A [`ModedStrategy`] lists, for every reachable system node, the successor
//! and next mode, and for every reachable environment node and successor, the
//! mode the system adopts after that move. Mode indices are zero-based in
//! memory and one-based in files.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classic::ClassicResult;
use crate::graph::{GameGraph, Player, StateId};
use crate::singleton::MemorylessStrategy;
use crate::vector::{comply_mode, initial_mode, sys_choice, ModedRankTable};

/// A closed-loop position: arena state plus the current mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub state: StateId,
    pub a: usize,
    pub b: usize,
}

impl Node {
    pub fn new(state: StateId, a: usize, b: usize) -> Self {
        Node { state, a, b }
    }
}

/// Anything that can drive the system side of a closed loop.
pub trait Controller {
    fn initial(&self) -> Option<Node>;
    /// The system's answer at a system-owned node.
    fn sys_move(&self, at: Node) -> Option<Node>;
    /// The node reached when the environment moves from `at` to `to`.
    fn env_move(&self, at: Node, to: StateId) -> Option<Node>;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("initial state is not winning")]
    InitialLosing,
    #[error("no admissible system move at state {state} in mode ({a},{b})", a = .node.a + 1, b = .node.b + 1)]
    NoMove { state: String, node: Node },
    #[error("no mode update for the move from {from} to {to}")]
    NoUpdate { from: String, to: String },
}

/// An explicit Mealy machine restricted to reachable nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModedStrategy {
    pub n: usize,
    pub m: usize,
    pub init: Node,
    pub sys: BTreeMap<Node, Node>,
    pub env: BTreeMap<(Node, StateId), Node>,
}

impl Controller for ModedStrategy {
    fn initial(&self) -> Option<Node> {
        Some(self.init)
    }

    fn sys_move(&self, at: Node) -> Option<Node> {
        self.sys.get(&at).copied()
    }

    fn env_move(&self, at: Node, to: StateId) -> Option<Node> {
        self.env.get(&(at, to)).copied()
    }
}

impl Controller for (&GameGraph, &MemorylessStrategy) {
    fn initial(&self) -> Option<Node> {
        Some(Node::new(self.0.init(), 0, 0))
    }

    fn sys_move(&self, at: Node) -> Option<Node> {
        self.1.moves.get(&at.state).map(|&t| Node::new(t, 0, 0))
    }

    fn env_move(&self, _at: Node, to: StateId) -> Option<Node> {
        Some(Node::new(to, 0, 0))
    }
}

impl ModedStrategy {
    /// Explores `ctrl` from its initial node and records every reachable
    /// decision.
    pub fn from_controller(
        g: &GameGraph,
        n: usize,
        m: usize,
        ctrl: &dyn Controller,
    ) -> Result<Self, ExtractError> {
        let init = ctrl.initial().ok_or(ExtractError::InitialLosing)?;
        let mut sys = BTreeMap::new();
        let mut env = BTreeMap::new();
        let mut seen = std::collections::HashSet::from([init]);
        let mut queue = VecDeque::from([init]);
        while let Some(node) = queue.pop_front() {
            let next: Vec<Node> = match g.owner(node.state) {
                Player::Sys => {
                    let to = ctrl.sys_move(node).ok_or_else(|| ExtractError::NoMove {
                        state: g.id(node.state).to_string(),
                        node,
                    })?;
                    sys.insert(node, to);
                    vec![to]
                }
                Player::Env => {
                    let mut out = Vec::with_capacity(g.succ(node.state).len());
                    for &t in g.succ(node.state) {
                        let to = ctrl
                            .env_move(node, t)
                            .ok_or_else(|| ExtractError::NoUpdate {
                                from: g.id(node.state).to_string(),
                                to: g.id(t).to_string(),
                            })?;
                        env.insert((node, t), to);
                        out.push(to);
                    }
                    out
                }
            };
            for to in next {
                if seen.insert(to) {
                    queue.push_back(to);
                }
            }
        }
        Ok(ModedStrategy {
            n,
            m,
            init,
            sys,
            env,
        })
    }

    /// Number of reachable environment nodes, i.e. one per game round.
    pub fn state_count(&self) -> usize {
        let mut nodes: Vec<Node> = self.env.keys().map(|&(node, _)| node).collect();
        nodes.dedup();
        nodes.len()
    }
}

struct VectorController<'a> {
    g: &'a GameGraph,
    mrt: &'a ModedRankTable,
}

impl Controller for VectorController<'_> {
    fn initial(&self) -> Option<Node> {
        let q0 = self.g.init();
        initial_mode(self.mrt, q0).map(|(a, b)| Node::new(q0, a, b))
    }

    fn sys_move(&self, at: Node) -> Option<Node> {
        sys_choice(self.g, self.mrt, (at.state, at.a, at.b)).map(|(t, a, b)| Node::new(t, a, b))
    }

    fn env_move(&self, at: Node, to: StateId) -> Option<Node> {
        comply_mode(self.mrt, (at.state, at.a, at.b), to)
            .ok()
            .map(|(a, b)| Node::new(to, a, b))
    }
}

/// Builds the moded strategy of the vector fixed point from `q0`.
pub fn extract_strategy_vector(
    g: &GameGraph,
    mrt: &ModedRankTable,
) -> Result<ModedStrategy, ExtractError> {
    ModedStrategy::from_controller(g, mrt.n, mrt.m, &VectorController { g, mrt })
}

struct ClassicController<'a> {
    g: &'a GameGraph,
    res: &'a ClassicResult,
}

impl Controller for ClassicController<'_> {
    fn initial(&self) -> Option<Node> {
        let q0 = self.g.init();
        self.res.winning.contains(q0).then(|| Node::new(q0, 0, 0))
    }

    fn sys_move(&self, at: Node) -> Option<Node> {
        self.res
            .moves
            .get(&(at.state, at.a))
            .map(|&(t, a)| Node::new(t, a, 0))
    }

    fn env_move(&self, at: Node, to: StateId) -> Option<Node> {
        let a = if self.res.guarantees[at.a].contains(at.state) {
            self.res.next_a(at.a)
        } else {
            at.a
        };
        Some(Node::new(to, a, 0))
    }
}

/// Builds the reachable part of the classical strategy; the assumption index
/// is unused and fixed to the first one.
pub fn classic_strategy(g: &GameGraph, res: &ClassicResult) -> Result<ModedStrategy, ExtractError> {
    ModedStrategy::from_controller(g, res.n, res.m, &ClassicController { g, res })
}

/// Embeds a memoryless strategy with the constant mode `(1,1)`.
pub fn memoryless_strategy(
    g: &GameGraph,
    strat: &MemorylessStrategy,
    n: usize,
    m: usize,
) -> Result<ModedStrategy, ExtractError> {
    ModedStrategy::from_controller(g, n, m, &(g, strat))
}

#[derive(Debug, Error)]
pub enum StrategyFileError {
    #[error("strategy syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("strategy references unknown state {0}")]
    UnknownState(String),
    #[error("strategy mode ({a},{b}) outside 1..{n} x 1..{m}")]
    BadMode {
        a: usize,
        b: usize,
        n: usize,
        m: usize,
    },
    #[error("unsupported strategy kind {0}")]
    Kind(String),
}

/// Serde view of a `.gr1strat.json` file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyDoc {
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub init: NodeDoc,
    pub moves: Vec<MoveDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub state: String,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveDoc {
    pub state: String,
    pub a: usize,
    pub b: usize,
    pub to: String,
    pub a2: usize,
    pub b2: usize,
}

impl NodeDoc {
    pub fn from_node(g: &GameGraph, node: Node) -> Self {
        NodeDoc {
            state: g.id(node.state).to_string(),
            a: node.a + 1,
            b: node.b + 1,
        }
    }
}

impl StrategyDoc {
    /// Moves are ordered by `(state, a, b)`, then by successor.
    pub fn from_strategy(g: &GameGraph, s: &ModedStrategy) -> Self {
        let mut rows: Vec<(Node, Node)> = s.sys.iter().map(|(&k, &v)| (k, v)).collect();
        rows.extend(s.env.iter().map(|(&(k, _), &v)| (k, v)));
        rows.sort_by_key(|&(k, v)| (k, v.state));
        let moves = rows
            .into_iter()
            .map(|(k, v)| MoveDoc {
                state: g.id(k.state).to_string(),
                a: k.a + 1,
                b: k.b + 1,
                to: g.id(v.state).to_string(),
                a2: v.a + 1,
                b2: v.b + 1,
            })
            .collect();
        StrategyDoc {
            kind: "moded".to_string(),
            n: s.n,
            m: s.m,
            init: NodeDoc::from_node(g, s.init),
            moves,
        }
    }

    pub fn into_strategy(self, g: &GameGraph) -> Result<ModedStrategy, StrategyFileError> {
        if self.kind != "moded" {
            return Err(StrategyFileError::Kind(self.kind));
        }
        let (n, m) = (self.n.max(1), self.m.max(1));
        let state = |id: &str| {
            g.lookup(id)
                .ok_or_else(|| StrategyFileError::UnknownState(id.to_string()))
        };
        let node = |id: &str, a: usize, b: usize| {
            if a == 0 || b == 0 || a > n || b > m {
                return Err(StrategyFileError::BadMode { a, b, n, m });
            }
            Ok(Node::new(state(id)?, a - 1, b - 1))
        };
        let init = node(&self.init.state, self.init.a, self.init.b)?;
        let mut sys = BTreeMap::new();
        let mut env = BTreeMap::new();
        for mv in &self.moves {
            let from = node(&mv.state, mv.a, mv.b)?;
            let to = node(&mv.to, mv.a2, mv.b2)?;
            match g.owner(from.state) {
                Player::Sys => {
                    sys.insert(from, to);
                }
                Player::Env => {
                    env.insert((from, to.state), to);
                }
            }
        }
        Ok(ModedStrategy {
            n: self.n,
            m: self.m,
            init,
            sys,
            env,
        })
    }
}

pub fn serialize_strategy(g: &GameGraph, s: &ModedStrategy) -> String {
    let doc = StrategyDoc::from_strategy(g, s);
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"kind\": {},\n", json(&doc.kind)));
    out.push_str(&format!("  \"n\": {},\n  \"m\": {},\n", doc.n, doc.m));
    out.push_str(&format!("  \"init\": {},\n", json(&doc.init)));
    if doc.moves.is_empty() {
        out.push_str("  \"moves\": []\n");
    } else {
        let lines: Vec<String> = doc.moves.iter().map(json).collect();
        out.push_str("  \"moves\": [\n    ");
        out.push_str(&lines.join(",\n    "));
        out.push_str("\n  ]\n");
    }
    out.push_str("}\n");
    out
}

pub fn parse_strategy(g: &GameGraph, text: &str) -> Result<ModedStrategy, StrategyFileError> {
    let doc: StrategyDoc = serde_json::from_str(text).map_err(|e| StrategyFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    doc.into_strategy(g)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}
