//! Game graphs, GR(1) conditions and structural validation.

use std::collections::HashMap;
use std::fmt;

use crate::set::StateSet;

/// Dense state index in `0..|Q|`, assigned in declaration order.
pub type StateId = usize;

/// The two players: the environment owns `Q⁰`, the system owns `Q¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Env = 0,
    Sys = 1,
}

impl Player {
    pub fn from_tag(tag: u64) -> Option<Player> {
        match tag {
            0 => Some(Player::Env),
            1 => Some(Player::Sys),
            _ => None,
        }
    }

    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Env => Player::Sys,
            Player::Sys => Player::Env,
        }
    }
}

/// A bipartite two-player arena.
///
/// Successor lists are kept sorted and duplicate-free. The structural
/// invariants (alternation, totality, env-owned initial state) are not
/// enforced on construction; use [`validate`] before solving.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameGraph {
    ids: Vec<String>,
    owner: Vec<Player>,
    succ: Vec<Vec<StateId>>,
    pred: Vec<Vec<StateId>>,
    init: StateId,
    index: HashMap<String, StateId>,
}

impl GameGraph {
    /// Builds a graph from state names, owners and an edge list.
    ///
    /// Edges whose endpoints are out of range are dropped.
    pub fn new<E>(ids: Vec<String>, owner: Vec<Player>, edges: E, init: StateId) -> Self
    where
        E: IntoIterator<Item = (StateId, StateId)>,
    {
        assert_eq!(ids.len(), owner.len(), "one owner per state");
        let n = ids.len();
        let mut succ = vec![Vec::new(); n];
        for (s, t) in edges {
            if s < n && t < n {
                succ[s].push(t);
            }
        }
        let mut pred = vec![Vec::new(); n];
        for (s, list) in succ.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for &t in list.iter() {
                pred[t].push(s);
            }
        }
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        GameGraph {
            ids,
            owner,
            succ,
            pred,
            init,
            index,
        }
    }

    /// Builds a graph from `(name, owner)` pairs and named edges.
    ///
    /// Panics on unknown names; intended for fixtures and tests.
    pub fn from_named(states: &[(&str, Player)], edges: &[(&str, &str)], init: &str) -> Self {
        let ids: Vec<String> = states.iter().map(|(id, _)| id.to_string()).collect();
        let owner = states.iter().map(|&(_, p)| p).collect();
        let pos = |name: &str| {
            ids.iter()
                .position(|id| id == name)
                .unwrap_or_else(|| panic!("unknown state {name}"))
        };
        let edges: Vec<_> = edges.iter().map(|&(s, t)| (pos(s), pos(t))).collect();
        let init = pos(init);
        GameGraph::new(ids, owner, edges, init)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn init(&self) -> StateId {
        self.init
    }

    pub fn owner(&self, q: StateId) -> Player {
        self.owner[q]
    }

    pub fn succ(&self, q: StateId) -> &[StateId] {
        &self.succ[q]
    }

    pub fn pred(&self, q: StateId) -> &[StateId] {
        &self.pred[q]
    }

    pub fn id(&self, q: StateId) -> &str {
        &self.ids[q]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn lookup(&self, id: &str) -> Option<StateId> {
        self.index.get(id).copied()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All edges in ascending `(source, target)` index order.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&t| (s, t)))
    }

    pub fn owned_by(&self, p: Player) -> StateSet {
        StateSet::from_states(self.len(), self.states().filter(|&q| self.owner[q] == p))
    }

    /// States reachable from `from` (inclusive).
    pub fn reachable_from(&self, from: StateId) -> StateSet {
        let mut seen = StateSet::empty(self.len());
        let mut stack = vec![from];
        seen.insert(from);
        while let Some(q) = stack.pop() {
            for &t in &self.succ[q] {
                if seen.insert(t) {
                    stack.push(t);
                }
            }
        }
        seen
    }

    fn name_or_index(&self, q: StateId) -> String {
        self.ids.get(q).cloned().unwrap_or_else(|| q.to_string())
    }
}

/// Assumption sets `F_A^1..m` and guarantee sets `F_G^1..n`, as sorted
/// duplicate-free state lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GR1Spec {
    pub assumptions: Vec<Vec<StateId>>,
    pub guarantees: Vec<Vec<StateId>>,
}

impl GR1Spec {
    pub fn new(assumptions: Vec<Vec<StateId>>, guarantees: Vec<Vec<StateId>>) -> Self {
        let canon = |sets: Vec<Vec<StateId>>| {
            sets.into_iter()
                .map(|mut s| {
                    s.sort_unstable();
                    s.dedup();
                    s
                })
                .collect()
        };
        GR1Spec {
            assumptions: canon(assumptions),
            guarantees: canon(guarantees),
        }
    }

    /// Builds a spec from state names; panics on unknown names.
    pub fn from_named(g: &GameGraph, assumptions: &[&[&str]], guarantees: &[&[&str]]) -> Self {
        let resolve = |sets: &[&[&str]]| {
            sets.iter()
                .map(|s| {
                    s.iter()
                        .map(|id| g.lookup(id).unwrap_or_else(|| panic!("unknown state {id}")))
                        .collect()
                })
                .collect()
        };
        GR1Spec::new(resolve(assumptions), resolve(guarantees))
    }

    /// Converts the lists to state sets over `g`, replacing an empty family by
    /// the single set `Q` (an empty conjunction of Büchi conditions is true).
    pub fn conditions(&self, g: &GameGraph) -> Conditions {
        let to_sets = |sets: &[Vec<StateId>]| -> Vec<StateSet> {
            if sets.is_empty() {
                vec![StateSet::full(g.len())]
            } else {
                sets.iter()
                    .map(|s| {
                        StateSet::from_states(g.len(), s.iter().copied().filter(|&q| q < g.len()))
                    })
                    .collect()
            }
        };
        Conditions {
            assumptions: to_sets(&self.assumptions),
            guarantees: to_sets(&self.guarantees),
        }
    }
}

/// Normalized Büchi families used by the solvers; both lists are non-empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub assumptions: Vec<StateSet>,
    pub guarantees: Vec<StateSet>,
}

impl Conditions {
    pub fn n(&self) -> usize {
        self.guarantees.len()
    }

    pub fn m(&self) -> usize {
        self.assumptions.len()
    }
}

/// One violated structural invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoSuccessor {
        state: String,
    },
    Alternation {
        from: String,
        to: String,
        owner: Player,
    },
    InitOutOfRange {
        init: StateId,
    },
    InitNotEnv {
        init: String,
    },
    UnknownAssumptionState {
        set: usize,
        state: StateId,
    },
    UnknownGuaranteeState {
        set: usize,
        state: StateId,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoSuccessor { state } => write!(f, "state {state} has no successor"),
            Violation::Alternation { from, to, owner } => {
                let who = match owner {
                    Player::Env => "environment",
                    Player::Sys => "system",
                };
                write!(
                    f,
                    "alternation violated: edge {from} -> {to} joins two {who} states"
                )
            }
            Violation::InitOutOfRange { init } => write!(f, "initial state {init} does not exist"),
            Violation::InitNotEnv { init } => {
                write!(f, "initial state {init} is not environment-owned")
            }
            Violation::UnknownAssumptionState { set, state } => {
                write!(f, "assumption set {set} references unknown state {state}")
            }
            Violation::UnknownGuaranteeState { set, state } => {
                write!(f, "guarantee set {set} references unknown state {state}")
            }
        }
    }
}

/// Reports every violated invariant of `g` and `s`; empty means valid.
pub fn validate(g: &GameGraph, s: &GR1Spec) -> Vec<Violation> {
    let mut out = Vec::new();
    for q in g.states() {
        if g.succ(q).is_empty() {
            out.push(Violation::NoSuccessor {
                state: g.id(q).to_string(),
            });
        }
        for &t in g.succ(q) {
            if g.owner(q) == g.owner(t) {
                out.push(Violation::Alternation {
                    from: g.id(q).to_string(),
                    to: g.id(t).to_string(),
                    owner: g.owner(q),
                });
            }
        }
    }
    if g.init() >= g.len() {
        out.push(Violation::InitOutOfRange { init: g.init() });
    } else if g.owner(g.init()) != Player::Env {
        out.push(Violation::InitNotEnv {
            init: g.name_or_index(g.init()),
        });
    }
    for (k, set) in s.assumptions.iter().enumerate() {
        for &q in set.iter().filter(|&&q| q >= g.len()) {
            out.push(Violation::UnknownAssumptionState {
                set: k + 1,
                state: q,
            });
        }
    }
    for (k, set) in s.guarantees.iter().enumerate() {
        for &q in set.iter().filter(|&&q| q >= g.len()) {
            out.push(Violation::UnknownGuaranteeState {
                set: k + 1,
                state: q,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ex0_is_valid() {
        let (g, s) = fixtures::ex0();
        assert!(validate(&g, &s).is_empty());
        assert_eq!(g.len(), 2);
        assert_eq!((s.assumptions.len(), s.guarantees.len()), (1, 1));
    }

    #[test]
    fn missing_successor_is_reported() {
        let g = GameGraph::from_named(
            &[("a", Player::Env), ("b", Player::Sys)],
            &[("a", "b")],
            "a",
        );
        let s = GR1Spec::from_named(&g, &[&["a"]], &[&["b"]]);
        let v: Vec<String> = validate(&g, &s).iter().map(ToString::to_string).collect();
        assert_eq!(v, ["state b has no successor"]);
    }

    #[test]
    fn unknown_assumption_state_is_reported() {
        let (g, mut s) = fixtures::ex1();
        s.assumptions[0].push(99);
        let v: Vec<String> = validate(&g, &s).iter().map(ToString::to_string).collect();
        assert_eq!(v, ["assumption set 1 references unknown state 99"]);
    }

    #[test]
    fn ex1_has_canonical_successors() {
        let (g, s) = fixtures::ex1();
        assert!(validate(&g, &s).is_empty());
        let a0 = g.lookup("a0").unwrap();
        let names: Vec<&str> = g.succ(a0).iter().map(|&t| g.id(t)).collect();
        assert_eq!(names, ["b0", "b1"]);
        let b1 = g.lookup("b1").unwrap();
        let names: Vec<&str> = g.succ(b1).iter().map(|&t| g.id(t)).collect();
        assert_eq!(names, ["a0", "a1"]);
    }

    #[test]
    fn empty_families_normalize_to_full_set() {
        let (g, _) = fixtures::ex0();
        let c = GR1Spec::default().conditions(&g);
        assert_eq!(c.assumptions, vec![StateSet::full(2)]);
        assert_eq!(c.guarantees, vec![StateSet::full(2)]);
    }
}
