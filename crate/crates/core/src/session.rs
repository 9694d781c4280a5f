//! Interactive play against a strategy, with the human as environment.
//!
//! A session sits at an environment node between rounds. Each environment
//! move is answered at once by the strategy's system move, and every visited
//! state bumps the visit counters of the assumption and guarantee sets that
//! contain it.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Conditions, GR1Spec, GameGraph, Player};
use crate::strategy::{Controller, ModedStrategy, Node};
use crate::synth::Solution;
use crate::vector::solve_4fp_vector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mode {
    pub a: usize,
    pub b: usize,
}

/// What an environment player sees between rounds. Modes are one-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub state: String,
    pub mode: Mode,
    pub rank: Option<[u32; 2]>,
    pub satisfied_assumptions: Vec<u64>,
    pub satisfied_guarantees: Vec<u64>,
    pub legal_env_moves: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SysMove {
    pub from: String,
    pub to: String,
    pub mode: Mode,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SessionError {
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("illegal environment move to {to}; legal moves: {}", .legal.join(", "))]
    IllegalMove { to: String, legal: Vec<String> },
    #[error("strategy has no answer at state {state} in mode ({a},{b})")]
    StrategyGap { state: String, a: usize, b: usize },
    #[error("initial state {0} is not an environment state")]
    InitialNotEnv(String),
}

pub struct Session {
    game: GameGraph,
    conditions: Conditions,
    strategy: ModedStrategy,
    solution: Solution,
    at: Node,
    assumption_visits: Vec<u64>,
    guarantee_visits: Vec<u64>,
}

impl Session {
    /// Starts at the strategy's initial node. Ranks come from `solution`;
    /// without one they are the four-nested moded ranks of `spec`.
    pub fn new(
        game: GameGraph,
        spec: &GR1Spec,
        strategy: ModedStrategy,
        solution: Option<Solution>,
    ) -> Result<Self, SessionError> {
        let conditions = spec.conditions(&game);
        if game.owner(strategy.init.state) != Player::Env {
            return Err(SessionError::InitialNotEnv(
                game.id(strategy.init.state).to_string(),
            ));
        }
        let solution = match solution {
            Some(s) => s,
            None => Solution::Moded(
                solve_4fp_vector(&game, &conditions, false).expect("full solver accepts any shape"),
            ),
        };
        let mut session = Session {
            assumption_visits: vec![0; conditions.m()],
            guarantee_visits: vec![0; conditions.n()],
            at: strategy.init,
            game,
            conditions,
            strategy,
            solution,
        };
        session.visit(session.at);
        Ok(session)
    }

    pub fn game(&self) -> &GameGraph {
        &self.game
    }

    pub fn node(&self) -> Node {
        self.at
    }

    fn visit(&mut self, node: Node) {
        for (count, set) in self
            .assumption_visits
            .iter_mut()
            .zip(&self.conditions.assumptions)
        {
            *count += set.contains(node.state) as u64;
        }
        for (count, set) in self
            .guarantee_visits
            .iter_mut()
            .zip(&self.conditions.guarantees)
        {
            *count += set.contains(node.state) as u64;
        }
    }

    pub fn legal_env_moves(&self) -> Vec<String> {
        self.game
            .succ(self.at.state)
            .iter()
            .map(|&t| self.game.id(t).to_string())
            .collect()
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            state: self.game.id(self.at.state).to_string(),
            mode: Mode {
                a: self.at.a + 1,
                b: self.at.b + 1,
            },
            rank: self.solution.rank_of(self.at),
            satisfied_assumptions: self.assumption_visits.clone(),
            satisfied_guarantees: self.guarantee_visits.clone(),
            legal_env_moves: self.legal_env_moves(),
        }
    }

    /// Plays the environment move to `to` and the strategy's answer. On error
    /// the session does not advance.
    pub fn env_move(&mut self, to: &str) -> Result<SysMove, SessionError> {
        let target = self
            .game
            .lookup(to)
            .ok_or_else(|| SessionError::UnknownState(to.to_string()))?;
        if !self.game.succ(self.at.state).contains(&target) {
            return Err(SessionError::IllegalMove {
                to: to.to_string(),
                legal: self.legal_env_moves(),
            });
        }
        let gap = |n: Node| SessionError::StrategyGap {
            state: self.game.id(n.state).to_string(),
            a: n.a + 1,
            b: n.b + 1,
        };
        let mid = self
            .strategy
            .env_move(self.at, target)
            .ok_or_else(|| gap(self.at))?;
        let next = self.strategy.sys_move(mid).ok_or_else(|| gap(mid))?;
        self.visit(mid);
        self.visit(next);
        self.at = next;
        Ok(SysMove {
            from: self.game.id(mid.state).to_string(),
            to: self.game.id(next.state).to_string(),
            mode: Mode {
                a: next.a + 1,
                b: next.b + 1,
            },
        })
    }
}
