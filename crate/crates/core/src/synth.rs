//! One-call synthesis: validate, optionally precheck, solve, extract.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classic::{solve_3fp, ClassicResult};
use crate::graph::{validate, GR1Spec, GameGraph, StateId, Violation};
use crate::precheck::{augment_guarantees, check_inclusion};
use crate::rank::SolveStats;
use crate::set::StateSet;
use crate::strategy::{
    classic_strategy, extract_strategy_vector, ExtractError, ModedStrategy, Node,
};
use crate::vector::{solve_4fp_vector, ModedRankTable, SolveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "3fp")]
    ThreeFp,
    #[serde(rename = "4fp")]
    FourFp,
    #[serde(rename = "4fp-heuristic")]
    Heuristic,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::ThreeFp, Algorithm::FourFp, Algorithm::Heuristic];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::ThreeFp => "3fp",
            Algorithm::FourFp => "4fp",
            Algorithm::Heuristic => "4fp-heuristic",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3fp" => Ok(Algorithm::ThreeFp),
            "4fp" => Ok(Algorithm::FourFp),
            "4fp-heuristic" | "heuristic" => Ok(Algorithm::Heuristic),
            other => Err(format!(
                "unknown algorithm {other:?} (expected 3fp, 4fp or 4fp-heuristic)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precheck {
    /// Augment the guarantees with every assumption the inclusion check
    /// rejects, before running a four-nested solver.
    #[default]
    Auto,
    Off,
}

impl FromStr for Precheck {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Precheck::Auto),
            "off" => Ok(Precheck::Off),
            other => Err(format!(
                "unknown precheck mode {other:?} (expected auto or off)"
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid game: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// The fixed-point data behind a synthesized strategy.
#[derive(Clone, Debug)]
pub enum Solution {
    Classic(ClassicResult),
    Moded(ModedRankTable),
}

impl Solution {
    pub fn winning(&self) -> StateSet {
        match self {
            Solution::Classic(r) => r.winning.clone(),
            Solution::Moded(t) => t.winning(),
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            Solution::Classic(r) => &r.stats,
            Solution::Moded(t) => &t.stats,
        }
    }

    /// Rank of a closed-loop node as `[i, j]`: the moded rank for the
    /// four-nested solvers, `(r, β)` for the classical one (β one-based).
    pub fn rank_of(&self, node: Node) -> Option<[u32; 2]> {
        match self {
            Solution::Classic(r) => r
                .rank(node.a, node.state)
                .map(|(i, b)| [i as u32, b as u32 + 1]),
            Solution::Moded(t) => t.rank(node.a, node.b, node.state).map(|r| [r.i, r.j]),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub algorithm: Algorithm,
    /// The specification actually solved (augmented if the precheck failed).
    pub spec: GR1Spec,
    /// Zero-based assumption indices rejected by the precheck.
    pub precheck_failed: Vec<usize>,
    pub solution: Solution,
    /// `None` when the initial state is not winning.
    pub strategy: Option<ModedStrategy>,
}

impl Synthesis {
    pub fn realizable(&self) -> bool {
        self.strategy.is_some()
    }

    pub fn winning_initial(&self, g: &GameGraph) -> bool {
        self.solution.winning().contains(g.init())
    }
}

pub fn synthesize(
    g: &GameGraph,
    s: &GR1Spec,
    algorithm: Algorithm,
    precheck: Precheck,
) -> Result<Synthesis, SynthError> {
    let violations = validate(g, s);
    if !violations.is_empty() {
        return Err(SynthError::Invalid(violations));
    }
    let (spec, precheck_failed) = match (algorithm, precheck) {
        (Algorithm::ThreeFp, _) | (_, Precheck::Off) => (s.clone(), Vec::new()),
        _ => {
            let failed = check_inclusion(g, s);
            (augment_guarantees(s, &failed), failed)
        }
    };
    let c = spec.conditions(g);
    let (solution, strategy) = match algorithm {
        Algorithm::ThreeFp => {
            let res = solve_3fp(g, &c);
            let strat = winning(&res.winning, g.init())
                .then(|| classic_strategy(g, &res))
                .transpose()?;
            (Solution::Classic(res), strat)
        }
        Algorithm::FourFp | Algorithm::Heuristic => {
            let mrt = solve_4fp_vector(g, &c, algorithm == Algorithm::Heuristic)?;
            let strat = winning(&mrt.z[0], g.init())
                .then(|| extract_strategy_vector(g, &mrt))
                .transpose()?;
            (Solution::Moded(mrt), strat)
        }
    };
    Ok(Synthesis {
        algorithm,
        spec,
        precheck_failed,
        solution,
        strategy,
    })
}

fn winning(set: &StateSet, q0: StateId) -> bool {
    set.contains(q0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ex1_depends_on_precheck() {
        let (g, s) = fixtures::ex1();
        let raw = synthesize(&g, &s, Algorithm::FourFp, Precheck::Off).unwrap();
        assert!(raw.realizable());
        let aug = synthesize(&g, &s, Algorithm::FourFp, Precheck::Auto).unwrap();
        assert_eq!(aug.precheck_failed, vec![0]);
        assert_eq!(aug.spec.guarantees.len(), 2);
        assert!(aug.realizable());
        let classic = synthesize(&g, &s, Algorithm::ThreeFp, Precheck::Auto).unwrap();
        assert!(classic.realizable());
        assert!(classic.precheck_failed.is_empty());
    }

    #[test]
    fn parses_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>(), Ok(a));
        }
        assert!("5fp".parse::<Algorithm>().is_err());
    }
}
