//! Ranks induced by the iterates of the four-nested fixed point.

use std::fmt;

use serde::Serialize;

/// `(i, j)`: the state entered the winning set in the `i`-th iteration over
/// `Y` and the `j`-th iteration over `W`. Ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Rank {
    pub i: u32,
    pub j: u32,
}

impl Rank {
    pub const TOP: Rank = Rank { i: 1, j: 1 };

    pub fn new(i: u32, j: u32) -> Self {
        Rank { i, j }
    }

    pub fn class(self) -> RankClass {
        match (self.i, self.j) {
            (1, 1) => RankClass::D,
            (i, 1) => RankClass::E(i),
            (i, j) => RankClass::R(i, j),
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// The three kinds of ranked states.
///
/// `D`: a guarantee state. `E(i)`: an assumption state reached in the `i`-th
/// `Y` iteration, from which the system can force progress. `R(i, j)`: a
/// state outside both sets where the system waits for the environment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankClass {
    D,
    E(u32),
    R(u32, u32),
    Unranked,
}

impl RankClass {
    pub fn of(rank: Option<Rank>) -> Self {
        rank.map_or(RankClass::Unranked, Rank::class)
    }
}

/// Counters collected while evaluating a fixed point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Predecessor-operator invocations, per guarantee line.
    pub pre_calls: Vec<u64>,
    /// Iterations over the outermost variable.
    pub outer_iterations: u64,
    /// Evaluations of the innermost fixed-point body.
    pub inner_iterations: u64,
}

impl SolveStats {
    pub fn total_pre_calls(&self) -> u64 {
        self.pre_calls.iter().sum()
    }
}

/// Index of the first snapshot in an ascending chain that contains `q`.
pub(crate) fn entry_index(
    chain: &[crate::set::StateSet],
    q: crate::graph::StateId,
) -> Option<usize> {
    chain.iter().position(|s| s.contains(q))
}
