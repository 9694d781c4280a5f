//! Explicit-state GR(1) synthesis on two-player turn-based game graphs.
//!
//! The crate provides the classical three-nested solver and a four-nested
//! solver whose strategies never prevent the environment from meeting its
//! assumptions, together with strategy extraction, a closed-loop verifier,
//! an assumption precheck and a maze benchmark.

pub mod bench;
pub mod classic;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod maze;
pub mod oracle;
pub mod pre;
pub mod precheck;
pub mod rank;
pub mod scc;
pub mod session;
pub mod set;
pub mod singleton;
pub mod strategy;
pub mod synth;
pub mod vector;
pub mod verifier;

pub use graph::{Conditions, GR1Spec, GameGraph, Player, StateId};
pub use rank::{Rank, RankClass};
pub use set::StateSet;
pub use strategy::{ModedStrategy, Node};
pub use synth::{synthesize, Algorithm, Precheck, Synthesis};
