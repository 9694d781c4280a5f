//! Small hand-checked game instances used by tests, docs and the CLI.

use crate::graph::{GR1Spec, GameGraph, Player};

use Player::{Env, Sys};

/// Two states `a` (env, initial) and `b` (sys) in a forced loop, with
/// `F_A = {{a}}` and `F_G = {{b}}`.
pub fn ex0() -> (GameGraph, GR1Spec) {
    let g = GameGraph::from_named(&[("a", Env), ("b", Sys)], &[("a", "b"), ("b", "a")], "a");
    let s = GR1Spec::from_named(&g, &[&["a"]], &[&["b"]]);
    (g, s)
}

/// Four states where the system can keep the environment away from its only
/// assumption state `a1` while still visiting the guarantee `b0`.
pub fn ex1() -> (GameGraph, GR1Spec) {
    let g = GameGraph::from_named(
        &[("a0", Env), ("a1", Env), ("b0", Sys), ("b1", Sys)],
        &[
            ("a0", "b0"),
            ("a0", "b1"),
            ("a1", "b1"),
            ("b0", "a0"),
            ("b1", "a0"),
            ("b1", "a1"),
        ],
        "a0",
    );
    let s = GR1Spec::from_named(&g, &[&["a1"]], &[&["b0"]]);
    (g, s)
}

/// Singleton instance with a recurrent part `q0..q7` and a trap `q8 ⇄ q9`
/// that wins classically only because it blocks the assumption `{q0}`.
pub fn h1() -> (GameGraph, GR1Spec) {
    let g = GameGraph::from_named(
        &[
            ("q0", Env),
            ("q1", Sys),
            ("q2", Env),
            ("q3", Sys),
            ("q4", Env),
            ("q5", Sys),
            ("q6", Sys),
            ("q7", Env),
            ("q8", Env),
            ("q9", Sys),
        ],
        &[
            ("q0", "q1"),
            ("q1", "q2"),
            ("q1", "q8"),
            ("q2", "q3"),
            ("q2", "q6"),
            ("q3", "q4"),
            ("q4", "q5"),
            ("q5", "q0"),
            ("q6", "q7"),
            ("q7", "q3"),
            ("q7", "q6"),
            ("q8", "q9"),
            ("q9", "q8"),
        ],
        "q0",
    );
    let s = GR1Spec::from_named(&g, &[&["q0"]], &[&["q4"]]);
    (g, s)
}

/// Two guarantees and two assumptions; the system must switch the avoided
/// assumption between visits to different guarantee sets.
pub fn h2() -> (GameGraph, GR1Spec) {
    let g = GameGraph::from_named(
        &[
            ("q0", Env),
            ("q1", Sys),
            ("q2", Env),
            ("q3", Sys),
            ("q4", Env),
            ("q5", Sys),
            ("q6", Sys),
            ("q7", Env),
            ("q8", Sys),
            ("q9", Env),
            ("q10", Sys),
        ],
        &[
            ("q0", "q1"),
            ("q1", "q2"),
            ("q1", "q9"),
            ("q2", "q3"),
            ("q2", "q6"),
            ("q3", "q4"),
            ("q4", "q5"),
            ("q5", "q0"),
            ("q6", "q7"),
            ("q7", "q8"),
            ("q8", "q0"),
            ("q9", "q10"),
            ("q10", "q0"),
        ],
        "q0",
    );
    let s = GR1Spec::from_named(&g, &[&["q4"], &["q7", "q9"]], &[&["q3"], &["q8", "q10"]]);
    (g, s)
}
