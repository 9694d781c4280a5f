//! The `.gr1game.json` file format.
//!
//! ```text
//! {"states":[{"id":str,"owner":0|1}...], "init":str, "edges":[[src,dst]...],
//!  "assumptions":[[str...]...], "guarantees":[[str...]...]}
//! ```
//!
//! State ids map to dense indices in declaration order. The canonical text
//! puts one state, edge or condition set per line, with edges sorted by
//! `(source, target)` index and condition sets sorted by index.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{validate, GR1Spec, GameGraph, Player, StateId, Violation};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("state {0}: owner missing")]
    MissingOwner(String),
    #[error("state {id}: owner must be 0 or 1, got {owner}")]
    BadOwner { id: String, owner: u64 },
    #[error("duplicate state id {0}")]
    DuplicateState(String),
    #[error("{context} references unknown state {id}")]
    UnknownState { context: String, id: String },
    #[error("invalid game: {}", join(.0))]
    Invalid(Vec<Violation>),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Serde view of a game file; also used as an HTTP payload.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameDoc {
    pub states: Vec<StateDoc>,
    pub init: String,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub assumptions: Vec<Vec<String>>,
    #[serde(default)]
    pub guarantees: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDoc {
    pub id: String,
    pub owner: Option<u64>,
}

impl GameDoc {
    pub fn from_game(g: &GameGraph, s: &GR1Spec) -> Self {
        let name = |q: StateId| g.id(q).to_string();
        let sets = |sets: &[Vec<StateId>]| -> Vec<Vec<String>> {
            sets.iter()
                .map(|set| set.iter().map(|&q| name(q)).collect())
                .collect()
        };
        GameDoc {
            states: g
                .states()
                .map(|q| StateDoc {
                    id: name(q),
                    owner: Some(g.owner(q).tag() as u64),
                })
                .collect(),
            init: name(g.init()),
            edges: g.edges().map(|(s, t)| (name(s), name(t))).collect(),
            assumptions: sets(&s.assumptions),
            guarantees: sets(&s.guarantees),
        }
    }

    /// Resolves names and validates the result.
    pub fn into_game(self) -> Result<(GameGraph, GR1Spec), FormatError> {
        let mut index: HashMap<&str, StateId> = HashMap::new();
        let mut owners = Vec::with_capacity(self.states.len());
        for (k, st) in self.states.iter().enumerate() {
            if index.insert(&st.id, k).is_some() {
                return Err(FormatError::DuplicateState(st.id.clone()));
            }
            let tag = st
                .owner
                .ok_or_else(|| FormatError::MissingOwner(st.id.clone()))?;
            let owner = Player::from_tag(tag).ok_or_else(|| FormatError::BadOwner {
                id: st.id.clone(),
                owner: tag,
            })?;
            owners.push(owner);
        }
        let resolve = |id: &str, context: &dyn Fn() -> String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| FormatError::UnknownState {
                    context: context(),
                    id: id.to_string(),
                })
        };
        let init = resolve(&self.init, &|| "init".to_string())?;
        let mut edges = Vec::with_capacity(self.edges.len());
        for (s, t) in &self.edges {
            let ctx = || format!("edge {s} -> {t}");
            edges.push((resolve(s, &ctx)?, resolve(t, &ctx)?));
        }
        let resolve_sets = |sets: &[Vec<String>], kind: &str| {
            sets.iter()
                .enumerate()
                .map(|(k, set)| {
                    set.iter()
                        .map(|id| resolve(id, &|| format!("{kind} set {}", k + 1)))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()
        };
        let assumptions = resolve_sets(&self.assumptions, "assumption")?;
        let guarantees = resolve_sets(&self.guarantees, "guarantee")?;
        let ids = self.states.into_iter().map(|s| s.id).collect();
        let g = GameGraph::new(ids, owners, edges, init);
        let s = GR1Spec::new(assumptions, guarantees);
        let violations = validate(&g, &s);
        if violations.is_empty() {
            Ok((g, s))
        } else {
            Err(FormatError::Invalid(violations))
        }
    }
}

/// Parses and validates a game file.
pub fn parse_game(text: &str) -> Result<(GameGraph, GR1Spec), FormatError> {
    let doc: GameDoc = serde_json::from_str(text)?;
    doc.into_game()
}

/// Writes the canonical line-oriented text of a game.
pub fn serialize_game(g: &GameGraph, s: &GR1Spec) -> String {
    let doc = GameDoc::from_game(g, s);
    let mut out = String::from("{\n");
    let items = |out: &mut String, key: &str, lines: Vec<String>, last: bool| {
        if lines.is_empty() {
            out.push_str(&format!("  \"{key}\": []"));
        } else {
            out.push_str(&format!("  \"{key}\": [\n    "));
            out.push_str(&lines.join(",\n    "));
            out.push_str("\n  ]");
        }
        out.push_str(if last { "\n" } else { ",\n" });
    };
    items(
        &mut out,
        "states",
        doc.states.iter().map(json).collect(),
        false,
    );
    out.push_str(&format!("  \"init\": {},\n", json(&doc.init)));
    items(
        &mut out,
        "edges",
        doc.edges.iter().map(json).collect(),
        false,
    );
    items(
        &mut out,
        "assumptions",
        doc.assumptions.iter().map(json).collect(),
        false,
    );
    items(
        &mut out,
        "guarantees",
        doc.guarantees.iter().map(json).collect(),
        true,
    );
    out.push_str("}\n");
    out
}

/// Parses then re-serializes, yielding the canonical form of `text`.
pub fn canonicalize(text: &str) -> Result<String, FormatError> {
    let (g, s) = parse_game(text)?;
    Ok(serialize_game(&g, &s))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}
