//! Robot-versus-obstacle maze games.
//!
//! The grid has `cols` columns and `lines` rows, row 0 at the top. Between
//! any two vertically adjacent cells there is a wall, except in the middle
//! column `cols / 2`, which is the only passage between rows. Horizontal
//! moves inside a row are always allowed.
//!
//! Goals sit in the first and last column of rows `0..goals`. In even rows
//! the robot goal is in the first column and the obstacle goal in the last
//! one; in odd rows the two are swapped. Row `ℓ` carries the robot goal
//! `F_G^{ℓ+1}` and the obstacle goal `F_A^{ℓ+1}`. For the 3×2 maze this puts
//! the robot goals in the upper-left and lower-right cells and the obstacle
//! goals in the upper-right and lower-left cells.
//!
//! A state is `(robot cell, obstacle cell, turn)` with distinct cells. The
//! obstacle (environment) moves first. Both players may stay put or move to
//! a free cell. In the falsifiable variant a move is at most one step; in the
//! non-falsifiable variant the obstacle may take up to two steps and pass
//! through the robot's cell, but never end there, and the robot may not enter
//! an obstacle goal cell, so it can never block the obstacle's goals. Play
//! starts with the robot in the lower-right and the obstacle in the
//! lower-left cell.
//!
//! State ids read `r<row>.<col>-o<row>.<col>-<e|s>`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GR1Spec, GameGraph, Player, StateId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Falsifiable,
    Nonfalsifiable,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Falsifiable => "falsifiable",
            Variant::Nonfalsifiable => "nonfalsifiable",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "falsifiable" => Ok(Variant::Falsifiable),
            "nonfalsifiable" | "non-falsifiable" => Ok(Variant::Nonfalsifiable),
            other => Err(format!("unknown maze variant {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MazeParams {
    pub cols: usize,
    pub lines: usize,
    pub goals: usize,
    pub variant: Variant,
}

impl MazeParams {
    pub fn new(cols: usize, lines: usize, goals: usize, variant: Variant) -> Self {
        MazeParams {
            cols,
            lines,
            goals,
            variant,
        }
    }

    /// Short name such as `3/2 g2 falsifiable`.
    pub fn label(&self) -> String {
        format!(
            "{}/{} g{} {}",
            self.cols, self.lines, self.goals, self.variant
        )
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MazeError {
    #[error("maze needs at least 2 columns and 2 lines, got {cols}x{lines}")]
    TooSmall { cols: usize, lines: usize },
    #[error("goals per player must be between 1 and the number of lines ({lines}), got {goals}")]
    Goals { goals: usize, lines: usize },
    #[error("robot cell graph is disconnected")]
    Disconnected,
}

/// Cell coordinates `(row, col)`.
pub type Cell = (usize, usize);

/// Static layout of a maze, independent of the game built on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MazeLayout {
    pub cols: usize,
    pub lines: usize,
    pub passage_col: usize,
    pub robot_goals: Vec<Cell>,
    pub obstacle_goals: Vec<Cell>,
    pub robot_start: Cell,
    pub obstacle_start: Cell,
}

impl MazeLayout {
    pub fn new(p: &MazeParams) -> Self {
        let last = p.cols - 1;
        let (robot_goals, obstacle_goals) = (0..p.goals)
            .map(|row| {
                if row % 2 == 0 {
                    ((row, 0), (row, last))
                } else {
                    ((row, last), (row, 0))
                }
            })
            .unzip();
        MazeLayout {
            cols: p.cols,
            lines: p.lines,
            passage_col: p.cols / 2,
            robot_goals,
            obstacle_goals,
            robot_start: (p.lines - 1, last),
            obstacle_start: (p.lines - 1, 0),
        }
    }

    fn cell_index(&self, (r, c): Cell) -> usize {
        r * self.cols + c
    }

    fn cell(&self, i: usize) -> Cell {
        (i / self.cols, i % self.cols)
    }

    fn cell_count(&self) -> usize {
        self.cols * self.lines
    }

    /// Wall-respecting one-step neighbours of a cell.
    pub fn neighbours(&self, (r, c): Cell) -> Vec<Cell> {
        let mut out = Vec::with_capacity(4);
        if c > 0 {
            out.push((r, c - 1));
        }
        if c + 1 < self.cols {
            out.push((r, c + 1));
        }
        if c == self.passage_col {
            if r > 0 {
                out.push((r - 1, c));
            }
            if r + 1 < self.lines {
                out.push((r + 1, c));
            }
        }
        out
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.cell_count()];
        seen[0] = true;
        let mut queue = VecDeque::from([(0, 0)]);
        let mut count = 1;
        while let Some(c) = queue.pop_front() {
            for nb in self.neighbours(c) {
                let i = self.cell_index(nb);
                if !seen[i] {
                    seen[i] = true;
                    count += 1;
                    queue.push_back(nb);
                }
            }
        }
        count == self.cell_count()
    }

    /// Cells the obstacle may end on from `from` with the robot at `robot`.
    fn obstacle_targets(&self, from: Cell, robot: Cell, variant: Variant) -> Vec<Cell> {
        let mut out = vec![from];
        for nb in self.neighbours(from) {
            if nb != robot && !out.contains(&nb) {
                out.push(nb);
            }
            if variant == Variant::Nonfalsifiable {
                for nb2 in self.neighbours(nb) {
                    if nb2 != robot && !out.contains(&nb2) {
                        out.push(nb2);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn robot_targets(&self, from: Cell, obstacle: Cell, variant: Variant) -> Vec<Cell> {
        let barred =
            |c: &Cell| variant == Variant::Nonfalsifiable && self.obstacle_goals.contains(c);
        let mut out = vec![from];
        out.extend(
            self.neighbours(from)
                .into_iter()
                .filter(|c| *c != obstacle && !barred(c)),
        );
        out.sort_unstable();
        out
    }
}

pub fn state_id(robot: Cell, obstacle: Cell, player: Player) -> String {
    let turn = match player {
        Player::Env => 'e',
        Player::Sys => 's',
    };
    format!(
        "r{}.{}-o{}.{}-{}",
        robot.0, robot.1, obstacle.0, obstacle.1, turn
    )
}

/// Parses a state id produced by [`state_id`].
pub fn parse_state_id(id: &str) -> Option<(Cell, Cell, Player)> {
    let mut parts = id.split('-');
    let cell = |s: &str, tag: char| -> Option<Cell> {
        let (r, c) = s.strip_prefix(tag)?.split_once('.')?;
        Some((r.parse().ok()?, c.parse().ok()?))
    };
    let robot = cell(parts.next()?, 'r')?;
    let obstacle = cell(parts.next()?, 'o')?;
    let player = match parts.next()? {
        "e" => Player::Env,
        "s" => Player::Sys,
        _ => return None,
    };
    parts.next().is_none().then_some((robot, obstacle, player))
}

pub fn maze_generate(p: &MazeParams) -> Result<(GameGraph, GR1Spec), MazeError> {
    if p.cols < 2 || p.lines < 2 {
        return Err(MazeError::TooSmall {
            cols: p.cols,
            lines: p.lines,
        });
    }
    if p.goals < 1 || p.goals > p.lines {
        return Err(MazeError::Goals {
            goals: p.goals,
            lines: p.lines,
        });
    }
    let lay = MazeLayout::new(p);
    if !lay.connected() {
        return Err(MazeError::Disconnected);
    }
    let cells = lay.cell_count();
    let pairs: Vec<(Cell, Cell)> = (0..cells)
        .flat_map(|r| (0..cells).filter(move |&o| o != r).map(move |o| (r, o)))
        .map(|(r, o)| (lay.cell(r), lay.cell(o)))
        .collect();
    let mut ids = Vec::with_capacity(2 * pairs.len());
    let mut owner = Vec::with_capacity(2 * pairs.len());
    for player in [Player::Env, Player::Sys] {
        for &(r, o) in &pairs {
            ids.push(state_id(r, o, player));
            owner.push(player);
        }
    }
    let index = |r: Cell, o: Cell, player: Player| -> StateId {
        let (ri, oi) = (lay.cell_index(r), lay.cell_index(o));
        let pair = ri * (cells - 1) + if oi > ri { oi - 1 } else { oi };
        pair + if player == Player::Sys {
            pairs.len()
        } else {
            0
        }
    };
    let mut edges = Vec::new();
    for &(r, o) in &pairs {
        let env = index(r, o, Player::Env);
        for o2 in lay.obstacle_targets(o, r, p.variant) {
            edges.push((env, index(r, o2, Player::Sys)));
        }
        let sys = index(r, o, Player::Sys);
        for r2 in lay.robot_targets(r, o, p.variant) {
            edges.push((sys, index(r2, o, Player::Env)));
        }
    }
    let init = index(lay.robot_start, lay.obstacle_start, Player::Env);
    let g = GameGraph::new(ids, owner, edges, init);
    let with = |pick: &dyn Fn(Cell, Cell) -> bool| -> Vec<StateId> {
        g.states()
            .filter(|&q| {
                let (r, o, _) = parse_state_id(g.id(q)).expect("generated id");
                pick(r, o)
            })
            .collect()
    };
    let assumptions = lay
        .obstacle_goals
        .iter()
        .map(|&cell| with(&|_, o| o == cell))
        .collect();
    let guarantees = lay
        .robot_goals
        .iter()
        .map(|&cell| with(&|r, _| r == cell))
        .collect();
    Ok((g, GR1Spec::new(assumptions, guarantees)))
}
