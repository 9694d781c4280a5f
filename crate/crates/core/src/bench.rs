//! Maze benchmark harness comparing the three solvers.
//!
//! Every `(instance, algorithm)` cell solves the raw maze specification,
//! extracts a strategy from the initial state, builds its closed loop and
//! checks it. A strategy is reported as falsifying when its closed loop is
//! not non-conflicting. The `iterations` column counts Pre-operator
//! invocations summed over all lines.

use std::fmt::Write as _;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maze::{maze_generate, MazeError, MazeParams};
use crate::synth::{synthesize, Algorithm, Precheck};
use crate::verifier::{build_closed_loop, verify};

/// Contents of a bench spec file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub instances: Vec<MazeParams>,
    #[serde(default = "all_algorithms")]
    pub algorithms: Vec<Algorithm>,
    /// Per-cell wall-clock limit.
    #[serde(default)]
    pub timeout_ms: Option<u64>,
}

fn all_algorithms() -> Vec<Algorithm> {
    Algorithm::ALL.to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Solved {
        realizable: bool,
        /// Strategy size in environment nodes; zero when unrealizable.
        states: usize,
        falsifying: bool,
        gr1_holds: bool,
        /// Pre-operator invocations per guarantee line.
        pre_calls: Vec<u64>,
    },
    Timeout,
    Error(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub instance: String,
    pub params: MazeParams,
    pub algorithm: Algorithm,
    pub state_space: usize,
    pub outcome: Outcome,
    pub ms: u128,
}

impl BenchRow {
    fn columns(&self) -> [String; 7] {
        let (realizable, states, falsifying, iterations) = match &self.outcome {
            Outcome::Solved {
                realizable,
                states,
                falsifying,
                pre_calls,
                ..
            } => (
                yes_no(*realizable).to_string(),
                if *realizable {
                    states.to_string()
                } else {
                    "-".to_string()
                },
                if *realizable {
                    yes_no(*falsifying)
                } else {
                    "-"
                }
                .to_string(),
                pre_calls.iter().sum::<u64>().to_string(),
            ),
            Outcome::Timeout => ("timeout".into(), "-".into(), "-".into(), "-".into()),
            Outcome::Error(_) => ("error".into(), "-".into(), "-".into(), "-".into()),
        };
        [
            self.instance.clone(),
            self.algorithm.to_string(),
            realizable,
            states,
            falsifying,
            self.ms.to_string(),
            iterations,
        ]
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

pub const COLUMNS: [&str; 7] = [
    "instance",
    "algorithm",
    "realizable",
    "states",
    "falsifying",
    "ms",
    "iterations",
];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance {label}: {source}")]
    Maze { label: String, source: MazeError },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl BenchReport {
    pub fn to_csv(&self) -> Result<String, BenchError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(COLUMNS)?;
        for row in &self.rows {
            w.write_record(row.columns())?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Aligned plain-text table with the same columns as the CSV.
    pub fn to_table(&self) -> String {
        let cells: Vec<[String; 7]> = self.rows.iter().map(BenchRow::columns).collect();
        let mut widths = COLUMNS.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let mut line = |fields: Vec<&str>| {
            let padded: Vec<String> = fields
                .iter()
                .zip(widths)
                .map(|(f, w)| format!("{f:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(COLUMNS.to_vec());
        for row in &cells {
            line(row.iter().map(String::as_str).collect());
        }
        out
    }
}

/// Runs one cell: solve, extract, verify.
pub fn run_cell(p: &MazeParams, algorithm: Algorithm) -> Result<(usize, Outcome), MazeError> {
    let (g, s) = maze_generate(p)?;
    let outcome = match synthesize(&g, &s, algorithm, Precheck::Off) {
        Err(e) => Outcome::Error(e.to_string()),
        Ok(syn) => {
            let pre_calls = syn.solution.stats().pre_calls.clone();
            match &syn.strategy {
                None => Outcome::Solved {
                    realizable: false,
                    states: 0,
                    falsifying: false,
                    gr1_holds: false,
                    pre_calls,
                },
                Some(strat) => match build_closed_loop(&g, strat) {
                    Err(e) => Outcome::Error(e.to_string()),
                    Ok(cl) => {
                        let report = verify(&cl, &syn.spec.conditions(&g));
                        Outcome::Solved {
                            realizable: true,
                            states: strat.state_count(),
                            falsifying: report.falsifying,
                            gr1_holds: report.gr1.holds,
                            pre_calls,
                        }
                    }
                },
            }
        }
    };
    Ok((g.len(), outcome))
}

pub fn run_benchmark(spec: &BenchSpec) -> Result<BenchReport, BenchError> {
    let mut report = BenchReport::default();
    for p in &spec.instances {
        let label = p.label();
        maze_generate(p).map_err(|source| BenchError::Maze {
            label: label.clone(),
            source,
        })?;
        for &algorithm in &spec.algorithms {
            let start = Instant::now();
            let result = match spec.timeout_ms {
                None => Some(run_cell(p, algorithm)),
                Some(limit) => with_timeout(*p, algorithm, Duration::from_millis(limit)),
            };
            let ms = start.elapsed().as_millis();
            let (state_space, outcome) = match result {
                Some(Ok(cell)) => cell,
                Some(Err(e)) => (0, Outcome::Error(e.to_string())),
                None => (0, Outcome::Timeout),
            };
            report.rows.push(BenchRow {
                instance: label.clone(),
                params: *p,
                algorithm,
                state_space,
                outcome,
                ms,
            });
        }
    }
    Ok(report)
}

/// Runs a cell on a worker thread; an overrunning worker is abandoned.
fn with_timeout(
    p: MazeParams,
    algorithm: Algorithm,
    limit: Duration,
) -> Option<Result<(usize, Outcome), MazeError>> {
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let _ = tx.send(run_cell(&p, algorithm));
    });
    rx.recv_timeout(limit).ok()
}
