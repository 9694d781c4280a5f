//! Command-line front end for `gr1-core`.
//!
//! Exit codes: 0 on success, 1 when `solve` finds the instance unrealizable
//! or `verify` reports a failed check, 2 on usage and I/O errors.

pub mod serve;

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Parser, Subcommand};
use gr1_core::bench::{run_benchmark, BenchSpec};
use gr1_core::format::{parse_game, serialize_game};
use gr1_core::maze::{maze_generate, MazeParams, Variant};
use gr1_core::session::Session;
use gr1_core::strategy::{parse_strategy, serialize_strategy};
use gr1_core::verifier::{build_closed_loop, verify};
use gr1_core::{synthesize, Algorithm, Precheck};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gr1", version, about = "Explicit-state GR(1) synthesis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a game and write the extracted strategy.
    Solve {
        #[arg(long, default_value = "4fp")]
        algo: Algorithm,
        #[arg(long = "in")]
        input: PathBuf,
        /// Strategy output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        precheck: Precheck,
    },
    /// Check a strategy against the game's specification.
    Verify {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Generate a maze game.
    Maze {
        #[arg(long, default_value_t = 3)]
        cols: usize,
        #[arg(long, default_value_t = 2)]
        lines: usize,
        #[arg(long, default_value_t = 2)]
        goals: usize,
        #[arg(long, default_value = "falsifiable")]
        variant: Variant,
        /// Game output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the maze benchmark described by a JSON spec file.
    Bench {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Play the environment against a strategy from the terminal.
    Simulate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        strategy: PathBuf,
    },
    /// Serve the HTTP JSON API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(cli.command, input, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command, input: &mut dyn BufRead, out: &mut dyn Write) -> anyhow::Result<i32> {
    match cmd {
        Command::Solve {
            algo,
            input: path,
            out: dest,
            precheck,
        } => solve(algo, &path, dest.as_deref(), precheck, out),
        Command::Verify { game, strategy } => verify_files(&game, &strategy, out),
        Command::Maze {
            cols,
            lines,
            goals,
            variant,
            out: dest,
        } => {
            let (g, s) = maze_generate(&MazeParams::new(cols, lines, goals, variant))?;
            emit(dest.as_deref(), &serialize_game(&g, &s), out)?;
            Ok(EXIT_OK)
        }
        Command::Bench { spec, csv } => {
            let spec: BenchSpec = serde_json::from_str(&read(&spec)?).context("bench spec")?;
            let report = run_benchmark(&spec)?;
            write!(out, "{}", report.to_table())?;
            if let Some(path) = csv {
                write_file(&path, &report.to_csv()?)?;
            }
            Ok(EXIT_OK)
        }
        Command::Simulate { game, strategy } => {
            let (g, s) = parse_game(&read(&game)?).context("game file")?;
            let strat = parse_strategy(&g, &read(&strategy)?).context("strategy file")?;
            let session = Session::new(g, &s, strat, None)?;
            simulate(session, input, out)?;
            Ok(EXIT_OK)
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve::serve(port))?;
            Ok(EXIT_OK)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Writes `text` to `dest`, or to `out` when no file is given.
fn emit(dest: Option<&Path>, text: &str, out: &mut dyn Write) -> anyhow::Result<()> {
    match dest {
        Some(path) => write_file(path, text),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn solve(
    algo: Algorithm,
    path: &Path,
    dest: Option<&Path>,
    precheck: Precheck,
    out: &mut dyn Write,
) -> anyhow::Result<i32> {
    let (g, s) = parse_game(&read(path)?).context("game file")?;
    let syn = synthesize(&g, &s, algo, precheck)?;
    let report = |out: &mut dyn Write| -> std::io::Result<()> {
        if !syn.precheck_failed.is_empty() {
            let failed: Vec<String> = syn
                .precheck_failed
                .iter()
                .map(|b| (b + 1).to_string())
                .collect();
            writeln!(
                out,
                "precheck: assumptions {} added as guarantees",
                failed.join(", ")
            )?;
        }
        Ok(())
    };
    let Some(strat) = &syn.strategy else {
        report(out)?;
        if syn.precheck_failed.is_empty() {
            writeln!(out, "unrealizable from initial state")?;
        } else {
            writeln!(
                out,
                "unrealizable from initial state after guarantee augmentation"
            )?;
        }
        return Ok(EXIT_FAILED);
    };
    let text = serialize_strategy(&g, strat);
    match dest {
        Some(p) => {
            report(out)?;
            write_file(p, &text)?;
            writeln!(
                out,
                "realizable ({algo}): {} strategy states written to {}",
                strat.state_count(),
                p.display()
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn verify_files(game: &Path, strategy: &Path, out: &mut dyn Write) -> anyhow::Result<i32> {
    let (g, s) = parse_game(&read(game)?).context("game file")?;
    let strat = parse_strategy(&g, &read(strategy)?).context("strategy file")?;
    let cl = build_closed_loop(&g, &strat)?;
    let report = verify(&cl, &s.conditions(&g));
    writeln!(out, "closed loop: {} nodes", report.nodes)?;
    match &report.gr1.counterexample {
        None => writeln!(out, "gr1: ok")?,
        Some(lasso) => writeln!(out, "gr1: FAILED (counterexample {})", lasso.to_json(&g))?,
    }
    match report.nonconflicting.stuck {
        None => writeln!(out, "non-conflictingness: ok")?,
        Some(node) => writeln!(
            out,
            "non-conflictingness: FAILED (stuck node {} in mode ({},{}))",
            g.id(node.state),
            node.a + 1,
            node.b + 1
        )?,
    }
    writeln!(
        out,
        "falsifying: {}",
        if report.falsifying { "yes" } else { "no" }
    )?;
    writeln!(
        out,
        "guarantee play: {}",
        if report.guarantee_play { "yes" } else { "no" }
    )?;
    let passed = report.gr1.holds && report.nonconflicting.holds;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn describe(session: &Session, out: &mut dyn Write) -> std::io::Result<()> {
    let v = session.view();
    let rank = v
        .rank
        .map_or("-".to_string(), |[i, j]| format!("({i},{j})"));
    writeln!(
        out,
        "at {} mode ({},{}) rank {} assumptions {:?} guarantees {:?}",
        v.state, v.mode.a, v.mode.b, rank, v.satisfied_assumptions, v.satisfied_guarantees
    )?;
    writeln!(out, "environment moves: {}", v.legal_env_moves.join(" "))
}

/// Reads one environment successor per line and answers with the
/// strategy's move. Ends on end of input or `quit`.
pub fn simulate(
    mut session: Session,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> anyhow::Result<()> {
    describe(&session, out)?;
    let mut line = String::new();
    loop {
        write!(out, "> ")?;
        out.flush()?;
        line.clear();
        if input.read_line(&mut line)? == 0 {
            writeln!(out)?;
            return Ok(());
        }
        let to = line.trim();
        match to {
            "" => continue,
            "quit" | "exit" => return Ok(()),
            _ => {}
        }
        match session.env_move(to) {
            Ok(mv) => {
                writeln!(
                    out,
                    "system moves {} -> {} (mode ({},{}))",
                    mv.from, mv.to, mv.mode.a, mv.mode.b
                )?;
                describe(&session, out)?;
            }
            Err(e) => writeln!(out, "{e}")?,
        }
    }
}
