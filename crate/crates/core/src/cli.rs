//! Command-line driver: batch and interactive modes, the sequential option
//! portfolio, statistics and debug dumps.

use std::ffi::OsString;
use std::io::{self, BufRead, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Duration;

use clap::Parser as ClapParser;
use thiserror::Error;

use crate::engine::{error_response, Mode, Response, Session, SessionConfig};
use crate::smtlib::{parse_script, Parser, ReaderSource, ScriptCommand};

/// Lazy DPLL(T) solver for QF_IDL.
#[derive(Debug, Clone, ClapParser)]
#[command(name = "idl-smt", version)]
pub struct CliOptions {
    /// SMT-LIB script, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: String,
    /// Read, execute and answer one command at a time.
    #[arg(long)]
    pub incremental: bool,
    #[arg(long)]
    pub produce_unsat_cores: bool,
    /// Disable theory propagation.
    #[arg(long)]
    pub no_theory_prop: bool,
    /// Shrink unsat cores by deletion until every member is needed.
    #[arg(long)]
    pub minimize_core: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit per check-sat, in milliseconds.
    #[arg(long, value_name = "MS")]
    pub tlimit: Option<u64>,
    /// Print statistics to standard error on exit.
    #[arg(long)]
    pub stats: bool,
    /// Write the final clause database in DIMACS CNF.
    #[arg(long, value_name = "PATH")]
    pub dump_dimacs: Option<PathBuf>,
    /// Write the shortest-path matrix of the last model as TSV.
    #[arg(long, value_name = "PATH")]
    pub dump_apsp: Option<PathBuf>,
    /// Option stages tried in order, e.g. `no-prop:1000ms,prop:rest`.
    #[arg(long, value_name = "SPEC")]
    pub portfolio: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Millis(u64),
    Conflicts(u64),
    Rest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stage {
    pub theory_propagation: bool,
    pub budget: Budget,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PortfolioError {
    #[error("empty portfolio")]
    Empty,
    #[error("stage `{0}` is not of the form OPTIONS:BUDGET")]
    Shape(String),
    #[error("unknown portfolio option `{0}`")]
    Option(String),
    #[error("bad budget `{0}` (expected Nms, Nc or rest)")]
    Budget(String),
}

/// Parses `opts:budget[,opts:budget...]`. Options are `prop` or `no-prop`
/// joined with `+`; later ones win. Budgets are `Nms` (milliseconds per
/// check-sat), `Nc` (conflicts per check-sat) or `rest` (unlimited).
pub fn parse_portfolio(spec: &str) -> Result<Vec<Stage>, PortfolioError> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(PortfolioError::Empty);
    }
    spec.split(',')
        .map(|part| {
            let part = part.trim();
            let (opts, budget) = part
                .split_once(':')
                .ok_or_else(|| PortfolioError::Shape(part.to_string()))?;
            let mut theory_propagation = true;
            for o in opts.split('+').map(str::trim) {
                match o {
                    "prop" => theory_propagation = true,
                    "no-prop" => theory_propagation = false,
                    "" => {}
                    other => return Err(PortfolioError::Option(other.to_string())),
                }
            }
            let bad = || PortfolioError::Budget(budget.to_string());
            let budget = match budget.trim() {
                "rest" => Budget::Rest,
                b if b.ends_with("ms") => Budget::Millis(b[..b.len() - 2].parse().map_err(|_| bad())?),
                b if b.ends_with('c') => Budget::Conflicts(b[..b.len() - 1].parse().map_err(|_| bad())?),
                _ => return Err(bad()),
            };
            Ok(Stage {
                theory_propagation,
                budget,
            })
        })
        .collect()
}

/// What a command did to the run.
enum Step {
    Continue,
    Exit,
    Error,
    Internal,
}

/// Executes one command and prints its response.
fn step(session: &mut Session, cmd: &ScriptCommand, out: &mut dyn Write, saw_unknown: &mut bool) -> io::Result<Step> {
    let result = session.execute(cmd);
    let step = match &result {
        Ok(Response::Exit) => Step::Exit,
        Ok(Response::Unknown) => {
            *saw_unknown = true;
            Step::Continue
        }
        Ok(_) => Step::Continue,
        Err(e) if e.is_internal() => Step::Internal,
        Err(_) => Step::Error,
    };
    match result {
        Ok(r) => {
            let text = r.to_string();
            if !text.is_empty() {
                writeln!(out, "{text}")?;
            }
        }
        Err(e) => writeln!(out, "{}", error_response(&e.to_string()))?,
    }
    out.flush()?;
    Ok(step)
}

/// Runs parsed commands until the end, `(exit)` or the first error.
/// Returns the exit code and whether any check-sat answered `unknown`.
fn run_batch(session: &mut Session, cmds: &[ScriptCommand], out: &mut dyn Write) -> io::Result<(i32, bool)> {
    let mut unknown = false;
    for cmd in cmds {
        match step(session, cmd, out, &mut unknown)? {
            Step::Continue => {}
            Step::Exit => break,
            Step::Error => return Ok((1, unknown)),
            Step::Internal => return Ok((2, unknown)),
        }
    }
    Ok((0, unknown))
}

/// Streams commands from `input`, answering each before reading the next.
/// Errors are reported and the session continues; the exit code is 1 if
/// any error occurred.
fn run_interactive(session: &mut Session, input: &mut dyn BufRead, out: &mut dyn Write) -> io::Result<i32> {
    let mut parser = Parser::new(ReaderSource::new(input));
    let mut code = 0;
    let mut unknown = false;
    while let Some(next) = parser.next_command() {
        match next {
            Ok(cmd) => match step(session, &cmd, out, &mut unknown)? {
                Step::Continue => {}
                Step::Exit => break,
                Step::Error => code = 1,
                Step::Internal => return Ok(2),
            },
            Err(e) => {
                writeln!(out, "{}", error_response(&e.to_string()))?;
                out.flush()?;
                parser.recover();
                code = 1;
            }
        }
    }
    Ok(code)
}

fn base_config(opts: &CliOptions) -> SessionConfig {
    SessionConfig {
        mode: if opts.incremental {
            Mode::Interactive
        } else if opts.produce_unsat_cores {
            Mode::UnsatCore
        } else {
            Mode::Batch
        },
        produce_unsat_cores: opts.produce_unsat_cores,
        theory_propagation: !opts.no_theory_prop,
        minimize_core: opts.minimize_core,
        seed: opts.seed,
        conflict_budget: None,
        time_budget: opts.tlimit.map(Duration::from_millis),
        keep_matrix: opts.dump_apsp.is_some(),
    }
}

fn finish(session: &Session, opts: &CliOptions, stages: usize, err: &mut dyn Write) -> io::Result<()> {
    if opts.stats {
        for (k, v) in session.stats().pairs() {
            writeln!(err, "{k}={v}")?;
        }
        writeln!(err, "stages_run={stages}")?;
    }
    if let Some(p) = &opts.dump_dimacs {
        std::fs::write(p, session.dimacs())?;
    }
    if let Some(p) = &opts.dump_apsp {
        std::fs::write(p, session.apsp_tsv())?;
    }
    Ok(())
}

fn read_input(opts: &CliOptions, stdin: &mut dyn BufRead) -> io::Result<String> {
    let mut text = String::new();
    if opts.input == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(&opts.input)?;
    }
    Ok(text)
}

fn run_portfolio(
    opts: &CliOptions,
    stages: &[Stage],
    cmds: &[ScriptCommand],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> io::Result<i32> {
    for (i, stage) in stages.iter().enumerate() {
        let mut config = base_config(opts);
        config.theory_propagation = stage.theory_propagation;
        match stage.budget {
            Budget::Millis(ms) => {
                let d = Duration::from_millis(ms);
                config.time_budget = Some(config.time_budget.map_or(d, |t| t.min(d)));
            }
            Budget::Conflicts(c) => config.conflict_budget = Some(c),
            Budget::Rest => {}
        }
        let mut session = Session::new(config);
        let mut transcript = Vec::new();
        let (code, unknown) = run_batch(&mut session, cmds, &mut transcript)?;
        let last = i + 1 == stages.len();
        if !unknown || code != 0 || last {
            out.write_all(&transcript)?;
            out.flush()?;
            finish(&session, opts, i + 1, err)?;
            return Ok(code);
        }
    }
    unreachable!("portfolio has at least one stage")
}

fn run_inner(opts: &CliOptions, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let stages = match opts.portfolio.as_deref().map(parse_portfolio).transpose() {
        Ok(s) => s,
        Err(e) => {
            writeln!(err, "idl-smt: {e}")?;
            return Ok(1);
        }
    };
    if stages.is_some() && opts.incremental {
        writeln!(err, "idl-smt: --portfolio cannot be combined with --incremental")?;
        return Ok(1);
    }
    if opts.incremental {
        let mut session = Session::new(base_config(opts));
        let code = if opts.input == "-" {
            run_interactive(&mut session, stdin, out)?
        } else {
            let file = match std::fs::File::open(&opts.input) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(err, "idl-smt: {}: {e}", opts.input)?;
                    return Ok(1);
                }
            };
            run_interactive(&mut session, &mut io::BufReader::new(file), out)?
        };
        finish(&session, opts, 1, err)?;
        return Ok(code);
    }
    let text = match read_input(opts, stdin) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "idl-smt: {}: {e}", opts.input)?;
            return Ok(1);
        }
    };
    let cmds = match parse_script(&text) {
        Ok(c) => c,
        Err(e) => {
            writeln!(out, "{}", error_response(&e.to_string()))?;
            return Ok(1);
        }
    };
    if let Some(stages) = stages {
        return run_portfolio(opts, &stages, &cmds, out, err);
    }
    let mut session = Session::new(base_config(opts));
    let (code, _) = run_batch(&mut session, &cmds, out)?;
    finish(&session, opts, 1, err)?;
    Ok(code)
}

/// Runs the command line `args` (program name first) against the given
/// streams and returns the process exit code: 0 on clean completion, 1 on
/// usage, parse, sort or command errors, 2 on internal failures.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let opts = match CliOptions::try_parse_from(args) {
        Ok(o) => o,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| run_inner(&opts, stdin, out, err)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(err, "idl-smt: {e}");
            1
        }
        Err(_) => {
            let _ = writeln!(err, "idl-smt: internal error");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn portfolio_grammar() {
        assert_eq!(
            parse_portfolio("no-prop:1000ms,prop:rest").unwrap(),
            vec![
                Stage {
                    theory_propagation: false,
                    budget: Budget::Millis(1000)
                },
                Stage {
                    theory_propagation: true,
                    budget: Budget::Rest
                },
            ]
        );
        assert_eq!(
            parse_portfolio("no-prop+prop:5c").unwrap(),
            vec![Stage {
                theory_propagation: true,
                budget: Budget::Conflicts(5)
            }]
        );
        assert_eq!(parse_portfolio(""), Err(PortfolioError::Empty));
        assert!(matches!(parse_portfolio("prop"), Err(PortfolioError::Shape(_))));
        assert!(matches!(parse_portfolio("fast:rest"), Err(PortfolioError::Option(_))));
        assert!(matches!(parse_portfolio("prop:10s"), Err(PortfolioError::Budget(_))));
        assert!(matches!(parse_portfolio("prop:xms"), Err(PortfolioError::Budget(_))));
    }
}
