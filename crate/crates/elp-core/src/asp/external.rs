//! Subprocess adapter for external ASP solvers.
//!
//! The solver is launched from a whitespace-split command template, fed
//! the program as plain ASP text on standard input, and expected to
//! print zero or more blocks of
//!
//! ```text
//! Answer: k
//! atom1 atom2 ...
//! ```
//!
//! and exit with a configurable status for satisfiable respectively
//! unsatisfiable programs. The clingo family follows this protocol with
//! `--verbose=0`; note clingo reports exhaustive enumeration success as
//! exit status 30, so configure `sat_exit` accordingly there.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::{remove_nested_negation, AnswerSetResult, AspError, EngineSource};
use crate::model::{BeliefSet, ObjectiveLiteral, Program};
use crate::parser::parse_asp;

#[derive(Debug, Clone)]
pub struct SolverAdapterConfig {
    /// Whitespace-split command template, e.g. `"clingo -n 0 --verbose=0"`.
    pub command: String,
    pub timeout: Duration,
    pub sat_exit: i32,
    pub unsat_exit: i32,
}

impl Default for SolverAdapterConfig {
    fn default() -> Self {
        SolverAdapterConfig {
            command: String::new(),
            timeout: Duration::from_secs(10),
            sat_exit: 10,
            unsat_exit: 20,
        }
    }
}

impl SolverAdapterConfig {
    pub fn new(command: impl Into<String>) -> Self {
        SolverAdapterConfig {
            command: command.into(),
            ..Default::default()
        }
    }
}

/// Solve `p` with the configured external solver. Doubled default
/// negation is compiled away before emission; the fresh atoms it
/// introduces are stripped from the returned sets.
pub fn external_answer_sets(
    p: &Program,
    cfg: &SolverAdapterConfig,
) -> Result<AnswerSetResult, AspError> {
    if !p.is_asp() {
        return Err(AspError::NotAsp);
    }
    let mut words = cfg.command.split_whitespace();
    let program_name = words.next().ok_or(AspError::AdapterCommand)?;
    let args: Vec<&str> = words.collect();

    let (emitted, nested) = remove_nested_negation(p);
    let text = emitted.to_string();

    let mut child = Command::new(program_name)
        .args(&args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| AspError::AdapterSpawn {
            command: cfg.command.clone(),
            source,
        })?;

    let mut stdin = child.stdin.take().expect("stdin was piped");
    let writer = std::thread::spawn(move || {
        let _ = stdin.write_all(text.as_bytes());
    });
    let mut stdout_pipe = child.stdout.take().expect("stdout was piped");
    let stdout_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stdout_pipe.read_to_string(&mut s);
        s
    });
    let mut stderr_pipe = child.stderr.take().expect("stderr was piped");
    let stderr_reader = std::thread::spawn(move || {
        let mut s = String::new();
        let _ = stderr_pipe.read_to_string(&mut s);
        s
    });

    let deadline = Instant::now() + cfg.timeout;
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break status,
            Ok(None) => {
                if Instant::now() >= deadline {
                    let _ = child.kill();
                    let _ = child.wait();
                    let _ = writer.join();
                    let _ = stdout_reader.join();
                    let _ = stderr_reader.join();
                    return Err(AspError::AdapterTimeout {
                        seconds: cfg.timeout.as_secs_f64(),
                    });
                }
                std::thread::sleep(Duration::from_millis(2));
            }
            Err(source) => {
                return Err(AspError::AdapterSpawn {
                    command: cfg.command.clone(),
                    source,
                })
            }
        }
    };
    let _ = writer.join();
    let stdout = stdout_reader.join().unwrap_or_default();
    let stderr = stderr_reader.join().unwrap_or_default();

    let answers = parse_answer_blocks(&stdout)?;
    let code = status.code();
    if code == Some(cfg.sat_exit) {
        if answers.is_empty() && cfg.sat_exit != cfg.unsat_exit {
            return Err(AspError::AdapterOutput(
                "exit status signals satisfiable but no answer blocks found".into(),
            ));
        }
    } else if code == Some(cfg.unsat_exit) {
        if !answers.is_empty() {
            return Err(AspError::AdapterOutput(
                "exit status signals unsatisfiable but answer blocks found".into(),
            ));
        }
    } else {
        return Err(AspError::AdapterStatus {
            status: code.map_or_else(|| "killed by signal".into(), |c| c.to_string()),
            stderr: stderr.trim().to_string(),
        });
    }

    let mut sets = BTreeSet::new();
    for literals in answers {
        let kept = literals.into_iter().filter(|l| !nested.contains(&l.atom));
        let set = BeliefSet::new(kept)
            .map_err(|e| AspError::AdapterOutput(format!("inconsistent answer set: {e}")))?;
        sets.insert(set);
    }
    Ok(AnswerSetResult {
        sets,
        source: EngineSource::External,
    })
}

fn parse_answer_blocks(stdout: &str) -> Result<Vec<Vec<ObjectiveLiteral>>, AspError> {
    let mut answers = Vec::new();
    let mut lines = stdout.lines();
    while let Some(line) = lines.next() {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("Answer:") {
            if rest.trim().parse::<u64>().is_err() {
                return Err(AspError::AdapterOutput(format!(
                    "bad answer header '{trimmed}'"
                )));
            }
            let atoms_line = lines
                .next()
                .ok_or_else(|| AspError::AdapterOutput("missing atom line after header".into()))?;
            let mut literals = Vec::new();
            for token in atoms_line.split_whitespace() {
                literals.push(parse_literal_token(token)?);
            }
            answers.push(literals);
        }
    }
    Ok(answers)
}

fn parse_literal_token(token: &str) -> Result<ObjectiveLiteral, AspError> {
    let as_fact = format!("{token}.");
    let program = parse_asp(&as_fact)
        .map_err(|e| AspError::AdapterOutput(format!("bad atom token '{token}': {e}")))?;
    match program.rules() {
        [rule] if rule.is_fact() && rule.head().len() == 1 => Ok(rule.head()[0].clone()),
        _ => Err(AspError::AdapterOutput(format!("bad atom token '{token}'"))),
    }
}
