//! Deciding Boolean systems classically.
//!
//! Two exact in-process backends (a Gray-code enumerator and a
//! propagating backtracker) and a bridge to external pseudo-Boolean
//! solvers through OPB files. Every reported solution is checked against
//! the system with exact arithmetic first.

mod backtrack;
mod compile;
mod exhaustive;
mod opb;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::encode::BooleanSystem;
use crate::error::{Error, Result};

pub use opb::{export_opb, import_solution, opb_sidecar, opb_string, parse_status, OpbSidecar, OpbVar, PbStatus};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exhaustive,
    #[default]
    Backtracking,
    External,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BackendConfig {
    pub backend: Backend,
    /// largest instance the exhaustive backend accepts
    pub var_limit: usize,
    pub time_limit: Option<Duration>,
    /// kept for reproducible runs; the exact backends are deterministic anyway
    pub seed: u64,
    /// program and arguments for the external backend; `{}` is replaced by
    /// the OPB path, otherwise the path is appended
    pub command: Vec<String>,
    /// accepted and ignored
    pub epsilon: Option<f64>,
}

impl Default for BackendConfig {
    fn default() -> Self {
        BackendConfig {
            backend: Backend::Backtracking,
            var_limit: 30,
            time_limit: None,
            seed: 0,
            command: Vec::new(),
            epsilon: None,
        }
    }
}

impl BackendConfig {
    pub fn exhaustive() -> Self {
        BackendConfig { backend: Backend::Exhaustive, ..Self::default() }
    }

    pub fn backtracking() -> Self {
        Self::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Vec<u8>),
    Unsat,
    Unknown(String),
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveOutcome::Sat(_))
    }

    pub fn assignment(&self) -> Option<&[u8]> {
        match self {
            SolveOutcome::Sat(a) => Some(a),
            _ => None,
        }
    }

    /// 0, 20 or 30.
    pub fn exit_code(&self) -> i32 {
        match self {
            SolveOutcome::Sat(_) => 0,
            SolveOutcome::Unsat => 20,
            SolveOutcome::Unknown(_) => 30,
        }
    }
}

/// Residual of each equation at `assignment`.
pub fn evaluate(sys: &BooleanSystem, assignment: &[u8]) -> Result<Vec<BigInt>> {
    sys.residuals(assignment)
}

fn checked(sys: &BooleanSystem, x: Vec<u8>) -> SolveOutcome {
    if sys.is_solution(&x) {
        SolveOutcome::Sat(x)
    } else {
        SolveOutcome::Unknown("backend returned a non-solution".into())
    }
}

pub fn solve(sys: &BooleanSystem, cfg: &BackendConfig) -> Result<SolveOutcome> {
    if cfg.backend == Backend::External {
        return solve_external(sys, cfg);
    }
    let Some(c) = compile::compile(sys) else {
        return Ok(SolveOutcome::Unknown("coefficients exceed 128-bit range".into()));
    };
    Ok(match cfg.backend {
        Backend::Exhaustive => {
            if c.n > cfg.var_limit {
                return Ok(SolveOutcome::Unknown("too many variables".into()));
            }
            match exhaustive::search(&c) {
                Some(x) => checked(sys, x),
                None => SolveOutcome::Unsat,
            }
        }
        Backend::Backtracking => {
            let deadline = cfg.time_limit.map(|d| Instant::now() + d);
            match backtrack::search(&c, deadline) {
                backtrack::Search::Done(Some(x)) => checked(sys, x),
                backtrack::Search::Done(None) => SolveOutcome::Unsat,
                backtrack::Search::Timeout => SolveOutcome::Unknown("timeout".into()),
            }
        }
        Backend::External => unreachable!(),
    })
}

fn solve_external(sys: &BooleanSystem, cfg: &BackendConfig) -> Result<SolveOutcome> {
    let (program, args) =
        cfg.command.split_first().ok_or_else(|| Error::Invalid("external backend needs a command".into()))?;
    let mut file = tempfile::Builder::new().suffix(".opb").tempfile()?;
    export_opb(sys, file.as_file_mut())?;
    let path = file.path().to_string_lossy().into_owned();
    let mut cmd = Command::new(program);
    let mut placed = false;
    for a in args {
        if a.contains("{}") {
            placed = true;
            cmd.arg(a.replace("{}", &path));
        } else {
            cmd.arg(a);
        }
    }
    if !placed {
        cmd.arg(&path);
    }
    let out = cmd.output()?;
    let text = String::from_utf8_lossy(&out.stdout);
    match parse_status(&text) {
        Some(PbStatus::Satisfiable) => {
            let x = import_solution(&text, sys.num_vars())?;
            if sys.is_solution(&x) {
                Ok(SolveOutcome::Sat(x))
            } else {
                Err(Error::ExternalSolverMismatch)
            }
        }
        Some(PbStatus::Unsatisfiable) => Ok(SolveOutcome::Unsat),
        _ => Ok(SolveOutcome::Unknown("external solver gave no verdict".into())),
    }
}
