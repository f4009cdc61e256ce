use std::fmt::Write as _;
use std::io::Write;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::encode::BooleanSystem;
use crate::error::{Error, Result};

/// Maps PB names x1..xN back to registry ids and names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpbSidecar {
    pub variables: Vec<OpbVar>,
    pub constraints: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpbVar {
    pub pb: String,
    pub id: u32,
    pub name: String,
}

/// Status reported by a PB solver's `s` line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbStatus {
    Satisfiable,
    Unsatisfiable,
    Unknown,
}

/// The system as nonlinear OPB text.
pub fn opb_string(sys: &BooleanSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "* #variable= {} #constraint= {}", sys.num_vars(), sys.equations.len());
    for e in &sys.equations {
        let mut line = String::new();
        for (m, c) in e.int_terms() {
            if m.is_one() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let _ = write!(line, "{sign}{}", c.abs());
            for v in m.vars() {
                let _ = write!(line, " x{}", v + 1);
            }
            line.push(' ');
        }
        if line.is_empty() && sys.num_vars() > 0 {
            line.push_str("+0 x1 ");
        }
        let rhs = -e.constant_term().as_int().cloned().unwrap_or_else(Zero::zero);
        let _ = writeln!(out, "{line}= {rhs} ;");
    }
    out
}

pub fn opb_sidecar(sys: &BooleanSystem) -> OpbSidecar {
    OpbSidecar {
        variables: sys
            .registry
            .iter()
            .map(|b| OpbVar { pb: format!("x{}", b.id + 1), id: b.id, name: b.name.clone() })
            .collect(),
        constraints: sys.equations.len(),
    }
}

/// Writes the OPB text and returns the sidecar.
pub fn export_opb(sys: &BooleanSystem, out: &mut impl Write) -> Result<OpbSidecar> {
    out.write_all(opb_string(sys).as_bytes())?;
    Ok(opb_sidecar(sys))
}

/// Reads the literals of `v` lines. Unlisted variables are 0.
pub fn import_solution(text: &str, num_vars: usize) -> Result<Vec<u8>> {
    let mut x = vec![0u8; num_vars];
    let mut seen = vec![false; num_vars];
    let mut any = false;
    for line in text.lines() {
        let Some(rest) = line.strip_prefix('v') else { continue };
        if !(rest.is_empty() || rest.starts_with(char::is_whitespace)) {
            continue;
        }
        any = true;
        for lit in rest.split_whitespace() {
            let (neg, name) = match lit.strip_prefix('-').or_else(|| lit.strip_prefix('~')) {
                Some(n) => (true, n),
                None => (false, lit),
            };
            let idx: usize = name
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .filter(|&i| i >= 1 && i <= num_vars)
                .ok_or_else(|| Error::Parse(format!("bad literal {lit:?}")))?;
            x[idx - 1] = u8::from(!neg);
            seen[idx - 1] = true;
        }
    }
    if !any {
        return Err(Error::Parse("no v line in solver output".into()));
    }
    let missing = seen.iter().filter(|s| !**s).count();
    if missing > 0 {
        log::warn!("{missing} variables missing from the solution line; set to 0");
    }
    Ok(x)
}

/// Status from the `s` line, if any.
pub fn parse_status(text: &str) -> Option<PbStatus> {
    text.lines().find_map(|l| {
        let s = l.strip_prefix("s ")?.trim();
        Some(match s {
            "SATISFIABLE" | "OPTIMUM FOUND" => PbStatus::Satisfiable,
            "UNSATISFIABLE" => PbStatus::Unsatisfiable,
            _ => PbStatus::Unknown,
        })
    })
}
