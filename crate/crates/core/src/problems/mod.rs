//! Builders for concrete problem families on top of [`StandardProblem`]
//! and [`BooleanSystem`], plus seeded fixture generators.

mod fixtures;
mod lattice;
mod lp;
mod noise;
mod ntru;
mod short;


use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::parse_int;
use crate::encode::BooleanSystem;
use crate::error::{Error, Result};
use crate::optimize::{OptResult, StandardProblem};
use crate::solver::{solve, BackendConfig, SolveOutcome};

pub use fixtures::{planted_lswn, random_full_rank, random_matrix, random_qubo, random_sis_matrix};
pub use lattice::{cvp_build, hnf, in_lattice, rank, svp_build, svp_coeff_bound, HnfResult, LatticeInstance};
pub use lp::{binlp_build, qubo_build};
pub use noise::{lswn_system, pswn_build, violated};
pub use ntru::{
    ntru_attack_system, ntru_keygen, ntru_key_values, ntru_min_weight_system, ntru_problem, NtruAttack, NtruKey,
    NtruParams, NtruParamsJson,
};
pub use short::{linear_system, smallest_solution_build, sis_build, sis_problem};

/// Integer matrix, row-major.
pub type Matrix = Vec<Vec<BigInt>>;

/// Largest absolute entry.
pub fn inf_norm(m: &[Vec<BigInt>]) -> BigInt {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}

pub fn vec_inf_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Converts a small literal matrix.
pub fn matrix(rows: &[&[i64]]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Whitespace text (one row per line, `#` comments) or a JSON array of rows.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let t = text.trim();
    let rows: Matrix = if t.starts_with('[') {
        let v: Vec<Vec<serde_json::Value>> = serde_json::from_str(t)?;
        v.iter()
            .map(|r| r.iter().map(json_int).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?
    } else {
        t.lines()
            .map(|l| l.split('#').next().unwrap().trim())
            .filter(|l| !l.is_empty())
            .map(|l| l.split_whitespace().map(parse_int).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?
    };
    check_rect(&rows)?;
    Ok(rows)
}

pub(crate) fn json_int(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => parse_int(&n.to_string()),
        serde_json::Value::String(s) => parse_int(s),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

pub(crate) fn check_rect(rows: &[Vec<BigInt>]) -> Result<()> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    let n = rows[0].len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("row of length {} in a matrix with {n} columns", r.len())));
    }
    Ok(())
}

/// A problem whose objective was shifted by a constant to become
/// nonnegative; the caller's objective is `value − shift`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shifted {
    pub problem: StandardProblem,
    pub shift: BigInt,
}

impl Shifted {
    pub fn original_value(&self, r: &OptResult) -> Option<BigInt> {
        r.value().map(|v| v - &self.shift)
    }
}

/// Outcome of a pure feasibility query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Sat { assignment: Vec<u8>, values: BTreeMap<String, BigInt> },
    Unsat,
    Unknown(String),
}

impl Feasibility {
    pub fn exit_code(&self) -> i32 {
        match self {
            Feasibility::Sat { .. } => 0,
            Feasibility::Unsat => 20,
            Feasibility::Unknown(_) => 30,
        }
    }

    pub fn values(&self) -> Option<&BTreeMap<String, BigInt>> {
        match self {
            Feasibility::Sat { values, .. } => Some(values),
            _ => None,
        }
    }
}

/// Solves and decodes the user variables of `sys`.
pub fn solve_feasibility(sys: &BooleanSystem, cfg: &BackendConfig) -> Result<Feasibility> {
    Ok(match solve(sys, cfg)? {
        SolveOutcome::Sat(a) => {
            let sol = sys.decode(&a)?;
            Feasibility::Sat { values: sys.named_values(&sol), assignment: a }
        }
        SolveOutcome::Unsat => Feasibility::Unsat,
        SolveOutcome::Unknown(r) => Feasibility::Unknown(r),
    })
}

/// ⌈√x⌉ for x ≥ 0.
pub fn ceil_sqrt(x: &BigInt) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let r = x.sqrt();
    if &(&r * &r) == x {
        r
    } else {
        r + 1
    }
}
