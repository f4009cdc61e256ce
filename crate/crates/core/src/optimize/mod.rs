//! Bounded integer minimization by bisection over feasibility queries.
//!
//! A [`StandardProblem`] is encoded once into a base system C plus the
//! Boolean form ō of its objective. Each iteration appends one window
//! equation α + Σ F_j 2^j − ō = 0 and asks a backend whether the result is
//! satisfiable; the answer halves (or better) the interval that must
//! contain the optimum.

mod json;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Ring, SparsePoly, VarId};
use crate::encode::{field_range, BitClass, BooleanSystem, Encoder, LiftMode, Repr};
use crate::error::{Error, Result};
use crate::solver::{solve, BackendConfig, SolveOutcome};

pub use json::{OptResultJson, StandardProblemJson, TraceJson, YVarJson};

/// A bounded integer variable lo ≤ y ≤ hi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YVar {
    pub name: String,
    pub lower: BigInt,
    pub bound: BigInt,
}

/// min o subject to modular equations, exact integer equations and
/// 0 ≤ g ≤ b, with 0 ≤ o < u on the feasible set.
///
/// Variable ids: X first, then Y.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardProblem {
    pub p: BigInt,
    pub repr: Repr,
    pub x: Vec<String>,
    pub y: Vec<YVar>,
    /// each polynomial lives over its own ℤ_k
    pub f: Vec<SparsePoly>,
    /// exact equations over ℤ
    pub e: Vec<SparsePoly>,
    pub i: Vec<(SparsePoly, BigInt)>,
    pub o: SparsePoly,
    pub u: BigInt,
    pub lift_mode: LiftMode,
}

impl StandardProblem {
    pub fn new(p: impl Into<BigInt>) -> Self {
        StandardProblem {
            p: p.into(),
            repr: Repr::Standard,
            x: Vec::new(),
            y: Vec::new(),
            f: Vec::new(),
            e: Vec::new(),
            i: Vec::new(),
            o: SparsePoly::zero(&Ring::Integers),
            u: BigInt::one(),
            lift_mode: LiftMode::default(),
        }
    }

    pub fn add_x(&mut self, name: impl Into<String>) -> VarId {
        assert!(self.y.is_empty(), "declare X variables before Y variables");
        self.x.push(name.into());
        (self.x.len() - 1) as VarId
    }

    pub fn add_y(&mut self, name: impl Into<String>, bound: impl Into<BigInt>) -> VarId {
        self.add_y_range(name, 0, bound)
    }

    pub fn add_y_range(&mut self, name: impl Into<String>, lower: impl Into<BigInt>, bound: impl Into<BigInt>) -> VarId {
        self.y.push(YVar { name: name.into(), lower: lower.into(), bound: bound.into() });
        (self.x.len() + self.y.len() - 1) as VarId
    }

    pub fn names(&self) -> Vec<String> {
        self.x.iter().cloned().chain(self.y.iter().map(|y| y.name.clone())).collect()
    }

    pub fn num_vars(&self) -> usize {
        self.x.len() + self.y.len()
    }

    /// Range of variable `v` in this problem.
    pub fn range(&self, v: VarId) -> Result<(BigInt, BigInt)> {
        let v = v as usize;
        if v < self.x.len() {
            field_range(&self.p, self.repr)
        } else {
            let y = self.y.get(v - self.x.len()).ok_or_else(|| Error::Invalid(format!("no variable {v}")))?;
            Ok((y.lower.clone(), y.bound.clone()))
        }
    }

    fn check(&self) -> Result<()> {
        if self.u < BigInt::one() {
            return Err(Error::Invalid("u must be at least 1".into()));
        }
        if !self.x.is_empty() && !crate::algebra::is_prime(&self.p) {
            return Err(Error::BadModulus(format!("{} is not prime", self.p)));
        }
        for y in &self.y {
            if y.bound < y.lower {
                return Err(Error::UnboundedVariable(y.name.clone()));
            }
        }
        let n = self.num_vars() as VarId;
        let all = self.f.iter().chain(&self.e).chain(self.i.iter().map(|(g, _)| g)).chain([&self.o]);
        for p in all {
            if let Some(v) = p.vars().into_iter().find(|&v| v >= n) {
                return Err(Error::UnboundedVariable(format!("#{v}")));
            }
        }
        for f in &self.f {
            if !matches!(f.ring(), Ring::ModK(_)) {
                return Err(Error::RingMismatch(format!("equations must live over Z/k, got {}", f.ring())));
            }
        }
        Ok(())
    }

    /// Value of `o` at a point given by name.
    pub fn objective_at(&self, values: &BTreeMap<VarId, BigInt>) -> BigInt {
        self.o.eval_int(|v| values.get(&v).cloned().unwrap_or_default())
    }

    /// Whether a point satisfies every constraint.
    pub fn feasible_at(&self, values: &BTreeMap<VarId, BigInt>) -> bool {
        let val = |v: VarId| values.get(&v).cloned().unwrap_or_default();
        for v in 0..self.num_vars() as VarId {
            let Ok((lo, hi)) = self.range(v) else { return false };
            let x = val(v);
            if x < lo || x > hi {
                return false;
            }
        }
        let mod_ok = self.f.iter().all(|f| {
            let k = f.ring().modulus().unwrap();
            f.to_ring(&Ring::Integers).unwrap().eval_int(val).mod_floor(&k).is_zero()
        });
        mod_ok
            && self.e.iter().all(|e| e.eval_int(val).is_zero())
            && self.i.iter().all(|(g, b)| {
                let x = g.eval_int(val);
                !x.is_negative() && &x <= b
            })
    }

    /// Largest magnitude any variable can take (p − 1 for 𝔽_p variables).
    pub fn magnitude_bound(&self) -> BigInt {
        let mut h = if self.x.is_empty() { BigInt::zero() } else { &self.p - 1 };
        for y in &self.y {
            h = h.max(y.bound.abs()).max(y.lower.abs());
        }
        h
    }

    /// Replaces o by o + #(o)·h_o·h^{d_o} and sets u accordingly.
    pub fn shift_objective(&mut self) -> Result<BigInt> {
        let (o, u, shift) = shift_objective(&self.o, &self.magnitude_bound())?;
        self.o = o;
        self.u = u;
        Ok(shift)
    }
}

/// (õ, u, shift) with õ = o + shift, shift = #(o)·h_o·h^{d_o} and
/// u = 2·shift + 1, so 0 ≤ õ < u whenever every variable has |value| ≤ h.
pub fn shift_objective(o: &SparsePoly, h: &BigInt) -> Result<(SparsePoly, BigInt, BigInt)> {
    if o.ring() != &Ring::Integers {
        return Err(Error::RingMismatch("objective must be over ZZ".into()));
    }
    let t = BigInt::from(o.num_terms());
    let shift = t * o.max_abs_coeff() * num_traits::pow(h.clone(), o.total_degree() as usize);
    let shifted = o.add(&SparsePoly::int_constant(&Ring::Integers, shift.clone()))?;
    Ok((shifted, &shift * 2 + 1, shift))
}

/// The system C together with the Boolean objective ō.
#[derive(Clone, Debug)]
pub struct Base {
    pub system: BooleanSystem,
    pub obar: SparsePoly,
    pub u: BigInt,
}

/// Encodes every constraint and the objective into one Boolean system.
/// X and Y bits are shared by all parts.
pub fn build_base(prob: &StandardProblem) -> Result<Base> {
    prob.check()?;
    let mut enc = Encoder::with_vars(&prob.names())?;
    for v in 0..prob.x.len() as VarId {
        enc.declare_field(v, &prob.p, prob.repr)?;
    }
    for (j, y) in prob.y.iter().enumerate() {
        enc.declare_existing((prob.x.len() + j) as VarId, &y.lower, &y.bound, BitClass::YBit)?;
    }
    let mut groups: BTreeMap<BigInt, Vec<SparsePoly>> = BTreeMap::new();
    for f in &prob.f {
        groups.entry(f.ring().modulus().unwrap()).or_default().push(f.clone());
    }
    for (k, polys) in &groups {
        let repr = if k == &prob.p { prob.repr } else { Repr::Standard };
        enc.add_modular(polys, repr, prob.lift_mode, &format!("F mod {k}"))?;
    }
    if !prob.e.is_empty() {
        enc.add_int_equalities(&prob.e, "E")?;
    }
    if !prob.i.is_empty() {
        enc.add_inequalities(&prob.i, "I")?;
    }
    let obar = enc.encode_integer(std::slice::from_ref(&prob.o), "o")?.pop().unwrap();
    Ok(Base { system: enc.finish(), obar, u: prob.u.clone() })
}

/// L_{αβ}: the base system plus α + Σ_{j<β} F_j 2^j − ō.
#[derive(Clone, Debug)]
pub struct LevelSystem {
    pub system: BooleanSystem,
    pub alpha: BigInt,
    pub beta: i64,
    pub fbits: Vec<VarId>,
}

impl LevelSystem {
    /// The window offset Σ F_j 2^j at an assignment.
    pub fn window(&self, assignment: &[u8]) -> BigInt {
        self.fbits.iter().enumerate().map(|(j, &b)| BigInt::from(assignment[b as usize]) << j).sum()
    }
}

pub fn build_level(base: &Base, alpha: &BigInt, beta: i64) -> Result<LevelSystem> {
    if alpha.is_negative() || beta < -1 {
        return Err(Error::Invalid(format!("bad window alpha={alpha} beta={beta}")));
    }
    let mut system = base.system.clone();
    let mut delta = SparsePoly::int_constant(&Ring::Integers, alpha.clone());
    let mut fbits = Vec::new();
    for j in 0..beta.max(0) {
        let b = system.fresh_bit(BitClass::FBit, format!("F.{j}"));
        fbits.push(b);
        delta = delta.add(&SparsePoly::var(&Ring::Integers, b).scale_int(BigInt::one() << j))?;
    }
    delta = delta.sub(&base.obar)?;
    system.push(delta, format!("window alpha={alpha} beta={beta}"));
    Ok(LevelSystem { system, alpha: alpha.clone(), beta, fbits })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepOutcome {
    Sat,
    Unsat,
    Unknown,
}

/// One pass through the loop: the state at its head and the answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub alpha: BigInt,
    pub mu: BigInt,
    pub beta: i64,
    pub outcome: StepOutcome,
    /// ō at the returned witness, for satisfiable steps
    pub value: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptStatus {
    Optimal { value: BigInt, values: BTreeMap<VarId, BigInt>, assignment: Vec<u8> },
    Infeasible,
    /// the backend gave up; [alpha, mu] still brackets the optimum
    Unknown { reason: String, alpha: BigInt, mu: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptResult {
    pub status: OptStatus,
    pub trace: Vec<TraceStep>,
    pub names: Vec<String>,
}

impl OptResult {
    pub fn value(&self) -> Option<&BigInt> {
        match &self.status {
            OptStatus::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn values(&self) -> Option<&BTreeMap<VarId, BigInt>> {
        match &self.status {
            OptStatus::Optimal { values, .. } => Some(values),
            _ => None,
        }
    }

    /// Decoded values keyed by name.
    pub fn named(&self) -> BTreeMap<String, BigInt> {
        self.values()
            .map(|v| v.iter().map(|(k, x)| (self.names[*k as usize].clone(), x.clone())).collect())
            .unwrap_or_default()
    }

    pub fn iterations(&self) -> usize {
        self.trace.len()
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            OptStatus::Optimal { .. } => 0,
            OptStatus::Infeasible => 20,
            OptStatus::Unknown { .. } => 30,
        }
    }
}

/// ⌈log_{4/3} u⌉ + 1.
pub fn iteration_bound(u: &BigInt) -> usize {
    if u <= &BigInt::one() {
        return 1;
    }
    // (4/3)^k ≥ u  ⇔  4^k ≥ u·3^k
    let mut k = 0usize;
    let (mut a, mut b) = (BigInt::one(), u.clone());
    while a < b {
        a *= 4;
        b *= 3;
        k += 1;
    }
    k + 1
}

/// ⌊log₂ n⌋ − 1 for n ≥ 1.
fn beta_for(width: &BigInt) -> i64 {
    width.bits() as i64 - 2
}

pub fn qfp_opt(prob: &StandardProblem, cfg: &BackendConfig) -> Result<OptResult> {
    qfp_opt_observed(prob, cfg, |_| {})
}

/// As [`qfp_opt`], calling `observe` with every completed step.
pub fn qfp_opt_observed(
    prob: &StandardProblem,
    cfg: &BackendConfig,
    mut observe: impl FnMut(&TraceStep),
) -> Result<OptResult> {
    let base = build_base(prob)?;
    let names = prob.names();
    let user: Vec<VarId> = base.system.decode.keys().copied().collect();
    let mut alpha = BigInt::zero();
    let mut mu = prob.u.clone();
    let mut best: Option<(BTreeMap<VarId, BigInt>, Vec<u8>)> = None;
    let mut trace = Vec::new();
    loop {
        let beta = beta_for(&(&mu - &alpha));
        let level = build_level(&base, &alpha, beta)?;
        let outcome = solve(&level.system, cfg)?;
        let mut step =
            TraceStep { alpha: alpha.clone(), mu: mu.clone(), beta, outcome: StepOutcome::Unknown, value: None };
        match outcome {
            SolveOutcome::Sat(z) => {
                let sol = level.system.decode(&z)?;
                let values: BTreeMap<VarId, BigInt> =
                    user.iter().map(|v| (*v, sol.decoded[v].clone())).collect();
                let obar = base.obar.eval_int(|v| BigInt::from(z[v as usize]));
                debug_assert_eq!(obar, prob.objective_at(&values));
                step.outcome = StepOutcome::Sat;
                step.value = Some(obar.clone());
                observe(&step);
                trace.push(step);
                if level.window(&z).is_zero() {
                    let status = OptStatus::Optimal { value: alpha, values, assignment: z };
                    return Ok(OptResult { status, trace, names });
                }
                mu = obar;
                best = Some((values, z));
            }
            SolveOutcome::Unsat => {
                step.outcome = StepOutcome::Unsat;
                observe(&step);
                trace.push(step);
                if &mu - &alpha > BigInt::one() {
                    alpha += BigInt::one() << beta.max(0).to_usize().unwrap();
                } else if mu != prob.u {
                    let (values, assignment) = best.take().expect("a witness was recorded when mu moved");
                    let status = OptStatus::Optimal { value: mu, values, assignment };
                    return Ok(OptResult { status, trace, names });
                } else {
                    return Ok(OptResult { status: OptStatus::Infeasible, trace, names });
                }
            }
            SolveOutcome::Unknown(reason) => {
                observe(&step);
                trace.push(step);
                let status = OptStatus::Unknown { reason, alpha, mu };
                return Ok(OptResult { status, trace, names });
            }
        }
    }
}
