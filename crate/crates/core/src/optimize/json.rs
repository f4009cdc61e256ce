use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{OptResult, OptStatus, StandardProblem, StepOutcome, YVar};
use crate::algebra::{parse_int, poly_from_json, poly_to_json, PolyJson, VarId};
use crate::encode::{LiftMode, Repr, VarTable};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct YVarJson {
    pub name: String,
    pub bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqJson {
    pub g: PolyJson,
    pub b: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StandardProblemJson {
    pub p: String,
    #[serde(default)]
    pub repr: Repr,
    #[serde(default)]
    pub lift_mode: LiftMode,
    #[serde(rename = "X", default)]
    pub x: Vec<String>,
    #[serde(rename = "Y", default)]
    pub y: Vec<YVarJson>,
    #[serde(rename = "F", default)]
    pub f: Vec<PolyJson>,
    #[serde(rename = "E", default, skip_serializing_if = "Vec::is_empty")]
    pub e: Vec<PolyJson>,
    #[serde(rename = "I", default)]
    pub i: Vec<IneqJson>,
    pub o: PolyJson,
    pub u: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceJson {
    pub alpha: String,
    pub mu: String,
    pub beta: i64,
    pub outcome: StepOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OptResultJson {
    pub status: String,
    pub value: Option<String>,
    pub solution: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub trace: Vec<TraceJson>,
}

impl StandardProblem {
    pub fn to_json(&self) -> StandardProblemJson {
        let names = self.names();
        let name = |v: VarId| names[v as usize].clone();
        StandardProblemJson {
            p: self.p.to_string(),
            repr: self.repr,
            lift_mode: self.lift_mode,
            x: self.x.clone(),
            y: self
                .y
                .iter()
                .map(|y| YVarJson {
                    name: y.name.clone(),
                    bound: y.bound.to_string(),
                    lower: (!y.lower.is_zero()).then(|| y.lower.to_string()),
                })
                .collect(),
            f: self.f.iter().map(|p| poly_to_json(p, &name)).collect(),
            e: self.e.iter().map(|p| poly_to_json(p, &name)).collect(),
            i: self.i.iter().map(|(g, b)| IneqJson { g: poly_to_json(g, &name), b: b.to_string() }).collect(),
            o: poly_to_json(&self.o, &name),
            u: self.u.to_string(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &StandardProblemJson) -> Result<Self> {
        let mut prob = StandardProblem::new(parse_int(&j.p)?);
        prob.repr = j.repr;
        prob.lift_mode = j.lift_mode;
        prob.x = j.x.clone();
        for y in &j.y {
            let lower = y.lower.as_deref().map(parse_int).transpose()?.unwrap_or_default();
            prob.y.push(YVar { name: y.name.clone(), lower, bound: parse_int(&y.bound)? });
        }
        let table = VarTable::from_names(&prob.names())?;
        let mut resolve = |n: &str| table.lookup(n).ok_or_else(|| Error::UnboundedVariable(n.to_string()));
        prob.f = j.f.iter().map(|p| poly_from_json(p, &mut resolve)).collect::<Result<_>>()?;
        prob.e = j.e.iter().map(|p| poly_from_json(p, &mut resolve)).collect::<Result<_>>()?;
        prob.i = j
            .i
            .iter()
            .map(|q| Ok((poly_from_json(&q.g, &mut resolve)?, parse_int(&q.b)?)))
            .collect::<Result<_>>()?;
        prob.o = poly_from_json(&j.o, &mut resolve)?;
        prob.u = parse_int(&j.u)?;
        prob.check()?;
        Ok(prob)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}

impl OptResult {
    pub fn to_json(&self) -> OptResultJson {
        let (status, value, reason) = match &self.status {
            OptStatus::Optimal { value, .. } => ("optimal", Some(value.to_string()), None),
            OptStatus::Infeasible => ("infeasible", None, None),
            OptStatus::Unknown { reason, .. } => ("unknown", None, Some(reason.clone())),
        };
        OptResultJson {
            status: status.into(),
            value,
            solution: self.named().into_iter().map(|(k, v)| (k, v.to_string())).collect(),
            reason,
            trace: self
                .trace
                .iter()
                .map(|t| TraceJson {
                    alpha: t.alpha.to_string(),
                    mu: t.mu.to_string(),
                    beta: t.beta,
                    outcome: t.outcome.clone(),
                    value: t.value.as_ref().map(|v| v.to_string()),
                })
                .collect(),
        }
    }

    /// One JSON object per loop iteration.
    pub fn trace_lines(&self) -> String {
        self.to_json()
            .trace
            .iter()
            .map(|t| serde_json::to_string(t).expect("serializable") + "\n")
            .collect()
    }
}
