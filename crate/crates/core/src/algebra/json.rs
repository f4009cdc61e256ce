//! JSON forms of rings, polynomials and polynomial systems.
//!
//! Coefficients travel as decimal strings; extension-field coefficients as a
//! list of decimal strings in the power basis.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, SparsePoly, VarId};
use super::ring::{Elem, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RingJson {
    Integers,
    Mod { modulus: String },
    Ext { p: String, phi: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffJson {
    Scalar(String),
    Vector(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub m: BTreeMap<String, u32>,
    pub c: CoeffJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub ring: RingJson,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

pub(crate) fn parse_int(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|_| Error::Parse(format!("not a small nonnegative integer: {s:?}")))
}

impl RingJson {
    pub fn from_ring(r: &Ring) -> Self {
        match r {
            Ring::Integers => RingJson::Integers,
            Ring::ModK(k) => RingJson::Mod { modulus: k.to_string() },
            Ring::ExtField(f) => RingJson::Ext {
                p: f.p().to_string(),
                phi: f.phi().iter().map(|c| c.to_string()).collect(),
            },
        }
    }

    pub fn to_ring(&self) -> Result<Ring> {
        match self {
            RingJson::Integers => Ok(Ring::Integers),
            RingJson::Mod { modulus } => Ring::modk(parse_int(modulus)?),
            RingJson::Ext { p, phi } => {
                let phi = phi.iter().map(|c| parse_u64(c)).collect::<Result<Vec<_>>>()?;
                Ring::ext(parse_u64(p)?, phi)
            }
        }
    }
}

fn coeff_to_json(c: &Elem) -> CoeffJson {
    match c {
        Elem::Int(v) => CoeffJson::Scalar(v.to_string()),
        Elem::Ext(v) => CoeffJson::Vector(v.iter().map(|x| x.to_string()).collect()),
    }
}

fn coeff_from_json(ring: &Ring, c: &CoeffJson) -> Result<Elem> {
    match (ring, c) {
        (_, CoeffJson::Scalar(s)) => Ok(ring.from_int(&parse_int(s)?)),
        (Ring::ExtField(f), CoeffJson::Vector(v)) => {
            if v.len() != f.degree() {
                return Err(Error::Parse(format!("expected {} coordinates", f.degree())));
            }
            let coords = v.iter().map(|s| Ok(parse_u64(s)? % f.p())).collect::<Result<Vec<_>>>()?;
            Ok(Elem::Ext(coords))
        }
        _ => Err(Error::Parse("vector coefficient outside an extension field".into())),
    }
}

pub fn terms_to_json(p: &SparsePoly, names: &dyn Fn(VarId) -> String) -> Vec<TermJson> {
    p.terms()
        .map(|(m, c)| TermJson {
            m: m.pairs().iter().map(|&(v, e)| (names(v), e)).collect(),
            c: coeff_to_json(c),
        })
        .collect()
}

pub fn terms_from_json(
    ring: &Ring,
    terms: &[TermJson],
    resolve: &mut dyn FnMut(&str) -> Result<VarId>,
) -> Result<SparsePoly> {
    let mut p = SparsePoly::zero(ring);
    for t in terms {
        let mut pairs = Vec::new();
        for (name, &e) in &t.m {
            pairs.push((resolve(name)?, e));
        }
        p.add_term(Monomial::from_pairs(pairs), coeff_from_json(ring, &t.c)?);
    }
    Ok(p)
}

pub fn poly_to_json(p: &SparsePoly, names: &dyn Fn(VarId) -> String) -> PolyJson {
    PolyJson {
        ring: RingJson::from_ring(p.ring()),
        vars: p.vars().into_iter().map(names).collect(),
        terms: terms_to_json(p, names),
    }
}

/// Parses a polynomial, resolving variable names through `resolve`.
pub fn poly_from_json(j: &PolyJson, resolve: &mut dyn FnMut(&str) -> Result<VarId>) -> Result<SparsePoly> {
    let ring = j.ring.to_ring()?;
    for t in &j.terms {
        for name in t.m.keys() {
            if !j.vars.contains(name) {
                return Err(Error::Parse(format!("variable {name:?} not listed in vars")));
            }
        }
    }
    terms_from_json(&ring, &j.terms, resolve)
}

/// A list of polynomials over one ring with named variables `0..vars.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub ring: Ring,
    pub vars: Vec<String>,
    pub polys: Vec<SparsePoly>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolySystemJson {
    pub ring: RingJson,
    pub vars: Vec<String>,
    pub polys: Vec<Vec<TermJson>>,
}

impl PolySystem {
    pub fn new(ring: Ring, vars: Vec<String>, polys: Vec<SparsePoly>) -> Result<Self> {
        for p in &polys {
            if p.ring() != &ring {
                return Err(Error::RingMismatch(format!("{} vs {}", p.ring(), ring)));
            }
            if let Some(&v) = p.vars().iter().next_back() {
                if v as usize >= vars.len() {
                    return Err(Error::Invalid(format!("variable id {v} has no name")));
                }
            }
        }
        Ok(PolySystem { ring, vars, polys })
    }

    pub fn name(&self, v: VarId) -> String {
        self.vars.get(v as usize).cloned().unwrap_or_else(|| format!("v{v}"))
    }

    pub fn to_json(&self) -> PolySystemJson {
        let names = |v: VarId| self.name(v);
        PolySystemJson {
            ring: RingJson::from_ring(&self.ring),
            vars: self.vars.clone(),
            polys: self.polys.iter().map(|p| terms_to_json(p, &names)).collect(),
        }
    }

    pub fn from_json(j: &PolySystemJson) -> Result<Self> {
        let ring = j.ring.to_ring()?;
        let index: HashMap<&str, VarId> = j.vars.iter().enumerate().map(|(i, n)| (n.as_str(), i as VarId)).collect();
        if index.len() != j.vars.len() {
            return Err(Error::Parse("duplicate variable names".into()));
        }
        let mut resolve = |n: &str| index.get(n).copied().ok_or_else(|| Error::Parse(format!("unknown variable {n:?}")));
        let polys = j
            .polys
            .iter()
            .map(|t| terms_from_json(&ring, t, &mut resolve))
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(ring, j.vars.clone(), polys)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }
}
