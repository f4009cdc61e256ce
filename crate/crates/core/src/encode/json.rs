use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::registry::{BoolVar, Registry, VarTable};
use super::system::{BooleanSystem, DeriveRule, DerivedVar, ExtLayout, LiftRecord};
use super::theta::AffineExpansion;
use crate::algebra::{parse_int, poly_from_json, poly_to_json, Monomial, PolyJson, Ring, RingJson, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub var: String,
    pub offset: String,
    pub weights: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleJson {
    Monomial { m: BTreeMap<String, u32>, modulus: Option<String> },
    ExtComponent { m: BTreeMap<String, u32>, index: usize },
    Quotient { base: PolyJson, modulus: String },
    Value { poly: PolyJson },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivedJson {
    #[serde(flatten)]
    pub expansion: ExpansionJson,
    pub rule: RuleJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LiftJson {
    pub equation: usize,
    pub modulus: String,
    pub m_lo: String,
    pub bound: String,
    pub counter: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExtJson {
    pub ring: RingJson,
    pub names: Vec<String>,
    pub components: Vec<Vec<String>>,
    pub primary: usize,
}

/// Serialized [`BooleanSystem`]; bits and variables are referred to by name.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BooleanSystemJson {
    pub registry: Vec<BoolVar>,
    pub equations: Vec<PolyJson>,
    pub provenance: Vec<String>,
    pub vars: Vec<String>,
    pub decode: Vec<ExpansionJson>,
    pub derived: Vec<DerivedJson>,
    pub lifts: Vec<LiftJson>,
    pub ext: Option<ExtJson>,
}

fn mono_names(m: &Monomial, name: &dyn Fn(VarId) -> String) -> BTreeMap<String, u32> {
    m.pairs().iter().map(|&(v, e)| (name(v), e)).collect()
}

impl BooleanSystem {
    pub fn to_json(&self) -> BooleanSystemJson {
        let bit = |v: VarId| self.registry.name(v);
        let var = |v: VarId| self.vars.name(v).to_string();
        let exp = |e: &AffineExpansion| ExpansionJson {
            var: var(e.var),
            offset: e.offset.to_string(),
            weights: e.weights.iter().map(|(b, w)| (bit(*b), w.to_string())).collect(),
        };
        let ext_name = |v: VarId| self.ext.as_ref().map_or_else(String::new, |l| l.names[v as usize].clone());
        BooleanSystemJson {
            registry: self.registry.iter().cloned().collect(),
            equations: self.equations.iter().map(|e| poly_to_json(e, &bit)).collect(),
            provenance: self.provenance.clone(),
            vars: self.vars.names().to_vec(),
            decode: self.decode.values().map(exp).collect(),
            derived: self
                .derived
                .iter()
                .map(|d| DerivedJson {
                    expansion: exp(&d.expansion),
                    rule: match &d.rule {
                        DeriveRule::Monomial { monomial, modulus } => RuleJson::Monomial {
                            m: mono_names(monomial, &var),
                            modulus: modulus.as_ref().map(|k| k.to_string()),
                        },
                        DeriveRule::ExtComponent { monomial, index } => {
                            RuleJson::ExtComponent { m: mono_names(monomial, &ext_name), index: *index }
                        }
                        DeriveRule::Quotient { base, modulus } => {
                            RuleJson::Quotient { base: poly_to_json(base, &bit), modulus: modulus.to_string() }
                        }
                        DeriveRule::Value { poly } => RuleJson::Value { poly: poly_to_json(poly, &bit) },
                    },
                })
                .collect(),
            lifts: self
                .lifts
                .iter()
                .map(|l| LiftJson {
                    equation: l.equation,
                    modulus: l.modulus.to_string(),
                    m_lo: l.m_lo.to_string(),
                    bound: l.bound.to_string(),
                    counter: var(l.counter),
                })
                .collect(),
            ext: self.ext.as_ref().map(|l| ExtJson {
                ring: RingJson::from_ring(&Ring::ExtField(l.field.clone())),
                names: l.names.clone(),
                components: l.components.iter().map(|c| c.iter().map(|&v| var(v)).collect()).collect(),
                primary: l.primary,
            }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &BooleanSystemJson) -> Result<Self> {
        let registry = Registry::from_vars(j.registry.clone())?;
        let vars = VarTable::from_names(&j.vars)?;
        let bit = |n: &str| registry.lookup(n).ok_or_else(|| Error::Parse(format!("unknown bit {n:?}")));
        let var = |n: &str| vars.lookup(n).ok_or_else(|| Error::Parse(format!("unknown variable {n:?}")));
        let exp = |e: &ExpansionJson| -> Result<AffineExpansion> {
            Ok(AffineExpansion {
                var: var(&e.var)?,
                name: e.var.clone(),
                weights: e.weights.iter().map(|(b, w)| Ok((bit(b)?, parse_int(w)?))).collect::<Result<_>>()?,
                offset: parse_int(&e.offset)?,
            })
        };
        let ext = match &j.ext {
            None => None,
            Some(x) => {
                let Ring::ExtField(field) = x.ring.to_ring()? else {
                    return Err(Error::Parse("ext ring must be an extension field".into()));
                };
                let components = x
                    .components
                    .iter()
                    .map(|c| c.iter().map(|n| var(n)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Some(ExtLayout { field, names: x.names.clone(), components, primary: x.primary })
            }
        };
        let ext_index: HashMap<&str, VarId> = j
            .ext
            .as_ref()
            .map(|x| x.names.iter().enumerate().map(|(i, n)| (n.as_str(), i as VarId)).collect())
            .unwrap_or_default();
        let mono = |m: &BTreeMap<String, u32>, ext: bool| -> Result<Monomial> {
            let mut pairs = Vec::new();
            for (n, &e) in m {
                let v = if ext {
                    *ext_index.get(n.as_str()).ok_or_else(|| Error::Parse(format!("unknown ext variable {n:?}")))?
                } else {
                    var(n)?
                };
                pairs.push((v, e));
            }
            Ok(Monomial::from_pairs(pairs))
        };
        let poly = |p: &PolyJson| poly_from_json(p, &mut |n| bit(n));
        let equations = j.equations.iter().map(poly).collect::<Result<Vec<_>>>()?;
        if equations.len() != j.provenance.len() {
            return Err(Error::Parse("provenance length differs from equation count".into()));
        }
        let decode = j.decode.iter().map(|e| Ok((var(&e.var)?, exp(e)?))).collect::<Result<BTreeMap<_, _>>>()?;
        let derived = j
            .derived
            .iter()
            .map(|d| {
                let rule = match &d.rule {
                    RuleJson::Monomial { m, modulus } => DeriveRule::Monomial {
                        monomial: mono(m, false)?,
                        modulus: modulus.as_deref().map(parse_int).transpose()?,
                    },
                    RuleJson::ExtComponent { m, index } => {
                        DeriveRule::ExtComponent { monomial: mono(m, true)?, index: *index }
                    }
                    RuleJson::Quotient { base, modulus } => {
                        DeriveRule::Quotient { base: poly(base)?, modulus: parse_int(modulus)? }
                    }
                    RuleJson::Value { poly: p } => DeriveRule::Value { poly: poly(p)? },
                };
                Ok(DerivedVar { expansion: exp(&d.expansion)?, rule })
            })
            .collect::<Result<Vec<_>>>()?;
        let lifts = j
            .lifts
            .iter()
            .map(|l| {
                Ok(LiftRecord {
                    equation: l.equation,
                    modulus: parse_int(&l.modulus)?,
                    m_lo: parse_int(&l.m_lo)?,
                    bound: parse_int(&l.bound)?,
                    counter: var(&l.counter)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BooleanSystem {
            registry,
            equations,
            provenance: j.provenance.clone(),
            vars,
            decode,
            derived,
            lifts,
            ext,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }
}
