use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::registry::{BitClass, Registry, VarTable};
use super::theta::AffineExpansion;
use crate::algebra::{Elem, ExtField, Monomial, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};

/// How a non-primary variable's value follows from the others.
#[derive(Clone, Debug, PartialEq)]
pub enum DeriveRule {
    /// A product of integer-level variables, reduced mod `modulus` into the
    /// expansion's range when given.
    Monomial { monomial: Monomial, modulus: Option<BigInt> },
    /// Coordinate `index` of a monomial in extension-field variables.
    ExtComponent { monomial: Monomial, index: usize },
    /// Exact quotient of a Boolean polynomial by `modulus`.
    Quotient { base: SparsePoly, modulus: BigInt },
    /// Value of a Boolean polynomial.
    Value { poly: SparsePoly },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivedVar {
    pub expansion: AffineExpansion,
    pub rule: DeriveRule,
}

/// Extension-field variables and their 𝔽_p coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtLayout {
    pub field: ExtField,
    pub names: Vec<String>,
    /// ext variable id → coordinate variable ids
    pub components: Vec<Vec<VarId>>,
    /// how many leading ext variables are user variables
    pub primary: usize,
}

/// One modular lift f − k·(θ_M(U) + m_lo).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub equation: usize,
    pub modulus: BigInt,
    pub m_lo: BigInt,
    pub bound: BigInt,
    pub counter: VarId,
}

/// Integer multilinear equations over Boolean variables plus everything
/// needed to decode and to rebuild witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct BooleanSystem {
    pub registry: Registry,
    pub equations: Vec<SparsePoly>,
    pub provenance: Vec<String>,
    /// integer-level variable names
    pub vars: VarTable,
    /// user variables
    pub decode: BTreeMap<VarId, AffineExpansion>,
    /// everything else with an expansion, in dependency order
    pub derived: Vec<DerivedVar>,
    pub lifts: Vec<LiftRecord>,
    pub ext: Option<ExtLayout>,
}

/// A Boolean assignment together with the decoded user variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedSolution {
    pub assignment: Vec<u8>,
    pub decoded: BTreeMap<VarId, BigInt>,
}

impl BooleanSystem {
    pub fn empty() -> Self {
        BooleanSystem {
            registry: Registry::new(),
            equations: Vec::new(),
            provenance: Vec::new(),
            vars: VarTable::new(),
            decode: BTreeMap::new(),
            derived: Vec::new(),
            lifts: Vec::new(),
            ext: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.registry.len()
    }

    pub fn push(&mut self, eq: SparsePoly, tag: impl Into<String>) {
        debug_assert!(eq.is_multilinear());
        self.equations.push(eq);
        self.provenance.push(tag.into());
    }

    pub fn fresh_bit(&mut self, class: BitClass, name: String) -> VarId {
        self.registry.fresh(class, None, name)
    }

    /// Sum of stored term counts.
    pub fn total_sparseness(&self) -> usize {
        self.equations.iter().map(|e| e.num_terms()).sum()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        self.vars.name(v)
    }

    /// Residual of every equation; all zero means `assignment` is a solution.
    pub fn residuals(&self, assignment: &[u8]) -> Result<Vec<BigInt>> {
        if assignment.len() < self.registry.len() {
            return Err(Error::MissingBits(format!(
                "{} of {} bits assigned",
                assignment.len(),
                self.registry.len()
            )));
        }
        Ok(self.equations.iter().map(|e| e.eval_int(|v| BigInt::from(assignment[v as usize]))).collect())
    }

    pub fn is_solution(&self, assignment: &[u8]) -> bool {
        self.residuals(assignment).map(|r| r.iter().all(|x| x.is_zero())).unwrap_or(false)
    }

    pub fn decode(&self, assignment: &[u8]) -> Result<EncodedSolution> {
        if assignment.len() < self.registry.len() {
            return Err(Error::MissingBits(format!(
                "{} of {} bits assigned",
                assignment.len(),
                self.registry.len()
            )));
        }
        let decoded = self
            .decode
            .iter()
            .map(|(v, e)| Ok((*v, e.value(assignment)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(EncodedSolution { assignment: assignment.to_vec(), decoded })
    }

    /// Decoded values keyed by variable name.
    pub fn named_values(&self, sol: &EncodedSolution) -> BTreeMap<String, BigInt> {
        sol.decoded.iter().map(|(v, x)| (self.vars.name(*v).to_string(), x.clone())).collect()
    }

    /// Reassembles extension-field values from their coordinates; for prime
    /// fields returns the decoded values reduced into ℤ_p.
    pub fn field_values(&self, sol: &EncodedSolution) -> BTreeMap<String, Elem> {
        match &self.ext {
            Some(layout) => (0..layout.primary)
                .map(|i| {
                    let coords = layout.components[i]
                        .iter()
                        .map(|c| sol.decoded[c].mod_floor(&BigInt::from(layout.field.p())).to_u64().unwrap())
                        .collect();
                    (layout.names[i].clone(), Elem::Ext(coords))
                })
                .collect(),
            None => sol
                .decoded
                .iter()
                .map(|(v, x)| (self.vars.name(*v).to_string(), Elem::Int(x.clone())))
                .collect(),
        }
    }

    /// Builds a full Boolean assignment from values of the user variables
    /// by choosing preimages and evaluating every derivation rule.
    pub fn complete_witness(&self, values: &BTreeMap<VarId, BigInt>) -> Result<Vec<u8>> {
        let mut bits = vec![0u8; self.registry.len()];
        let mut ints: BTreeMap<VarId, BigInt> = BTreeMap::new();
        for (v, e) in &self.decode {
            let x = values
                .get(v)
                .ok_or_else(|| Error::MissingBits(format!("no value for {}", self.vars.name(*v))))?;
            set_preimage(e, x, &mut bits)?;
            ints.insert(*v, x.clone());
        }
        for d in &self.derived {
            let e = &d.expansion;
            let x = match &d.rule {
                DeriveRule::Monomial { monomial, modulus } => {
                    let mut x = BigInt::from(1);
                    for &(v, k) in monomial.pairs() {
                        let base = ints
                            .get(&v)
                            .ok_or_else(|| Error::MissingBits(format!("no value for {}", self.vars.name(v))))?;
                        x *= num_traits::pow(base.clone(), k as usize);
                    }
                    match modulus {
                        Some(k) => &e.offset + (x - &e.offset).mod_floor(k),
                        None => x,
                    }
                }
                DeriveRule::ExtComponent { monomial, index } => {
                    let layout = self.ext.as_ref().ok_or_else(|| Error::Invalid("missing ext layout".into()))?;
                    let ring = Ring::ExtField(layout.field.clone());
                    let p = BigInt::from(layout.field.p());
                    let mut acc = ring.one();
                    for &(v, k) in monomial.pairs() {
                        let coords = layout.components[v as usize]
                            .iter()
                            .map(|c| {
                                ints.get(c)
                                    .map(|x| x.mod_floor(&p).to_u64().unwrap())
                                    .ok_or_else(|| Error::MissingBits(format!("no value for {}", self.vars.name(*c))))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        acc = ring.mul(&acc, &ring.pow(&Elem::Ext(coords), k)?)?;
                    }
                    let Elem::Ext(c) = acc else { unreachable!() };
                    &e.offset + (BigInt::from(c[*index]) - &e.offset).mod_floor(&p)
                }
                DeriveRule::Quotient { base, modulus } => {
                    let b = base.eval_int(|v| BigInt::from(bits[v as usize]));
                    let (q, r) = b.div_mod_floor(modulus);
                    if !r.is_zero() {
                        return Err(Error::NotAWitness(format!("{} is not divisible by {modulus}", e.name)));
                    }
                    q
                }
                DeriveRule::Value { poly } => poly.eval_int(|v| BigInt::from(bits[v as usize])),
            };
            set_preimage(e, &x, &mut bits)?;
            ints.insert(e.var, x);
        }
        Ok(bits)
    }

    /// Names integer-level variables: user variables first.
    pub fn expansion_of(&self, v: VarId) -> Option<&AffineExpansion> {
        self.decode.get(&v).or_else(|| self.derived.iter().map(|d| &d.expansion).find(|e| e.var == v))
    }
}

fn set_preimage(e: &AffineExpansion, x: &BigInt, bits: &mut [u8]) -> Result<()> {
    let pre = e
        .preimage(x)
        .ok_or_else(|| Error::NotAWitness(format!("{} = {x} outside [{}, {}]", e.name, e.min(), e.max())))?;
    for (b, v) in pre {
        bits[b as usize] = v;
    }
    Ok(())
}
