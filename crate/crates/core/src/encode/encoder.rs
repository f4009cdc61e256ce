use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::quadratize::{quadratize, Quadratization};
use super::registry::{BitClass, VarTable};
use super::system::{BooleanSystem, DeriveRule, DerivedVar, LiftRecord};
use super::theta::{expansion_map, theta_centered, AffineExpansion};
use crate::algebra::{Ring, SparsePoly, VarId};
use crate::error::{Error, Result};

/// Representation of 𝔽_p values: {0..p−1} or {−(p−1)/2..(p−1)/2}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Repr {
    #[default]
    Standard,
    Centered,
}

/// How the range of the multiple counter of a lifted equation is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiftMode {
    /// M = number of terms
    TermCount,
    /// M = ⌊(sum of coefficients)/k⌋
    #[default]
    CoeffSum,
    /// interval arithmetic over signed coefficients
    SignedRange,
}

/// Value range of ℤ_k in the given representation.
pub fn field_range(modulus: &BigInt, repr: Repr) -> Result<(BigInt, BigInt)> {
    match repr {
        Repr::Standard => Ok((BigInt::zero(), modulus - 1)),
        Repr::Centered => {
            if modulus.is_even() {
                return Err(Error::CenteredRepUnsupported(modulus.to_string()));
            }
            let h: BigInt = (modulus - 1) / 2;
            Ok((-h.clone(), h))
        }
    }
}

/// In signed mode the constant is left alone, so the lift interval is the
/// true value range of the centered polynomial.
fn reduce_coeffs(p: &SparsePoly, k: &BigInt, signed: bool) -> SparsePoly {
    let terms = p.int_terms().map(|(m, c)| {
        if signed && m.is_one() {
            return (m.clone(), c.clone());
        }
        let mut r = c.mod_floor(k);
        if signed && &(&r * 2) > k {
            r -= k;
        }
        (m.clone(), r)
    });
    SparsePoly::from_int_terms(&Ring::Integers, terms.collect::<Vec<_>>())
}

/// Shared state of one encoding pipeline: integer-level variables, their
/// bit expansions, and the equations emitted so far.
#[derive(Clone, Debug)]
pub struct Encoder {
    sys: BooleanSystem,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Encoder { sys: BooleanSystem::empty() }
    }

    /// Starts from existing variable names (ids are positions).
    pub fn with_vars(names: &[String]) -> Result<Self> {
        let mut e = Self::new();
        e.sys.vars = VarTable::from_names(names)?;
        Ok(e)
    }

    pub fn system(&self) -> &BooleanSystem {
        &self.sys
    }

    pub fn system_mut(&mut self) -> &mut BooleanSystem {
        &mut self.sys
    }

    pub fn finish(self) -> BooleanSystem {
        self.sys
    }

    pub fn vars(&self) -> &VarTable {
        &self.sys.vars
    }

    pub fn fresh_var(&mut self, name: &str) -> VarId {
        self.sys.vars.fresh(name)
    }

    fn expansion(&mut self, var: VarId, lo: &BigInt, hi: &BigInt, class: BitClass) -> Result<AffineExpansion> {
        if hi < lo {
            return Err(Error::Invalid(format!("empty range [{lo}, {hi}] for {}", self.sys.vars.name(var))));
        }
        let label = self.sys.vars.name(var).to_string();
        Ok(theta_centered(&(hi - lo), &-lo, &mut self.sys.registry, class, var, &label))
    }

    /// Gives an existing variable the range [lo, hi] as a user variable.
    pub fn declare_existing(&mut self, var: VarId, lo: &BigInt, hi: &BigInt, class: BitClass) -> Result<()> {
        if self.sys.decode.contains_key(&var) {
            return Err(Error::Invalid(format!("{} declared twice", self.sys.vars.name(var))));
        }
        let e = self.expansion(var, lo, hi, class)?;
        self.sys.decode.insert(var, e);
        Ok(())
    }

    /// New user variable with range [lo, hi].
    pub fn declare(&mut self, name: &str, lo: &BigInt, hi: &BigInt, class: BitClass) -> Result<VarId> {
        let v = self.fresh_var(name);
        self.declare_existing(v, lo, hi, class)?;
        Ok(v)
    }

    pub fn declare_field(&mut self, var: VarId, modulus: &BigInt, repr: Repr) -> Result<()> {
        let (lo, hi) = field_range(modulus, repr)?;
        self.declare_existing(var, &lo, &hi, BitClass::XBit)
    }

    /// Variable whose value is determined by `rule`.
    pub fn derive(&mut self, var: VarId, lo: &BigInt, hi: &BigInt, class: BitClass, rule: DeriveRule) -> Result<()> {
        let expansion = self.expansion(var, lo, hi, class)?;
        self.sys.derived.push(DerivedVar { expansion, rule });
        Ok(())
    }

    fn expansion_for(&self, v: VarId) -> Option<&AffineExpansion> {
        self.sys.expansion_of(v)
    }

    /// Substitutes every variable by its expansion and folds X² = X.
    pub fn to_bits(&self, p: &SparsePoly) -> Result<SparsePoly> {
        let p = match p.ring() {
            Ring::Integers => p.clone(),
            Ring::ModK(_) => p.to_ring(&Ring::Integers)?,
            Ring::ExtField(_) => return Err(Error::RingMismatch("extension polynomials need descent first".into())),
        };
        let mut exps = Vec::new();
        for v in p.vars() {
            let e = self
                .expansion_for(v)
                .ok_or_else(|| Error::UnboundedVariable(self.sys.vars.name(v).to_string()))?;
            exps.push(e);
        }
        p.substitute_multilinear(&expansion_map(exps))
    }

    fn has_signed(&self) -> bool {
        self.sys.decode.values().any(|e| e.offset.is_negative())
    }

    /// Bit-blasts degree ≤ 2 polynomials over ℤ_k; coefficients are reduced
    /// into {0..k−1}, or into (−k/2, k/2] when `signed`.
    pub fn blast(&self, polys: &[SparsePoly], signed: bool) -> Result<Vec<SparsePoly>> {
        let mut out = Vec::with_capacity(polys.len());
        for p in polys {
            let k = match p.ring() {
                Ring::ModK(k) => k.clone(),
                other => return Err(Error::RingMismatch(format!("bit-blasting needs Z/k, got {other}"))),
            };
            let d = p.total_degree();
            if d > 2 {
                return Err(Error::NotQuadratic(d));
            }
            out.push(reduce_coeffs(&self.to_bits(p)?, &k, signed));
        }
        Ok(out)
    }

    /// Appends f − k·U with U = θ_M + m_lo covering every attainable f/k.
    pub fn lift(&mut self, f: SparsePoly, k: &BigInt, mode: LiftMode, tag: &str) -> Result<usize> {
        if k < &BigInt::from(2) {
            return Err(Error::BadModulus(k.to_string()));
        }
        let negative = f.int_terms().any(|(_, c)| c.is_negative());
        let mode = if negative { LiftMode::SignedRange } else { mode };
        let (m_lo, bound) = match mode {
            LiftMode::TermCount => (BigInt::zero(), BigInt::from(f.num_terms())),
            LiftMode::CoeffSum => (BigInt::zero(), f.coeff_sum().div_floor(k)),
            LiftMode::SignedRange => {
                let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
                for (m, c) in f.int_terms() {
                    if m.is_one() {
                        lo += c;
                        hi += c;
                    } else if c.is_negative() {
                        lo += c;
                    } else {
                        hi += c;
                    }
                }
                let m_lo = -((-lo).div_floor(k));
                let top = hi.div_floor(k);
                let bound = if top < m_lo { BigInt::zero() } else { top - &m_lo };
                (m_lo, bound)
            }
        };
        let index = self.sys.equations.len();
        let counter = self.fresh_var(&format!("U{index}"));
        let hi = &m_lo + &bound;
        self.derive(
            counter,
            &m_lo,
            &hi,
            BitClass::UBit,
            DeriveRule::Quotient { base: f.clone(), modulus: k.clone() },
        )?;
        let u = self.sys.derived.last().unwrap().expansion.to_poly();
        let eq = f.sub(&u.scale_int(k.clone()))?;
        self.sys.push(eq, format!("{tag} lifted mod {k}"));
        self.sys.lifts.push(LiftRecord { equation: index, modulus: k.clone(), m_lo, bound, counter });
        Ok(index)
    }

    /// Quadratizes, bit-blasts and lifts a system over ℤ_k. Chain variables
    /// take values in ℤ_k with the given representation.
    pub fn add_modular(&mut self, polys: &[SparsePoly], repr: Repr, mode: LiftMode, tag: &str) -> Result<Quadratization> {
        if polys.is_empty() {
            return Ok(quadratize(polys, &mut self.sys.vars));
        }
        let k = match polys[0].ring() {
            Ring::ModK(k) => k.clone(),
            other => return Err(Error::RingMismatch(format!("expected Z/k, got {other}"))),
        };
        let q = quadratize(polys, &mut self.sys.vars);
        let (lo, hi) = field_range(&k, repr)?;
        for c in &q.new_vars {
            let rule = DeriveRule::Monomial { monomial: c.definition.clone(), modulus: Some(k.clone()) };
            self.derive(c.id, &lo, &hi, BitClass::VBit, rule)?;
        }
        let signed = repr == Repr::Centered || self.has_signed();
        let mode = if signed { LiftMode::SignedRange } else { mode };
        let tagged = q
            .squaring
            .iter()
            .map(|p| (p, "square chain".to_string()))
            .chain(q.products.iter().map(|p| (p, "product chain".to_string())))
            .chain(q.rewritten.iter().enumerate().map(|(i, p)| (p, format!("{tag}[{i}]"))))
            .collect::<Vec<_>>();
        for (p, t) in tagged {
            let b = self.blast(std::slice::from_ref(p), signed)?.pop().unwrap();
            self.lift(b, &k, mode, &t)?;
        }
        Ok(q)
    }

    /// Range of integer chain variables: [0, h^d] when every user variable is
    /// nonnegative (h the largest upper bound), else [−H^d, H^d].
    fn chain_range(&self, degree: u32) -> (BigInt, BigInt) {
        let nonneg = self.sys.decode.values().all(|e| !e.offset.is_negative());
        if nonneg {
            let h = self.sys.decode.values().map(|e| e.max()).max().unwrap_or_else(BigInt::one);
            (BigInt::zero(), num_traits::pow(h, degree as usize))
        } else {
            let h = self.sys.decode.values().map(|e| e.max().abs().max(e.min().abs())).max().unwrap();
            let b = num_traits::pow(h, degree as usize);
            (-b.clone(), b)
        }
    }

    /// Integer polynomials to Boolean form: quadratize over ℤ, give chain
    /// variables bit expansions, emit the chain equations, return ḡ.
    pub fn encode_integer(&mut self, polys: &[SparsePoly], tag: &str) -> Result<Vec<SparsePoly>> {
        for p in polys {
            if p.ring() != &Ring::Integers {
                return Err(Error::RingMismatch(format!("expected ZZ, got {}", p.ring())));
            }
            for v in p.vars() {
                if self.expansion_for(v).is_none() {
                    return Err(Error::UnboundedVariable(self.sys.vars.name(v).to_string()));
                }
            }
        }
        let q = quadratize(polys, &mut self.sys.vars);
        if !q.new_vars.is_empty() {
            let d = polys.iter().map(|p| p.total_degree()).max().unwrap_or(0);
            let (lo, hi) = self.chain_range(d);
            for c in &q.new_vars {
                let rule = DeriveRule::Monomial { monomial: c.definition.clone(), modulus: None };
                self.derive(c.id, &lo, &hi, BitClass::VBit, rule)?;
            }
        }
        for p in q.squaring.iter().chain(&q.products) {
            let b = self.to_bits(p)?;
            self.sys.push(b, format!("{tag} chain"));
        }
        q.rewritten.iter().map(|p| self.to_bits(p)).collect()
    }

    /// Exact equations g = 0 over ℤ.
    pub fn add_int_equalities(&mut self, polys: &[SparsePoly], tag: &str) -> Result<()> {
        let bars = self.encode_integer(polys, tag)?;
        for (i, b) in bars.into_iter().enumerate() {
            self.sys.push(b, format!("{tag}[{i}]"));
        }
        Ok(())
    }

    /// 0 ≤ g ≤ b for each pair, through θ_b(G) − ḡ.
    pub fn add_inequalities(&mut self, ineqs: &[(SparsePoly, BigInt)], tag: &str) -> Result<()> {
        for (g, b) in ineqs {
            if !b.is_positive() && !g.is_constant() {
                return Err(Error::EmptyOrPointConstraint(b.to_string()));
            }
        }
        let gs: Vec<SparsePoly> = ineqs.iter().map(|(g, _)| g.clone()).collect();
        let bars = self.encode_integer(&gs, tag)?;
        for (i, (bar, (_, b))) in bars.into_iter().zip(ineqs).enumerate() {
            if b.is_negative() {
                self.sys.push(SparsePoly::int_constant(&Ring::Integers, 1), format!("{tag}[{i}] infeasible"));
                continue;
            }
            let slack = self.fresh_var(&format!("G{i}"));
            self.derive(slack, &BigInt::zero(), b, BitClass::GBit, DeriveRule::Value { poly: bar.clone() })?;
            let g = self.sys.derived.last().unwrap().expansion.to_poly();
            self.sys.push(g.sub(&bar)?, format!("{tag}[{i}]"));
        }
        Ok(())
    }
}
