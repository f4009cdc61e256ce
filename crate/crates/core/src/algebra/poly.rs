use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ring::{Elem, Ring};
use crate::error::{Error, Result};

pub type VarId = u32;

/// Exponent vector, sorted by variable id, no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VarId, u32)>) -> Self {
        let mut acc: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *acc.entry(v).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// Product of distinct variables.
    pub fn product(vars: impl IntoIterator<Item = VarId>) -> Self {
        Self::from_pairs(vars.into_iter().map(|v| (v, 1)))
    }

    pub fn pairs(&self) -> &[(VarId, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.0.iter().find(|&&(w, _)| w == v).map_or(0, |&(_, e)| e)
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a.0 == b.0 {
                out.push((a.0, a.1 + b.1));
                i += 1;
                j += 1;
            } else if a.0 < b.0 {
                out.push(a);
                i += 1;
            } else {
                out.push(b);
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    pub fn pow(&self, e: u32) -> Monomial {
        Monomial(self.0.iter().map(|&(v, x)| (v, x * e)).collect())
    }

    pub fn is_multilinear(&self) -> bool {
        self.0.iter().all(|&(_, e)| e == 1)
    }

    /// X^k → X for every variable.
    pub fn multilinearize(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, _)| (v, 1)).collect())
    }
}

/// Sparse polynomial in normal form: no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    ring: Ring,
    terms: BTreeMap<Monomial, Elem>,
}

impl SparsePoly {
    pub fn zero(ring: &Ring) -> Self {
        SparsePoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Ring, c: Elem) -> Result<Self> {
        Self::from_terms(ring, [(Monomial::one(), c)])
    }

    pub fn int_constant(ring: &Ring, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::one(), ring.from_int(&c.into()));
        p
    }

    pub fn var(ring: &Ring, v: VarId) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(Monomial::var(v), ring.one());
        p
    }

    /// Sums like terms; coefficients must already be ring elements.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Result<Self> {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            if !ring.contains(&c) {
                return Err(Error::RingMismatch(format!("{c} is not an element of {ring}")));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Integer coefficients mapped into the ring.
    pub fn from_int_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, ring.from_int(&c));
        }
        p
    }

    /// Adds `c·m` in place. `c` is assumed canonical.
    pub fn add_term(&mut self, m: Monomial, c: Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = self.ring.add(old, &c).expect("canonical coefficients");
                if self.ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> Elem {
        self.coeff(&Monomial::one())
    }

    /// Integer coefficients; panics on extension-field polynomials.
    pub fn int_terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (m, c.as_int().expect("integer coefficients")))
    }

    /// Number of stored terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn is_multilinear(&self) -> bool {
        self.terms.keys().all(|m| m.is_multilinear())
    }

    fn same_ring(&self, other: &SparsePoly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), self.ring.neg(c).expect("canonical"));
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.same_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(ca, cb)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Elem) -> Result<SparsePoly> {
        let mut out = Self::zero(&self.ring);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c)?);
        }
        Ok(out)
    }

    pub fn scale_int(&self, c: impl Into<BigInt>) -> SparsePoly {
        let c = self.ring.from_int(&c.into());
        self.scale(&c).expect("same ring")
    }

    pub fn pow(&self, e: u32) -> Result<SparsePoly> {
        let mut acc = SparsePoly::int_constant(&self.ring, 1);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Replaces every variable found in `map`; others stay.
    pub fn substitute(&self, map: &BTreeMap<VarId, SparsePoly>) -> Result<SparsePoly> {
        self.substitute_with(map, false)
    }

    /// Substitution followed by eager X^k → X, for 0/1 targets.
    pub fn substitute_multilinear(&self, map: &BTreeMap<VarId, SparsePoly>) -> Result<SparsePoly> {
        self.substitute_with(map, true)
    }

    fn substitute_with(&self, map: &BTreeMap<VarId, SparsePoly>, ml: bool) -> Result<SparsePoly> {
        for q in map.values() {
            self.same_ring(q)?;
        }
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let mut term = SparsePoly::constant(&self.ring, c.clone())?;
            for &(v, e) in m.pairs() {
                let factor = match map.get(&v) {
                    Some(q) => q.clone(),
                    None => SparsePoly::var(&self.ring, v),
                };
                for _ in 0..e {
                    term = term.mul(&factor)?;
                    if ml {
                        term = term.multilinearize();
                    }
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Applies X^k → X to every monomial and recombines.
    pub fn multilinearize(&self) -> SparsePoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(m.multilinearize(), c.clone());
        }
        out
    }

    pub fn evaluate(&self, value: impl Fn(VarId) -> Elem) -> Result<Elem> {
        let mut acc = self.ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t = self.ring.mul(&t, &self.ring.pow(&value(v), e)?)?;
            }
            acc = self.ring.add(&acc, &t)?;
        }
        Ok(acc)
    }

    /// Integer evaluation for ℤ or ℤ_k polynomials; the result is reduced in ℤ_k.
    pub fn eval_int(&self, value: impl Fn(VarId) -> BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in self.int_terms() {
            let mut t = c.clone();
            for &(v, e) in m.pairs() {
                t *= num_traits::pow(value(v), e as usize);
            }
            acc += t;
        }
        match &self.ring {
            Ring::ModK(k) => num_integer::Integer::mod_floor(&acc, k),
            _ => acc,
        }
    }

    /// Reinterprets coefficients in another ring: ℤ → ℤ_k reduces, ℤ_k → ℤ takes
    /// canonical representatives.
    pub fn to_ring(&self, ring: &Ring) -> Result<SparsePoly> {
        let mut out = Self::zero(ring);
        for (m, c) in &self.terms {
            let v = c
                .as_int()
                .ok_or_else(|| Error::RingMismatch("extension coefficients cannot change ring".into()))?;
            out.add_term(m.clone(), ring.from_int(v));
        }
        Ok(out)
    }

    /// Renames variables; the map must be injective on the variables present.
    pub fn rename(&self, f: impl Fn(VarId) -> VarId) -> SparsePoly {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            out.add_term(Monomial::from_pairs(m.pairs().iter().map(|&(v, e)| (f(v), e))), c.clone());
        }
        out
    }

    /// Sum of coefficients (integer rings).
    pub fn coeff_sum(&self) -> BigInt {
        self.int_terms().map(|(_, c)| c.clone()).sum()
    }

    /// Max |coefficient| (integer rings).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.int_terms().map(|(_, c)| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Writes with caller-supplied variable names.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(VarId) -> String) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a SparsePoly,
    names: &'a dyn Fn(VarId) -> String,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let unit = matches!(c, Elem::Int(v) if v.is_one());
            if m.is_one() {
                write!(f, "{c}")?;
                continue;
            }
            if !unit {
                write!(f, "{c}*")?;
            }
            let parts: Vec<String> = m
                .pairs()
                .iter()
                .map(|&(v, e)| if e == 1 { (self.names)(v) } else { format!("{}^{e}", (self.names)(v)) })
                .collect();
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
