use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::registry::{BitClass, Registry};
use crate::algebra::{Monomial, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};

/// Weights of θ_b: 2⁰, …, 2^{s−1}, then b+1−2^s with s = ⌊log₂ b⌋.
/// Empty for b = 0.
pub fn theta_weights(b: &BigInt) -> Vec<BigInt> {
    if b.is_zero() {
        return Vec::new();
    }
    assert!(b.is_positive(), "theta bound must be nonnegative");
    let s = b.bits() - 1;
    let mut w: Vec<BigInt> = (0..s).map(|i| BigInt::one() << i).collect();
    w.push(b + 1 - (BigInt::one() << s));
    w
}

/// value = offset + Σ weight·bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineExpansion {
    pub var: VarId,
    pub name: String,
    pub weights: Vec<(VarId, BigInt)>,
    pub offset: BigInt,
}

impl AffineExpansion {
    pub fn bits(&self) -> impl Iterator<Item = VarId> + '_ {
        self.weights.iter().map(|(b, _)| *b)
    }

    /// Largest value minus smallest value.
    pub fn span(&self) -> BigInt {
        self.weights.iter().map(|(_, w)| w.clone()).sum()
    }

    pub fn min(&self) -> BigInt {
        self.offset.clone()
    }

    pub fn max(&self) -> BigInt {
        &self.offset + self.span()
    }

    pub fn value(&self, bits: &[u8]) -> Result<BigInt> {
        let mut v = self.offset.clone();
        for (b, w) in &self.weights {
            match bits.get(*b as usize) {
                Some(1) => v += w,
                Some(0) => {}
                Some(x) => return Err(Error::Invalid(format!("bit value {x}"))),
                None => return Err(Error::MissingBits(format!("bit {b} of {}", self.name))),
            }
        }
        Ok(v)
    }

    pub fn to_poly(&self) -> SparsePoly {
        let mut p = SparsePoly::int_constant(&Ring::Integers, self.offset.clone());
        for (b, w) in &self.weights {
            p.add_term(Monomial::var(*b), crate::algebra::Elem::Int(w.clone()));
        }
        p
    }

    /// A bit pattern decoding to `value`, preferring the top θ bit off.
    pub fn preimage(&self, value: &BigInt) -> Option<Vec<(VarId, u8)>> {
        let t = value - &self.offset;
        if t.is_negative() || t > self.span() {
            return None;
        }
        let ws: Vec<BigInt> = self.weights.iter().map(|(_, w)| w.clone()).collect();
        let bits = if ws == theta_weights(&self.span()) {
            theta_preimage(&ws, &t)
        } else {
            search_preimage(&ws, &t)?
        };
        Some(self.weights.iter().zip(bits).map(|((b, _), x)| (*b, x)).collect())
    }
}

fn theta_preimage(ws: &[BigInt], t: &BigInt) -> Vec<u8> {
    let n = ws.len();
    let mut out = vec![0u8; n];
    if n == 0 {
        return out;
    }
    let s = n - 1;
    let low_max = (BigInt::one() << s) - 1;
    let mut rest = t.clone();
    if rest > low_max {
        out[s] = 1;
        rest -= &ws[s];
    }
    for (i, o) in out.iter_mut().enumerate().take(s) {
        if ((&rest >> i) & BigInt::one()).is_one() {
            *o = 1;
        }
    }
    out
}

fn search_preimage(ws: &[BigInt], t: &BigInt) -> Option<Vec<u8>> {
    if ws.len() > 24 {
        return None;
    }
    (0u32..1 << ws.len()).find_map(|mask| {
        let s: BigInt = ws.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w).sum();
        (&s == t).then(|| (0..ws.len()).map(|i| (mask >> i & 1) as u8).collect())
    })
}

/// θ_b with fresh bits of `class`; value range exactly [0, b].
pub fn theta(b: &BigInt, reg: &mut Registry, class: BitClass, var: VarId, label: &str) -> AffineExpansion {
    theta_centered(b, &BigInt::zero(), reg, class, var, label)
}

/// θ_b − shift; value range exactly [−shift, b − shift].
pub fn theta_centered(
    b: &BigInt,
    shift: &BigInt,
    reg: &mut Registry,
    class: BitClass,
    var: VarId,
    label: &str,
) -> AffineExpansion {
    let weights = theta_weights(b)
        .into_iter()
        .enumerate()
        .map(|(j, w)| {
            let id = reg.fresh(class, Some((var, j as u32)), format!("{}.{}.{}", class.prefix(), label, j));
            (id, w)
        })
        .collect();
    AffineExpansion { var, name: label.to_string(), weights, offset: -shift }
}

/// Number of bits of θ_b.
pub fn theta_len(b: &BigInt) -> usize {
    if b.is_zero() {
        0
    } else {
        b.bits() as usize
    }
}

/// Substitution map var → expansion polynomial.
pub fn expansion_map<'a>(exps: impl IntoIterator<Item = &'a AffineExpansion>) -> BTreeMap<VarId, SparsePoly> {
    exps.into_iter().map(|e| (e.var, e.to_poly())).collect()
}
