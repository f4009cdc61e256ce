use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::encoder::{Encoder, LiftMode, Repr};
use super::quadratize::quadratize;
use super::registry::{BitClass, Registry, VarTable};
use super::system::{BooleanSystem, DeriveRule, ExtLayout};
use super::theta::AffineExpansion;
use crate::algebra::{Elem, Monomial, PolySystem, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOptions {
    pub lift_mode: LiftMode,
    pub repr: Repr,
}

/// Bit-blasted polynomials before lifting.
#[derive(Clone, Debug)]
pub struct Blasted {
    pub polys: Vec<SparsePoly>,
    pub modulus: BigInt,
    encoder: Encoder,
}

impl Blasted {
    pub fn registry(&self) -> &Registry {
        &self.encoder.system().registry
    }

    pub fn decode(&self) -> &BTreeMap<VarId, AffineExpansion> {
        &self.encoder.system().decode
    }
}

/// Replaces every variable of a degree ≤ 2 system over ℤ_k by its θ_{k−1}
/// expansion (centered when asked) and reduces coefficients mod k.
pub fn bit_blast(sys: &PolySystem, repr: Repr) -> Result<Blasted> {
    let k = match &sys.ring {
        Ring::ModK(k) => k.clone(),
        other => return Err(Error::RingMismatch(format!("bit-blasting needs Z/k, got {other}"))),
    };
    let mut enc = Encoder::with_vars(&sys.vars)?;
    for v in 0..sys.vars.len() as VarId {
        enc.declare_field(v, &k, repr)?;
    }
    let polys = enc.blast(&sys.polys, repr == Repr::Centered)?;
    Ok(Blasted { polys, modulus: k, encoder: enc })
}

/// f ↦ f − k·(θ_M(U) + m_lo) for every blasted polynomial.
pub fn lift_modular(b: Blasted, mode: LiftMode) -> Result<BooleanSystem> {
    let Blasted { polys, modulus, mut encoder } = b;
    for (i, p) in polys.into_iter().enumerate() {
        encoder.lift(p, &modulus, mode, &format!("f[{i}]"))?;
    }
    Ok(encoder.finish())
}

/// Coordinates of a system over 𝔽_{p^m} in the power basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    pub system: PolySystem,
    /// variable i ↦ coordinate variables i·m .. i·m+m−1
    pub components: Vec<Vec<VarId>>,
}

/// Writes x_i = Σ_j x_{ij} θ^j and splits every polynomial into its m
/// coordinates over 𝔽_p.
pub fn descend_extension(sys: &PolySystem) -> Result<Descent> {
    let field = match &sys.ring {
        Ring::ExtField(f) => f.clone(),
        other => return Err(Error::RingMismatch(format!("{other} is not an extension field"))),
    };
    let m = field.degree();
    let base = Ring::modk(field.p())?;
    let mut names = Vec::with_capacity(sys.vars.len() * m);
    let mut components = Vec::with_capacity(sys.vars.len());
    for (i, n) in sys.vars.iter().enumerate() {
        components.push((0..m).map(|j| (i * m + j) as VarId).collect::<Vec<_>>());
        for j in 0..m {
            names.push(if m == 1 { n.clone() } else { format!("{n}.{j}") });
        }
    }
    let mut subst = BTreeMap::new();
    for (i, comps) in components.iter().enumerate() {
        let mut x = SparsePoly::zero(&sys.ring);
        for (j, &c) in comps.iter().enumerate() {
            x.add_term(Monomial::var(c), Elem::Ext(field.theta_pow(j as u32)));
        }
        subst.insert(i as VarId, x);
    }
    let mut polys = Vec::with_capacity(sys.polys.len() * m);
    for f in &sys.polys {
        // rename first so original ids never collide with coordinate ids
        let shifted = f.rename(|v| v + (sys.vars.len() * m) as VarId);
        let map = subst.iter().map(|(k, v)| (k + (sys.vars.len() * m) as VarId, v.clone())).collect();
        let expanded = shifted.substitute(&map)?;
        let mut parts = vec![SparsePoly::zero(&base); m];
        for (mono, c) in expanded.terms() {
            let Elem::Ext(coords) = c else { unreachable!() };
            for (j, &x) in coords.iter().enumerate() {
                parts[j].add_term(mono.clone(), Elem::Int(BigInt::from(x)));
            }
        }
        polys.extend(parts);
    }
    Ok(Descent { system: PolySystem::new(base, names, polys)?, components })
}

/// Quadratize, descend when the field is an extension, bit-blast, lift.
pub fn full_reduce(sys: &PolySystem, opts: ReduceOptions) -> Result<BooleanSystem> {
    match &sys.ring {
        Ring::Integers => Err(Error::RingMismatch("full_reduce needs a finite ring".into())),
        Ring::ModK(k) => {
            let mut enc = Encoder::with_vars(&sys.vars)?;
            for v in 0..sys.vars.len() as VarId {
                enc.declare_field(v, k, opts.repr)?;
            }
            enc.add_modular(&sys.polys, opts.repr, opts.lift_mode, "f")?;
            Ok(enc.finish())
        }
        Ring::ExtField(field) => {
            let n = sys.vars.len();
            let mut ext_vars = VarTable::from_names(&sys.vars)?;
            let q = quadratize(&sys.polys, &mut ext_vars);
            let quad = PolySystem::new(sys.ring.clone(), ext_vars.names().to_vec(), q.system())?;
            let d = descend_extension(&quad)?;
            let p = BigInt::from(field.p());
            let mut enc = Encoder::with_vars(&d.system.vars)?;
            for comps in &d.components[..n] {
                for &c in comps {
                    enc.declare_field(c, &p, opts.repr)?;
                }
            }
            let (lo, hi) = super::encoder::field_range(&p, opts.repr)?;
            for cv in &q.new_vars {
                for (j, &c) in d.components[cv.id as usize].iter().enumerate() {
                    let rule = DeriveRule::ExtComponent { monomial: cv.definition.clone(), index: j };
                    enc.derive(c, &lo, &hi, BitClass::VBit, rule)?;
                }
            }
            enc.add_modular(&d.system.polys, opts.repr, opts.lift_mode, "g")?;
            let mut out = enc.finish();
            out.ext = Some(ExtLayout {
                field: field.clone(),
                names: ext_vars.names().to_vec(),
                components: d.components,
                primary: n,
            });
            Ok(out)
        }
    }
}

/// Declares how the variables of an integer problem are bounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarBound {
    /// 𝔽_p-valued
    Field(BigInt),
    /// integer in [0, u]
    Upper(BigInt),
}

/// ḡ for each input and the chain system B̄(G). Every variable of `vars`
/// that appears must have a bound.
pub fn encode_integers(
    polys: &[SparsePoly],
    vars: &[String],
    bounds: &BTreeMap<VarId, VarBound>,
) -> Result<(Vec<SparsePoly>, BooleanSystem)> {
    let mut enc = bounded_encoder(polys, vars, bounds)?;
    let bars = enc.encode_integer(polys, "g")?;
    Ok((bars, enc.finish()))
}

/// {θ_b(G) − ḡ} ∪ B̄(G) for constraints 0 ≤ g ≤ b.
pub fn encode_inequalities(
    ineqs: &[(SparsePoly, BigInt)],
    vars: &[String],
    bounds: &BTreeMap<VarId, VarBound>,
) -> Result<BooleanSystem> {
    let gs: Vec<SparsePoly> = ineqs.iter().map(|(g, _)| g.clone()).collect();
    let mut enc = bounded_encoder(&gs, vars, bounds)?;
    enc.add_inequalities(ineqs, "ineq")?;
    Ok(enc.finish())
}

fn bounded_encoder(polys: &[SparsePoly], vars: &[String], bounds: &BTreeMap<VarId, VarBound>) -> Result<Encoder> {
    let mut enc = Encoder::with_vars(vars)?;
    for (&v, b) in bounds {
        match b {
            VarBound::Field(p) => enc.declare_field(v, p, Repr::Standard)?,
            VarBound::Upper(u) => enc.declare_existing(v, &BigInt::from(0), u, BitClass::YBit)?,
        }
    }
    for p in polys {
        for v in p.vars() {
            if !bounds.contains_key(&v) {
                return Err(Error::UnboundedVariable(vars.get(v as usize).cloned().unwrap_or_default()));
            }
        }
    }
    Ok(enc)
}
