use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{cyclic_convolve, cyclic_invert, is_prime_u64, CyclicElement, Monomial, Ring, SparsePoly, VarId};
use crate::encode::BooleanSystem;
use crate::error::{Error, Result};
use crate::optimize::{build_base, StandardProblem};

/// NTRU parameters over ℤ[X]/(X^N − 1). `h` is the public key when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtruParams {
    pub n: usize,
    pub p: u64,
    pub q: u64,
    pub df: usize,
    pub dg: usize,
    pub h: Option<CyclicElement>,
}

/// On-disk form: {N, p, q, df, dg, h?, f?, g?}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NtruParamsJson {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u64,
    pub q: u64,
    pub df: usize,
    pub dg: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<i64>>,
}

impl NtruParams {
    pub fn new(n: usize, p: u64, q: u64, df: usize, dg: usize) -> Result<Self> {
        let prm = NtruParams { n, p, q, df, dg, h: None };
        prm.validate()?;
        Ok(prm)
    }

    pub fn with_h(mut self, h: CyclicElement) -> Result<Self> {
        if h.modulus != self.q || h.len() != self.n {
            return Err(Error::ShapeMismatch(format!("h must have N={} coefficients mod {}", self.n, self.q)));
        }
        self.h = Some(h);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime_u64(self.p) {
            return Err(Error::BadModulus(format!("p = {} is not prime", self.p)));
        }
        if self.q <= self.p || self.p.gcd(&self.q) != 1 {
            return Err(Error::BadModulus(format!("need q > p and gcd(p, q) = 1, got p={} q={}", self.p, self.q)));
        }
        if self.df == 0 || self.dg == 0 || 2 * self.df > self.n + 1 || 2 * self.dg > self.n {
            return Err(Error::Invalid(format!("df={} dg={} do not fit N={}", self.df, self.dg, self.n)));
        }
        Ok(())
    }

    fn public_key(&self) -> Result<&CyclicElement> {
        self.h.as_ref().ok_or_else(|| Error::Invalid("public key h is missing".into()))
    }

    /// Whether h∗f mod q, centered, has exactly d_g ones and d_g minus ones
    /// and the rest zeros.
    pub fn recovers(&self, f: &[i64]) -> Result<bool> {
        let g = cyclic_convolve(self.public_key()?, &CyclicElement::from_signed(self.q, f)?)?.centered();
        Ok(in_profile(&g, self.dg, self.dg))
    }

    pub fn to_json(&self) -> NtruParamsJson {
        NtruParamsJson {
            n: self.n,
            p: self.p,
            q: self.q,
            df: self.df,
            dg: self.dg,
            h: self.h.as_ref().map(|h| h.coeffs.clone()),
            f: None,
            g: None,
        }
    }

    pub fn from_json(j: &NtruParamsJson) -> Result<Self> {
        let prm = NtruParams::new(j.n, j.p, j.q, j.df, j.dg)?;
        match &j.h {
            Some(h) => prm.with_h(CyclicElement::new(j.q, h.clone())?),
            None => Ok(prm),
        }
    }
}

/// `ones` coefficients 1, `minus` coefficients −1, the rest 0.
pub(crate) fn in_profile(c: &[i64], ones: usize, minus: usize) -> bool {
    c.iter().all(|x| (-1..=1).contains(x))
        && c.iter().filter(|&&x| x == 1).count() == ones
        && c.iter().filter(|&&x| x == -1).count() == minus
}

/// A generated keypair with both inverses of f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtruKey {
    pub f: Vec<i64>,
    pub g: Vec<i64>,
    pub h: CyclicElement,
    pub fp: CyclicElement,
    pub fq: CyclicElement,
}

impl NtruKey {
    /// Recomputes h and the inverses from f and g.
    pub fn from_parts(prm: &NtruParams, f: Vec<i64>, g: Vec<i64>) -> Result<Self> {
        if f.len() != prm.n || g.len() != prm.n {
            return Err(Error::ShapeMismatch(format!("f and g need N={} coefficients", prm.n)));
        }
        let fq = cyclic_invert(&CyclicElement::from_signed(prm.q, &f)?)?;
        let fp = cyclic_invert(&CyclicElement::from_signed(prm.p, &f)?)?;
        let h = cyclic_convolve(&CyclicElement::from_signed(prm.q, &g)?, &fq)?;
        Ok(NtruKey { f, g, h, fp, fq })
    }
}

fn sample(n: usize, ones: usize, minus: usize, rng: &mut impl Rng) -> Vec<i64> {
    let mut v = vec![0i64; n];
    v[..ones].fill(1);
    v[ones..ones + minus].fill(-1);
    v.shuffle(rng);
    v
}

/// Samples f ∈ L_f and g ∈ L_g until f is invertible mod p and mod q.
pub fn ntru_keygen(prm: &NtruParams, rng: &mut impl Rng, attempts: usize) -> Result<NtruKey> {
    prm.validate()?;
    for _ in 0..attempts {
        let f = sample(prm.n, prm.df, prm.df - 1, rng);
        let g = sample(prm.n, prm.dg, prm.dg, rng);
        match NtruKey::from_parts(prm, f, g) {
            Ok(k) => return Ok(k),
            Err(Error::NotInvertible) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::KeygenFailed(attempts))
}

// Y variable ids: F_{i1}, F_{i2}, G_{i1}, G_{i2} at 4i..4i+3, then p_i, then q_i.
fn fid(i: usize, k: usize) -> VarId {
    (4 * i + k) as VarId
}

/// Key recovery as a problem in the bits F, G and the inverse coefficients.
///
/// With `min_weight` the two cardinality equations are dropped and the
/// objective Σ(F_{i2} − F_{i1} + G_{i2} − G_{i1}) + 2N − 1 = Σf² + Σg² − 1
/// is minimized; otherwise the objective is 0.
pub fn ntru_problem(prm: &NtruParams, min_weight: bool) -> Result<StandardProblem> {
    prm.validate()?;
    let h = prm.public_key()?;
    let n = prm.n;
    let mut prob = StandardProblem::new(prm.p);
    for i in 0..n {
        for name in ["F", "G"] {
            for k in 1..=2 {
                prob.add_y(format!("{name}{i}_{k}"), 1);
            }
        }
    }
    let pv: Vec<VarId> = (0..n).map(|i| prob.add_y(format!("p{i}"), prm.p - 1)).collect();
    let qv: Vec<VarId> = (0..n).map(|i| prob.add_y(format!("q{i}"), prm.q - 1)).collect();

    let zz = Ring::Integers;
    let var = |v: VarId| SparsePoly::var(&zz, v);
    let c = |x: i64| SparsePoly::int_constant(&zz, x);
    // f_i = F_{i1} + F_{i2} − 1, g_i likewise
    let f: Vec<SparsePoly> = (0..n).map(|i| var(fid(i, 0)).add(&var(fid(i, 1))).unwrap().sub(&c(1)).unwrap()).collect();
    let g: Vec<SparsePoly> = (0..n).map(|i| var(fid(i, 2)).add(&var(fid(i, 3))).unwrap().sub(&c(1)).unwrap()).collect();
    let sum = |ps: &mut dyn Iterator<Item = SparsePoly>| ps.fold(SparsePoly::zero(&zz), |a, b| a.add(&b).unwrap());

    // Σf² = Σ(F_{i2} − F_{i1}) + N once F_{i1}F_{i2} = F_{i2}
    let sq_f = sum(&mut (0..n).map(|i| var(fid(i, 1)).sub(&var(fid(i, 0))).unwrap())).add(&c(n as i64))?;
    let sq_g = sum(&mut (0..n).map(|i| var(fid(i, 3)).sub(&var(fid(i, 2))).unwrap())).add(&c(n as i64))?;
    if !min_weight {
        prob.e.push(sq_f.add(&c(1 - 2 * prm.df as i64))?);
        prob.e.push(sq_g.sub(&c(2 * prm.dg as i64))?);
    }
    prob.e.push(sum(&mut f.iter().cloned()).sub(&c(1))?);
    prob.e.push(sum(&mut g.iter().cloned()));
    for i in 0..n {
        for (a, b) in [(fid(i, 0), fid(i, 1)), (fid(i, 2), fid(i, 3))] {
            prob.e.push(SparsePoly::from_int_terms(
                &zz,
                [(Monomial::product([a, b]), BigInt::from(1)), (Monomial::var(b), BigInt::from(-1))],
            ));
        }
    }

    let conv = |a: &dyn Fn(usize) -> SparsePoly, i: usize| -> SparsePoly {
        sum(&mut (0..n).map(|j| a(j).mul(&f[(i + n - j) % n]).unwrap()))
    };
    let delta = |i: usize| c((i == 0) as i64);
    let rq = Ring::modk(prm.q)?;
    let rp = Ring::modk(prm.p)?;
    let hj = |j: usize| c(h.coeffs[j] as i64);
    let qj = |j: usize| var(qv[j]);
    let pj = |j: usize| var(pv[j]);
    for i in 0..n {
        prob.f.push(conv(&hj, i).sub(&g[i])?.to_ring(&rq)?);
    }
    for i in 0..n {
        prob.f.push(conv(&qj, i).sub(&delta(i))?.to_ring(&rq)?);
    }
    for i in 0..n {
        prob.f.push(conv(&pj, i).sub(&delta(i))?.to_ring(&rp)?);
    }

    if min_weight {
        prob.o = sq_f.add(&sq_g)?.sub(&c(1))?;
        prob.u = BigInt::from(4 * n);
    }
    Ok(prob)
}

/// F₁₁ ∪ P(F₂) ∪ P(F₃) over the bits, with decoding helpers.
#[derive(Clone, Debug)]
pub struct NtruAttack {
    pub params: NtruParams,
    pub system: BooleanSystem,
}

pub fn ntru_attack_system(prm: &NtruParams) -> Result<NtruAttack> {
    let system = build_base(&ntru_problem(prm, false)?)?.system;
    Ok(NtruAttack { params: prm.clone(), system })
}

/// min-weight variant driven by the optimizer.
pub fn ntru_min_weight_system(prm: &NtruParams) -> Result<StandardProblem> {
    ntru_problem(prm, true)
}

/// Values of every problem variable for a known key.
pub fn ntru_key_values(prm: &NtruParams, key: &NtruKey) -> BTreeMap<VarId, BigInt> {
    let n = prm.n;
    let mut out = BTreeMap::new();
    let bits = |x: i64| match x {
        1 => (1, 1),
        0 => (1, 0),
        _ => (0, 0),
    };
    for i in 0..n {
        let (a, b) = bits(key.f[i]);
        let (c, d) = bits(key.g[i]);
        for (k, v) in [a, b, c, d].into_iter().enumerate() {
            out.insert(fid(i, k), BigInt::from(v));
        }
        out.insert((4 * n + i) as VarId, BigInt::from(key.fp.coeffs[i]));
        out.insert((5 * n + i) as VarId, BigInt::from(key.fq.coeffs[i]));
    }
    out
}

impl NtruAttack {
    /// The Boolean assignment a known key induces.
    pub fn witness(&self, key: &NtruKey) -> Result<Vec<u8>> {
        self.system.complete_witness(&ntru_key_values(&self.params, key))
    }

    /// (f̌, ǧ) from a satisfying assignment.
    pub fn decode_key(&self, assignment: &[u8]) -> Result<(Vec<i64>, Vec<i64>)> {
        let sol = self.system.decode(assignment)?;
        let val = |v: VarId| -> i64 { (&sol.decoded[&v]).try_into().unwrap() };
        let n = self.params.n;
        let f = (0..n).map(|i| val(fid(i, 0)) + val(fid(i, 1)) - 1).collect();
        let g = (0..n).map(|i| val(fid(i, 2)) + val(fid(i, 3)) - 1).collect();
        Ok((f, g))
    }

    /// Number of F₁₁ equations in the system.
    pub fn f11_len(&self) -> usize {
        self.system.provenance.iter().filter(|t| t.starts_with("E[")).count()
    }
}
