use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division; the moduli this crate meets are small.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => false,
    }
}

/// 𝔽_p[θ]/(φ) with φ monic of degree m.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: u64,
    /// φ coefficients, constant term first, length m+1, leading 1.
    phi: Vec<u64>,
    trusted: bool,
}

impl ExtField {
    /// Checks that `p` is prime and `phi` monic; irreducibility is verified
    /// exhaustively for m ≤ 8 and otherwise recorded as trusted.
    pub fn new(p: u64, phi: Vec<u64>) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::BadModulus(format!("{p} is not prime")));
        }
        let phi: Vec<u64> = phi.into_iter().map(|c| c % p).collect();
        if phi.len() < 2 || *phi.last().unwrap() != 1 {
            return Err(Error::Invalid("phi must be monic of degree >= 1".into()));
        }
        let m = phi.len() - 1;
        let trusted = m > 8;
        if !trusted && !irreducible(p, &phi) {
            return Err(Error::Invalid(format!("phi {:?} is reducible over F_{p}", phi)));
        }
        Ok(ExtField { p, phi, trusted })
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }
    pub fn phi(&self) -> &[u64] {
        &self.phi
    }
    /// True when irreducibility was assumed rather than checked.
    pub fn trusted(&self) -> bool {
        self.trusted
    }
    pub fn order(&self) -> u64 {
        self.p.pow(self.degree() as u32)
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.degree();
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + self.mulmod(x, y)) % self.p;
            }
        }
        // reduce top-down using θ^m = -Σ φ_i θ^i
        for k in (m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                let t = self.mulmod(c, self.phi[i]);
                prod[k - m + i] = (prod[k - m + i] + self.p - t) % self.p;
            }
        }
        prod.truncate(m);
        prod
    }

    /// Power-basis coordinates of θ^k.
    pub fn theta_pow(&self, k: u32) -> Vec<u64> {
        let m = self.degree();
        let mut acc = self.scalar(1);
        let mut theta = vec![0u64; m];
        if m == 1 {
            // θ is a root of φ = θ + φ0, so θ = -φ0
            theta[0] = (self.p - self.phi[0]) % self.p;
        } else {
            theta[1] = 1;
        }
        for _ in 0..k {
            acc = self.mul(&acc, &theta);
        }
        acc
    }

    pub fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.degree()];
        v[0] = c % self.p;
        v
    }

    /// All field elements, in counting order of their coordinate vectors.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let m = self.degree();
        let mut out = Vec::new();
        let mut cur = vec![0u64; m];
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == m {
                    return out;
                }
                cur[i] += 1;
                if cur[i] == self.p {
                    cur[i] = 0;
                    i += 1;
                } else {
                    break;
                }
            }
        }
    }
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    // b monic
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = ((c as u128 * bc as u128) % p as u128) as u64;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

fn irreducible(p: u64, phi: &[u64]) -> bool {
    let m = phi.len() - 1;
    // try every monic divisor of degree 1..=m/2
    for d in 1..=m / 2 {
        let count = p.checked_pow(d as u32).unwrap_or(u64::MAX);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                cand.push(rest % p);
                rest /= p;
            }
            cand.push(1);
            if poly_rem(p, phi, &cand).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Coefficient ring of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    ModK(BigInt),
    ExtField(ExtField),
}

/// A ring element. `Int` serves ℤ and ℤ_k, `Ext` holds power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Int(BigInt),
    Ext(Vec<u64>),
}

impl Elem {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Elem::Int(v) => Some(v),
            Elem::Ext(_) => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Int(v) => write!(f, "{v}"),
            Elem::Ext(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl Ring {
    pub fn modk(k: impl Into<BigInt>) -> Result<Ring> {
        let k = k.into();
        if k < BigInt::from(2) {
            return Err(Error::BadModulus(k.to_string()));
        }
        Ok(Ring::ModK(k))
    }

    pub fn ext(p: u64, phi: Vec<u64>) -> Result<Ring> {
        Ok(Ring::ExtField(ExtField::new(p, phi)?))
    }

    /// Characteristic-p prime field for m = 1, else the modulus of ℤ_k.
    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            Ring::Integers => None,
            Ring::ModK(k) => Some(k.clone()),
            Ring::ExtField(f) => Some(BigInt::from(f.p())),
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Ring::ExtField(f) => Elem::Ext(vec![0; f.degree()]),
            _ => Elem::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_int(&BigInt::one())
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_int(&BigInt::from(v))
    }

    pub fn from_int(&self, v: &BigInt) -> Elem {
        match self {
            Ring::Integers => Elem::Int(v.clone()),
            Ring::ModK(k) => Elem::Int(v.mod_floor(k)),
            Ring::ExtField(f) => {
                let r = v.mod_floor(&BigInt::from(f.p())).to_u64().unwrap();
                Elem::Ext(f.scalar(r))
            }
        }
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(v) => v.is_zero(),
            Elem::Ext(c) => c.iter().all(|&x| x == 0),
        }
    }

    /// True when `a` is a canonical representative of this ring.
    pub fn contains(&self, a: &Elem) -> bool {
        match (self, a) {
            (Ring::Integers, Elem::Int(_)) => true,
            (Ring::ModK(k), Elem::Int(v)) => !v.is_negative() && v < k,
            (Ring::ExtField(f), Elem::Ext(c)) => c.len() == f.degree() && c.iter().all(|&x| x < f.p()),
            _ => false,
        }
    }

    fn check(&self, a: &Elem) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{a} is not an element of {self}")))
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (Ring::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (Ring::ModK(k), Elem::Int(x), Elem::Int(y)) => Elem::Int((x + y).mod_floor(k)),
            (Ring::ExtField(f), Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(f.add(x, y)),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self, a: &Elem) -> Result<Elem> {
        self.check(a)?;
        Ok(match (self, a) {
            (Ring::Integers, Elem::Int(x)) => Elem::Int(-x),
            (Ring::ModK(k), Elem::Int(x)) => Elem::Int((-x).mod_floor(k)),
            (Ring::ExtField(f), Elem::Ext(x)) => Elem::Ext(f.neg(x)),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (self, a, b) {
            (Ring::Integers, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (Ring::ModK(k), Elem::Int(x), Elem::Int(y)) => Elem::Int((x * y).mod_floor(k)),
            (Ring::ExtField(f), Elem::Ext(x), Elem::Ext(y)) => Elem::Ext(f.mul(x, y)),
            _ => unreachable!(),
        })
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Result<Elem> {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Every element of a finite ring, in a fixed order; `None` for ℤ.
    pub fn elements(&self) -> Option<Vec<Elem>> {
        match self {
            Ring::Integers => None,
            Ring::ModK(k) => {
                let k = k.to_u64()?;
                Some((0..k).map(|v| Elem::Int(BigInt::from(v))).collect())
            }
            Ring::ExtField(f) => Some(f.elements().into_iter().map(Elem::Ext).collect()),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "ZZ"),
            Ring::ModK(k) => write!(f, "Z/{k}"),
            Ring::ExtField(e) => write!(f, "GF({}^{})", e.p(), e.degree()),
        }
    }
}

/// Coordinates of c·θ^k in the power basis 1, θ, …, θ^{m−1}.
pub fn ext_reduce(ring: &Ring, c: &Elem, k: u32) -> Result<Vec<u64>> {
    match (ring, c) {
        (Ring::ExtField(f), Elem::Ext(v)) if ring.contains(c) => Ok(f.mul(v, &f.theta_pow(k))),
        (Ring::ExtField(_), _) => Err(Error::RingMismatch(format!("{c} is not an element of {ring}"))),
        _ => Err(Error::RingMismatch(format!("{ring} is not an extension field"))),
    }
}
