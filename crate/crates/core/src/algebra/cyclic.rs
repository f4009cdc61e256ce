use serde::{Deserialize, Serialize};

use super::ring::is_prime_u64;
use crate::error::{Error, Result};

/// Element of ℤ_k[X]/(X^N − 1), coefficient i multiplies X^i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclicElement {
    pub modulus: u64,
    pub coeffs: Vec<u64>,
}

impl CyclicElement {
    pub fn new(modulus: u64, coeffs: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::BadModulus(modulus.to_string()));
        }
        if coeffs.is_empty() {
            return Err(Error::ShapeMismatch("length N must be positive".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| c % modulus).collect();
        Ok(CyclicElement { modulus, coeffs })
    }

    /// Reduces signed coefficients into {0, …, k−1}.
    pub fn from_signed(modulus: u64, coeffs: &[i64]) -> Result<Self> {
        let k = modulus as i64;
        Self::new(modulus, coeffs.iter().map(|&c| c.rem_euclid(k) as u64).collect())
    }

    pub fn one(modulus: u64, n: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[0] = 1 % modulus;
        CyclicElement { modulus, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.modulus, self.len())
    }

    /// Representatives in (−k/2, k/2].
    pub fn centered(&self) -> Vec<i64> {
        let k = self.modulus as i64;
        self.coeffs
            .iter()
            .map(|&c| {
                let c = c as i64;
                if 2 * c > k {
                    c - k
                } else {
                    c
                }
            })
            .collect()
    }

    pub fn with_modulus(&self, modulus: u64) -> Result<Self> {
        Self::from_signed(modulus, &self.centered())
    }
}

pub fn cyclic_convolve(a: &CyclicElement, b: &CyclicElement) -> Result<CyclicElement> {
    if a.modulus != b.modulus || a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "({}, N={}) vs ({}, N={})",
            a.modulus,
            a.len(),
            b.modulus,
            b.len()
        )));
    }
    let n = a.len();
    let k = a.modulus as u128;
    let mut out = vec![0u128; n];
    for (j, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (l, &y) in b.coeffs.iter().enumerate() {
            let i = (j + l) % n;
            out[i] = (out[i] + x as u128 * y as u128) % k;
        }
    }
    Ok(CyclicElement { modulus: a.modulus, coeffs: out.into_iter().map(|c| c as u64).collect() })
}

/// Inverse in ℤ_k[X]/(X^N − 1) for prime k or k = 2^e.
pub fn cyclic_invert(f: &CyclicElement) -> Result<CyclicElement> {
    let k = f.modulus;
    if is_prime_u64(k) {
        return invert_prime(f);
    }
    if k.is_power_of_two() {
        let e = k.trailing_zeros();
        let mut g = invert_prime(&f.with_modulus(2)?)?.with_modulus(k)?;
        let two = CyclicElement::new(k, {
            let mut c = vec![0; f.len()];
            c[0] = 2;
            c
        })?;
        for _ in 1..e {
            // g ← g(2 − f g)
            let fg = cyclic_convolve(f, &g)?;
            let diff: Vec<u64> = two.coeffs.iter().zip(&fg.coeffs).map(|(a, b)| (a + k - b) % k).collect();
            g = cyclic_convolve(&g, &CyclicElement::new(k, diff)?)?;
        }
        if !cyclic_convolve(f, &g)?.is_one() {
            return Err(Error::NotInvertible);
        }
        return Ok(g);
    }
    Err(Error::UnsupportedModulus(k.to_string()))
}

fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut r = 1u128;
    let mut b = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u128;
        }
        b = b * b % p as u128;
        e >>= 1;
    }
    r as u64
}

fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = (*r.last().unwrap() as u128 * lead_inv as u128 % p as u128) as u64;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = (c as u128 * bc as u128 % p as u128) as u64;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

fn invert_prime(f: &CyclicElement) -> Result<CyclicElement> {
    let p = f.modulus;
    let n = f.len();
    let mut modulus = vec![0u64; n + 1];
    modulus[0] = p - 1;
    modulus[n] = 1;
    let mut a = f.coeffs.clone();
    trim(&mut a);
    if a.is_empty() {
        return Err(Error::NotInvertible);
    }
    // extended Euclid tracking only the coefficient of f
    let (mut r0, mut r1) = (modulus, a);
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1, p);
        let s = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return Err(Error::NotInvertible);
    }
    let c = inv_mod(r0[0], p);
    let mut out = vec![0u64; n];
    for (i, &x) in s0.iter().enumerate() {
        out[i % n] = (out[i % n] + (x as u128 * c as u128 % p as u128) as u64) % p;
    }
    CyclicElement::new(p, out)
}
