use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ceil_sqrt, check_rect, inf_norm, json_int, parse_matrix, vec_inf_norm, Matrix};
use crate::algebra::{Monomial, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};
use crate::optimize::StandardProblem;

/// A lattice given by the columns of an m×n basis matrix, with an optional
/// CVP target and an optional cap on |a_i|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInstance {
    pub basis: Matrix,
    pub target: Option<Vec<BigInt>>,
    pub coeff_bound: Option<BigInt>,
    /// max |entry| of the basis
    pub norm: BigInt,
    pub rank: usize,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    basis: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    target: Option<Vec<serde_json::Value>>,
    #[serde(default)]
    coeff_bound: Option<serde_json::Value>,
}

impl LatticeInstance {
    pub fn new(basis: Matrix, target: Option<Vec<BigInt>>, coeff_bound: Option<BigInt>) -> Result<Self> {
        check_rect(&basis)?;
        if let Some(t) = &target {
            if t.len() != basis.len() {
                return Err(Error::ShapeMismatch(format!("target has {} entries, basis has {} rows", t.len(), basis.len())));
            }
        }
        if let Some(b) = &coeff_bound {
            if b < &BigInt::one() {
                return Err(Error::Invalid(format!("coefficient bound {b} must be at least 1")));
            }
        }
        let norm = inf_norm(&basis);
        let rank = rank(&basis);
        Ok(LatticeInstance { basis, target, coeff_bound, norm, rank })
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn n(&self) -> usize {
        self.basis[0].len()
    }

    pub fn full_rank(&self) -> bool {
        self.rank == self.n()
    }

    /// A JSON object {basis, target?, coeff_bound?} or a bare matrix in
    /// text or JSON form.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let j: LatticeJson = serde_json::from_str(text)?;
            let basis = j.basis.iter().map(|r| r.iter().map(json_int).collect()).collect::<Result<Matrix>>()?;
            let target = j.target.map(|t| t.iter().map(json_int).collect::<Result<Vec<_>>>()).transpose()?;
            let cb = j.coeff_bound.as_ref().map(json_int).transpose()?;
            LatticeInstance::new(basis, target, cb)
        } else {
            LatticeInstance::new(parse_matrix(text)?, None, None)
        }
    }

    /// Vector B·a.
    pub fn combine(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.basis.iter().map(|row| row.iter().zip(a).map(|(x, y)| x * y).sum()).collect()
    }
}

/// Rank over ℚ by fraction-free elimination.
pub fn rank(m: &[Vec<BigInt>]) -> usize {
    let mut a: Matrix = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, piv);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (x, y) = (a[r][c].clone(), a[i][c].clone());
            for k in c..cols {
                let v = &a[i][k] * &x - &a[r][k] * &y;
                a[i][k] = v;
            }
            let g = a[i].iter().fold(BigInt::zero(), |g, v| g.gcd(v));
            if g > BigInt::one() {
                for v in a[i].iter_mut() {
                    *v /= &g;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Column Hermite normal form H = B·E.
///
/// Column j has its last nonzero entry h_{f(j),j} ≥ 1 at row f(j), f is
/// strictly increasing, and 0 ≤ h_{f(j),k} < h_{f(j),j} for k > j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfResult {
    pub h: Matrix,
    /// n×n unimodular
    pub e: Matrix,
    /// f(j), 0-based
    pub pivots: Vec<usize>,
}

impl HnfResult {
    /// Whether every entry obeys |h| ≤ (⌈√n⌉‖B‖∞)^n.
    pub fn within_bound(&self, b: &[Vec<BigInt>]) -> bool {
        let n = self.pivots.len();
        let bound = num_traits::pow(ceil_sqrt(&BigInt::from(n)) * inf_norm(b), n);
        inf_norm(&self.h) <= bound
    }

    /// Pivot and reduction conditions.
    pub fn is_normal(&self) -> bool {
        let n = self.pivots.len();
        let m = self.h.len();
        (1..n).all(|j| self.pivots[j - 1] < self.pivots[j])
            && (0..n).all(|j| {
                let f = self.pivots[j];
                self.h[f][j].is_positive()
                    && (f + 1..m).all(|i| self.h[i][j].is_zero())
                    && (j + 1..n).all(|k| !self.h[f][k].is_negative() && self.h[f][k] < self.h[f][j])
            })
    }
}

fn col_axpy(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let d = &row[src] * q;
        row[dst] -= d;
    }
}

fn col_neg(m: &mut Matrix, c: usize) {
    for row in m.iter_mut() {
        row[c] = -&row[c];
    }
}

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect()).collect()
}

pub fn hnf(b: &[Vec<BigInt>]) -> Result<HnfResult> {
    check_rect(b)?;
    let m = b.len();
    let n = b[0].len();
    let mut h: Matrix = b.to_vec();
    let mut e = identity(n);
    let mut active: Vec<usize> = (0..n).collect();
    // (row, working column)
    let mut found: Vec<(usize, usize)> = Vec::new();
    for i in (0..m).rev() {
        if active.is_empty() {
            break;
        }
        loop {
            let nz: Vec<usize> = active.iter().copied().filter(|&c| !h[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                if let Some(&c) = nz.first() {
                    if h[i][c].is_negative() {
                        col_neg(&mut h, c);
                        col_neg(&mut e, c);
                    }
                    found.push((i, c));
                    active.retain(|&x| x != c);
                }
                break;
            }
            let c = *nz.iter().min_by_key(|&&c| h[i][c].abs()).unwrap();
            for &d in nz.iter().filter(|&&d| d != c) {
                let q = h[i][d].div_floor(&h[i][c]);
                col_axpy(&mut h, d, c, &q);
                col_axpy(&mut e, d, c, &q);
            }
        }
    }
    if !active.is_empty() {
        return Err(Error::RankDeficient);
    }
    found.reverse();
    let order: Vec<usize> = found.iter().map(|&(_, c)| c).collect();
    let pivots: Vec<usize> = found.iter().map(|&(r, _)| r).collect();
    let permute = |x: &Matrix| -> Matrix { x.iter().map(|row| order.iter().map(|&c| row[c].clone()).collect()).collect() };
    let mut h = permute(&h);
    let mut e = permute(&e);
    for k in 1..n {
        for j in (0..k).rev() {
            let f = pivots[j];
            let q = h[f][k].div_floor(&h[f][j]);
            if !q.is_zero() {
                col_axpy(&mut h, k, j, &q);
                col_axpy(&mut e, k, j, &q);
            }
        }
    }
    Ok(HnfResult { h, e, pivots })
}

/// Coefficients c with H·c = v when v lies in the lattice of H.
pub fn in_lattice(r: &HnfResult, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = r.pivots.len();
    let mut rest = v.to_vec();
    let mut c = vec![BigInt::zero(); n];
    for j in (0..n).rev() {
        let f = r.pivots[j];
        if rest[f + 1..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = rest[f].div_mod_floor(&r.h[f][j]);
        if !rem.is_zero() {
            return None;
        }
        for (x, row) in rest.iter_mut().zip(&r.h) {
            *x -= &q * &row[j];
        }
        c[j] = q;
    }
    rest.iter().all(|x| x.is_zero()).then_some(c)
}

fn coeff_bound_for(n: usize, m: usize, h: &BigInt) -> BigInt {
    let sn = ceil_sqrt(&BigInt::from(n));
    let sm = ceil_sqrt(&BigInt::from(m));
    let inner = num_traits::pow(sn * h, n) + 1;
    BigInt::from(n) * sm * h * num_traits::pow(inner, n + 1)
}

/// n⌈√m⌉‖B‖∞((⌈√n⌉‖B‖∞)^n + 1)^{n+1}: every coefficient of a shortest
/// vector is at most this in absolute value.
pub fn svp_coeff_bound(b: &[Vec<BigInt>]) -> BigInt {
    coeff_bound_for(b[0].len(), b.len(), &inf_norm(b))
}

fn lattice_problem(l: &LatticeInstance, coeff: &BigInt, vmax: &BigInt) -> (StandardProblem, Vec<VarId>) {
    let (m, n) = (l.m(), l.n());
    let zz = Ring::Integers;
    let mut prob = StandardProblem::new(2);
    let a: Vec<VarId> = (0..n).map(|j| prob.add_y_range(format!("a{}", j + 1), -coeff, coeff.clone())).collect();
    let v: Vec<VarId> = (0..m).map(|i| prob.add_y_range(format!("v{}", i + 1), -vmax, vmax.clone())).collect();
    for (i, row) in l.basis.iter().enumerate() {
        let terms = row.iter().zip(&a).map(|(x, &aj)| (Monomial::var(aj), -x));
        prob.e.push(SparsePoly::from_int_terms(&zz, terms.chain([(Monomial::var(v[i]), BigInt::one())])));
    }
    (prob, v)
}

/// min ‖v‖² − 1 over nonzero v = Σ a_i b_i.
pub fn svp_build(l: &LatticeInstance) -> Result<StandardProblem> {
    if l.norm.is_zero() || (l.coeff_bound.is_none() && !l.full_rank()) {
        return Err(Error::RankDeficient);
    }
    let coeff = l.coeff_bound.clone().unwrap_or_else(|| svp_coeff_bound(&l.basis));
    let m = BigInt::from(l.m());
    let vmax = ceil_sqrt(&m) * &l.norm;
    let (mut prob, v) = lattice_problem(l, &coeff, &vmax);
    let zz = Ring::Integers;
    let terms = v.iter().map(|&x| (Monomial::from_pairs([(x, 2)]), BigInt::one()));
    prob.o = SparsePoly::from_int_terms(&zz, terms.chain([(Monomial::one(), BigInt::from(-1))]));
    prob.u = &m * &l.norm * &l.norm;
    Ok(prob)
}

/// min ‖v − b₀‖² over v = Σ a_i b_i.
pub fn cvp_build(l: &LatticeInstance) -> Result<StandardProblem> {
    let t = l.target.as_ref().ok_or_else(|| Error::Invalid("CVP needs a target vector".into()))?;
    if l.coeff_bound.is_none() && !l.full_rank() {
        return Err(Error::RankDeficient);
    }
    let tn = vec_inf_norm(t);
    let reach = &l.norm + &tn;
    let coeff = l.coeff_bound.clone().unwrap_or_else(|| coeff_bound_for(l.n(), l.m(), &reach));
    let m = BigInt::from(l.m());
    let vmax = ceil_sqrt(&m) * &reach + &tn;
    let (mut prob, v) = lattice_problem(l, &coeff, &vmax);
    let zz = Ring::Integers;
    let mut o = SparsePoly::zero(&zz);
    for (&x, ti) in v.iter().zip(t) {
        let d = SparsePoly::from_int_terms(&zz, [(Monomial::var(x), BigInt::one()), (Monomial::one(), -ti)]);
        o = o.add(&d.mul(&d)?)?;
    }
    prob.o = o;
    prob.u = &m * &reach * &reach + 1;
    Ok(prob)
}
