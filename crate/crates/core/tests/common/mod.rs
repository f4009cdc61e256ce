//! Reference implementations shared by the integration tests. Nothing here
//! calls into the library's arithmetic; polynomials are only read through
//! their term lists.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use polyboole::algebra::{Elem, Monomial, PolySystem, Ring, SparsePoly, VarId};
use polyboole::encode::{BooleanSystem, Repr};
use polyboole::optimize::StandardProblem;
use rand::Rng;

pub fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| big(x)).collect()
}

/// Every point of {0..q-1}^n in lexicographic order.
pub fn points(q: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u64>| {
                (0..q).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Integer box [lo, hi]^n.
pub fn int_box(lo: i64, hi: i64, n: usize) -> Vec<Vec<i64>> {
    points((hi - lo + 1) as u64, n).into_iter().map(|p| p.into_iter().map(|x| x as i64 + lo).collect()).collect()
}

// ---------- prime fields ----------

fn pow_mod(b: i64, e: u32, p: i64) -> i64 {
    let mut r = 1 % p;
    for _ in 0..e {
        r = r * b % p;
    }
    r
}

pub fn eval_mod(poly: &SparsePoly, point: &[u64], p: u64) -> u64 {
    let p = p as i64;
    let mut acc = 0i64;
    for (m, c) in poly.int_terms() {
        let mut t = (c % p).to_i64().unwrap().rem_euclid(p);
        for &(v, e) in m.pairs() {
            t = t * pow_mod(point[v as usize] as i64, e, p) % p;
        }
        acc = (acc + t) % p;
    }
    acc as u64
}

pub fn roots_mod(sys: &PolySystem, p: u64) -> Vec<Vec<u64>> {
    points(p, sys.vars.len()).into_iter().filter(|x| sys.polys.iter().all(|f| eval_mod(f, x, p) == 0)).collect()
}

/// Random polynomial with at most `terms` terms of total degree ≤ `deg`.
pub fn random_int_terms(rng: &mut impl Rng, n: usize, deg: u32, terms: usize, modulus: i64) -> Vec<(Monomial, BigInt)> {
    (0..rng.gen_range(1..=terms))
        .map(|_| {
            let d = rng.gen_range(0..=deg);
            let mut pairs: BTreeMap<VarId, u32> = BTreeMap::new();
            for _ in 0..d {
                *pairs.entry(rng.gen_range(0..n) as VarId).or_default() += 1;
            }
            (Monomial::from_pairs(pairs), big(rng.gen_range(1..modulus)))
        })
        .collect()
}

pub fn random_system_mod(rng: &mut impl Rng, p: u64, n: usize, r: usize, deg: u32, terms: usize) -> PolySystem {
    let ring = Ring::modk(p).unwrap();
    let polys = (0..r)
        .map(|_| SparsePoly::from_int_terms(&ring, random_int_terms(rng, n, deg, terms, p as i64)))
        .collect();
    PolySystem::new(ring, (1..=n).map(|i| format!("x{i}")).collect(), polys).unwrap()
}

// ---------- extension fields by table ----------

/// 𝔽_{p^m} with elements indexed by Σ c_i p^i; add and mul tables built
/// from schoolbook polynomial arithmetic modulo φ.
pub struct Gf {
    pub p: u64,
    pub m: usize,
    pub q: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

impl Gf {
    pub fn new(p: u64, phi: &[u64]) -> Gf {
        let m = phi.len() - 1;
        let q = (p as usize).pow(m as u32);
        let mut gf = Gf { p, m, q, add: vec![vec![0; q]; q], mul: vec![vec![0; q]; q] };
        for a in 0..q {
            for b in 0..q {
                let (ca, cb) = (gf.coords(a), gf.coords(b));
                let s: Vec<u64> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                gf.add[a][b] = gf.index(&s);
                let mut prod = vec![0u64; 2 * m];
                for i in 0..m {
                    for j in 0..m {
                        prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
                    }
                }
                for d in (m..2 * m).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    for i in 0..=m {
                        let k = d - m + i;
                        prod[k] = (prod[k] + (p - c) * phi[i] % p) % p;
                    }
                }
                gf.mul[a][b] = gf.index(&prod[..m]);
            }
        }
        gf
    }

    pub fn coords(&self, mut a: usize) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let c = (a % self.p as usize) as u64;
                a /= self.p as usize;
                c
            })
            .collect()
    }

    pub fn index(&self, c: &[u64]) -> usize {
        c.iter().rev().fold(0, |acc, &x| acc * self.p as usize + x as usize)
    }

    pub fn pow(&self, a: usize, e: u32) -> usize {
        (0..e).fold(1, |acc, _| self.mul[acc][a])
    }

    pub fn elem(&self, c: &Elem) -> usize {
        match c {
            Elem::Ext(coords) => self.index(coords),
            Elem::Int(v) => v.mod_floor_u(self.p) as usize,
        }
    }

    pub fn eval(&self, poly: &SparsePoly, point: &[usize]) -> usize {
        let mut acc = 0;
        for (m, c) in poly.terms() {
            let mut t = self.elem(c);
            for &(v, e) in m.pairs() {
                t = self.mul[t][self.pow(point[v as usize], e)];
            }
            acc = self.add[acc][t];
        }
        acc
    }

    pub fn roots(&self, sys: &PolySystem) -> Vec<Vec<usize>> {
        points(self.q as u64, sys.vars.len())
            .into_iter()
            .map(|x| x.into_iter().map(|v| v as usize).collect::<Vec<_>>())
            .filter(|x| sys.polys.iter().all(|f| self.eval(f, x) == 0))
            .collect()
    }
}

trait ModFloorU {
    fn mod_floor_u(&self, p: u64) -> u64;
}

impl ModFloorU for BigInt {
    fn mod_floor_u(&self, p: u64) -> u64 {
        let r = self % BigInt::from(p);
        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
        r.to_u64().unwrap()
    }
}

pub fn random_system_ext(rng: &mut impl Rng, ring: &Ring, gf: &Gf, n: usize, r: usize, deg: u32, terms: usize) -> PolySystem {
    let polys = (0..r)
        .map(|_| {
            let ts: Vec<(Monomial, Elem)> = random_int_terms(rng, n, deg, terms, 2)
                .into_iter()
                .map(|(m, _)| (m, Elem::Ext(gf.coords(rng.gen_range(1..gf.q)))))
                .collect();
            SparsePoly::from_terms(ring, ts).unwrap()
        })
        .collect();
    PolySystem::new(ring.clone(), (1..=n).map(|i| format!("x{i}")).collect(), polys).unwrap()
}

// ---------- Boolean systems ----------

/// Adds θ(v) − value = 0 for each pinned integer-level variable.
pub fn pinned(sys: &BooleanSystem, pins: &[(VarId, BigInt)]) -> BooleanSystem {
    let mut s = sys.clone();
    for (v, x) in pins {
        let e = s.expansion_of(*v).unwrap().to_poly();
        let eq = e.sub(&SparsePoly::int_constant(&Ring::Integers, x.clone())).unwrap();
        s.push(eq, "pin");
    }
    s
}

/// Every 0/1 solution, by enumeration with a direct evaluator.
pub fn all_solutions(sys: &BooleanSystem) -> Vec<Vec<u8>> {
    let n = sys.num_vars();
    assert!(n <= 20, "{n} variables is too many to enumerate");
    (0u64..1 << n)
        .map(|mask| (0..n).map(|i| ((mask >> i) & 1) as u8).collect::<Vec<u8>>())
        .filter(|a| sys.equations.iter().all(|e| eval_bits(e, a).is_zero()))
        .collect()
}

pub fn eval_bits(p: &SparsePoly, a: &[u8]) -> BigInt {
    p.int_terms()
        .filter(|(m, _)| m.vars().all(|v| a[v as usize] == 1))
        .map(|(_, c)| c.clone())
        .sum()
}

// ---------- OPB ----------

pub struct Opb {
    pub declared_vars: usize,
    pub declared_constraints: usize,
    /// (terms, rhs) with every relation `=`
    pub constraints: Vec<(Vec<(BigInt, Vec<usize>)>, BigInt)>,
}

pub fn parse_opb(text: &str) -> Opb {
    let mut lines = text.lines();
    let header = lines.next().expect("header");
    let nums: Vec<usize> = header
        .split_whitespace()
        .filter_map(|w| w.parse().ok())
        .collect();
    assert!(header.starts_with("* #variable="), "bad header {header}");
    let mut constraints = Vec::new();
    for l in lines.filter(|l| !l.starts_with('*') && !l.trim().is_empty()) {
        let body = l.trim().strip_suffix(';').expect("terminator").trim();
        let (lhs, rhs) = body.split_once('=').expect("relation");
        assert!(!lhs.ends_with(['<', '>']), "only equalities expected");
        let mut terms = Vec::new();
        for tok in lhs.split_whitespace() {
            if let Some(v) = tok.strip_prefix('x') {
                let t: &mut (BigInt, Vec<usize>) = terms.last_mut().expect("coefficient first");
                t.1.push(v.parse::<usize>().unwrap() - 1);
            } else {
                terms.push((tok.parse::<BigInt>().unwrap(), vec![]));
            }
        }
        constraints.push((terms, rhs.trim().parse().unwrap()));
    }
    Opb { declared_vars: nums[0], declared_constraints: nums[1], constraints }
}

impl Opb {
    pub fn holds(&self, a: &[u8]) -> bool {
        self.constraints.iter().all(|(terms, rhs)| {
            let lhs: BigInt =
                terms.iter().filter(|(_, vs)| vs.iter().all(|&v| a[v] == 1)).map(|(c, _)| c.clone()).sum();
            &lhs == rhs
        })
    }
}

// ---------- integer matrices ----------

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * &r[j]).sum()).collect())
        .collect()
}

/// Bareiss fraction-free determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// B·a for column-basis B.
pub fn combine(b: &[Vec<BigInt>], a: &[i64]) -> Vec<BigInt> {
    b.iter().map(|row| row.iter().zip(a).map(|(x, &c)| x * c).sum()).collect()
}

pub fn norm_sq(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x * x).sum()
}

/// Cyclic product in ℤ[X]/(X^N − 1), no reduction.
pub fn cyclic_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len();
    let mut out = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            out[(i + j) % n] += a[i] * b[j];
        }
    }
    out
}

pub fn centered(x: i64, q: i64) -> i64 {
    let r = x.rem_euclid(q);
    if 2 * r > q {
        r - q
    } else {
        r
    }
}

// ---------- standard problems ----------

/// Independent evaluation of a StandardProblem point: (feasible, objective).
pub fn judge(prob: &StandardProblem, vals: &[i64]) -> (bool, i64) {
    let ev = |f: &SparsePoly| -> BigInt {
        f.int_terms()
            .map(|(m, c)| {
                m.pairs().iter().fold(c.clone(), |acc, &(v, e)| acc * BigInt::from(vals[v as usize]).pow(e))
            })
            .sum()
    };
    let f_ok = prob.f.iter().all(|f| {
        let k = f.ring().modulus().unwrap();
        num_integer::Integer::mod_floor(&ev(f), &k).is_zero()
    });
    let e_ok = prob.e.iter().all(|e| ev(e).is_zero());
    let i_ok = prob.i.iter().all(|(g, b)| {
        let x = ev(g);
        !x.is_negative() && &x <= b
    });
    (f_ok && e_ok && i_ok, ev(&prob.o).to_i64().unwrap())
}

pub fn brute_opt(prob: &StandardProblem) -> Option<i64> {
    let ranges: Vec<(i64, i64)> = (0..prob.num_vars() as VarId)
        .map(|v| {
            if (v as usize) < prob.x.len() {
                let p = prob.p.to_i64().unwrap();
                match prob.repr {
                    Repr::Standard => (0, p - 1),
                    Repr::Centered => (-(p - 1) / 2, (p - 1) / 2),
                }
            } else {
                let y = &prob.y[v as usize - prob.x.len()];
                (y.lower.to_i64().unwrap(), y.bound.to_i64().unwrap())
            }
        })
        .collect();
    let mut best = None;
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let (ok, o) = judge(prob, &cur);
        if ok {
            best = Some(best.map_or(o, |b: i64| b.min(o)));
        }
        let mut k = 0;
        loop {
            if k == cur.len() {
                return best;
            }
            cur[k] += 1;
            if cur[k] <= ranges[k].1 {
                break;
            }
            cur[k] = ranges[k].0;
            k += 1;
        }
    }
}

pub fn log43_bound(u: &BigInt) -> usize {
    let uf = u.to_f64().unwrap();
    if uf <= 1.0 {
        return 1;
    }
    let k = (uf.ln() / (4f64 / 3.0).ln()).ceil() as usize;
    // guard against rounding at exact powers
    let exact = |k: usize| BigInt::from(4).pow(k as u32) >= u * BigInt::from(3).pow(k as u32);
    let k = if k > 0 && exact(k - 1) { k - 1 } else if exact(k) { k } else { k + 1 };
    k + 1
}

pub fn random_problem(rng: &mut impl Rng) -> StandardProblem {
    let zz = Ring::Integers;
    let p = [2i64, 3][rng.gen_range(0..2)];
    let mut prob = StandardProblem::new(p);
    let nx = rng.gen_range(0..=2);
    for i in 0..nx {
        prob.add_x(format!("x{i}"));
    }
    for i in 0..rng.gen_range(1..=3) {
        if rng.gen_bool(0.3) {
            prob.add_y_range(format!("y{i}"), -1, rng.gen_range(0..=2));
        } else {
            prob.add_y(format!("y{i}"), rng.gen_range(1..=6));
        }
    }
    let n = prob.num_vars();
    if nx > 0 && rng.gen_bool(0.5) {
        let rp = Ring::modk(p).unwrap();
        let mut ts: Vec<(Monomial, BigInt)> = (0..nx).map(|v| (Monomial::var(v as VarId), big(rng.gen_range(0..p)))).collect();
        ts.push((Monomial::one(), big(rng.gen_range(0..p))));
        prob.f.push(SparsePoly::from_int_terms(&rp, ts));
    }
    if rng.gen_bool(0.4) {
        let a = rng.gen_range(0..n) as VarId;
        let g = SparsePoly::from_int_terms(&zz, [(Monomial::var(a), big(1)), (Monomial::one(), big(rng.gen_range(0..=1)))]);
        prob.i.push((g, big(rng.gen_range(1..=2))));
    }
    if rng.gen_bool(0.2) {
        let a = rng.gen_range(0..n) as VarId;
        let b = rng.gen_range(0..n) as VarId;
        prob.e.push(SparsePoly::from_int_terms(
            &zz,
            [(Monomial::var(a), big(1)), (Monomial::var(b), big(-1)), (Monomial::one(), big(rng.gen_range(-1..=1)))],
        ));
    }
    let terms: Vec<(Monomial, BigInt)> = (0..rng.gen_range(1..=4))
        .map(|_| {
            let a = rng.gen_range(0..n) as VarId;
            let m = if rng.gen_bool(0.4) { Monomial::product([a, rng.gen_range(0..n) as VarId]) } else { Monomial::var(a) };
            (m, big(rng.gen_range(-2..=2)))
        })
        .collect();
    prob.o = SparsePoly::from_int_terms(&zz, terms);
    prob.shift_objective().unwrap();
    prob
}

