use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{is_prime, Monomial, PolySystem, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};
use crate::optimize::StandardProblem;

/// Fewest violated equations of a system over 𝔽_p.
///
/// Adds error variables e_j with f_j − e_j = 0 and Boolean slacks H_j with
/// H_j − e_j^{p−1} = 0, then minimizes Σ H_j. The x variables keep their
/// ids; e_j and H_j follow.
pub fn pswn_build(sys: &PolySystem) -> Result<StandardProblem> {
    let p = match &sys.ring {
        Ring::ModK(k) if is_prime(k) => k.clone(),
        other => return Err(Error::RingMismatch(format!("expected a prime field, got {other}"))),
    };
    let r = sys.polys.len();
    let mut prob = StandardProblem::new(p.clone());
    for n in &sys.vars {
        prob.add_x(n.clone());
    }
    let es: Vec<VarId> = (0..r).map(|j| prob.add_x(format!("e{}", j + 1))).collect();
    let hs: Vec<VarId> = (0..r).map(|j| prob.add_y(format!("H{}", j + 1), 1)).collect();
    if let Some(dup) = dup_name(&prob.names()) {
        return Err(Error::Invalid(format!("variable name {dup:?} clashes with an error variable")));
    }
    let ring = &sys.ring;
    let minus_one = ring.from_i64(-1);
    let pm1 = (&p - 1u32).to_u32().ok_or_else(|| Error::UnsupportedModulus(p.to_string()))?;
    for (f, &e) in sys.polys.iter().zip(&es) {
        let mut g = f.clone();
        g.add_term(Monomial::var(e), minus_one.clone());
        prob.f.push(g);
    }
    for (&e, &h) in es.iter().zip(&hs) {
        let mut g = SparsePoly::var(ring, h);
        g.add_term(Monomial::from_pairs([(e, pm1)]), minus_one.clone());
        prob.f.push(g);
    }
    let zz = Ring::Integers;
    prob.o = SparsePoly::from_int_terms(&zz, hs.iter().map(|&h| (Monomial::var(h), BigInt::from(1))));
    prob.u = BigInt::from(r + 1);
    Ok(prob)
}

fn dup_name(names: &[String]) -> Option<String> {
    let mut seen = std::collections::BTreeSet::new();
    names.iter().find(|n| !seen.insert(n.as_str())).cloned()
}

/// The linear system A x − b over 𝔽_p with variables x1..xn.
pub fn lswn_system(a: &[Vec<BigInt>], b: &[BigInt], p: &BigInt) -> Result<PolySystem> {
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!("{} rows but {} right-hand sides", a.len(), b.len())));
    }
    let n = a.first().map_or(0, |r| r.len());
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch("ragged matrix".into()));
    }
    let ring = Ring::modk(p.clone())?;
    let polys = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let terms = row.iter().enumerate().map(|(j, x)| (Monomial::var(j as VarId), x.clone()));
            SparsePoly::from_int_terms(&ring, terms.chain([(Monomial::one(), -bi)]))
        })
        .collect();
    PolySystem::new(ring, (1..=n).map(|j| format!("x{j}")).collect(), polys)
}

/// How many polynomials of `sys` are nonzero at `point`.
pub fn violated(sys: &PolySystem, point: &[BigInt]) -> Result<usize> {
    let mut count = 0;
    for f in &sys.polys {
        let v = f.evaluate(|v| sys.ring.from_int(&point[v as usize]))?;
        if !sys.ring.is_zero(&v) {
            count += 1;
        }
    }
    Ok(count)
}
