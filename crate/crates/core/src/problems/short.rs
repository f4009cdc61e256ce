use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::algebra::{is_prime, Monomial, PolySystem, Ring, SparsePoly, VarId};
use crate::encode::{BooleanSystem, Repr};
use crate::error::{Error, Result};
use crate::optimize::{build_base, StandardProblem};

fn centered_problem(sys: &PolySystem) -> Result<StandardProblem> {
    let p = match &sys.ring {
        Ring::ModK(k) if is_prime(k) => k.clone(),
        other => return Err(Error::RingMismatch(format!("expected a prime field, got {other}"))),
    };
    if p.is_even() {
        return Err(Error::CenteredRepUnsupported(p.to_string()));
    }
    let mut prob = StandardProblem::new(p);
    prob.repr = Repr::Centered;
    for n in &sys.vars {
        prob.add_x(n.clone());
    }
    prob.f = sys.polys.clone();
    Ok(prob)
}

/// ‖X‖² − 1 over ℤ.
fn norm_minus_one(n: usize) -> SparsePoly {
    let zz = Ring::Integers;
    let terms = (0..n as VarId).map(|v| (Monomial::from_pairs([(v, 2)]), BigInt::one()));
    SparsePoly::from_int_terms(&zz, terms.chain([(Monomial::one(), BigInt::from(-1))]))
}

/// Feasibility form of SIS: F = 0 over 𝔽_p with centered variables and
/// 1 ≤ ‖X‖² ≤ `norm_sq_bound`.
pub fn sis_problem(sys: &PolySystem, norm_sq_bound: &BigInt) -> Result<StandardProblem> {
    if norm_sq_bound < &BigInt::one() {
        return Err(Error::Invalid(format!("norm bound {norm_sq_bound} leaves no nonzero vector")));
    }
    let mut prob = centered_problem(sys)?;
    let g = norm_minus_one(sys.vars.len());
    let b: BigInt = norm_sq_bound - 1;
    if b.is_positive() {
        prob.i.push((g, b));
    } else {
        // θ_0 is empty, so the window collapses to ‖X‖² − 1 = 0
        prob.e.push(g);
    }
    prob.o = SparsePoly::int_constant(&Ring::Integers, 1);
    prob.u = BigInt::from(2);
    Ok(prob)
}

/// P̄(Q(F)) plus the norm window, ready for a backend.
pub fn sis_build(sys: &PolySystem, norm_sq_bound: &BigInt) -> Result<BooleanSystem> {
    Ok(build_base(&sis_problem(sys, norm_sq_bound)?)?.system)
}

/// min ‖X‖² − 1 over nonzero centered solutions of F.
pub fn smallest_solution_build(sys: &PolySystem) -> Result<StandardProblem> {
    let mut prob = centered_problem(sys)?;
    let n = sys.vars.len();
    if n == 0 {
        return Err(Error::Invalid("no variables".into()));
    }
    prob.o = norm_minus_one(n);
    let pm1 = &prob.p - 1;
    prob.u = BigInt::from(n) * &pm1 * &pm1;
    Ok(prob)
}

/// The homogeneous system A X = 0 over 𝔽_p.
pub fn linear_system(a: &[Vec<BigInt>], p: &BigInt, n: usize) -> Result<PolySystem> {
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("every row must have {n} entries")));
    }
    let ring = Ring::modk(p.clone())?;
    let polys = a
        .iter()
        .map(|row| {
            SparsePoly::from_int_terms(&ring, row.iter().enumerate().map(|(j, x)| (Monomial::var(j as VarId), x.clone())))
        })
        .collect();
    PolySystem::new(ring, (1..=n).map(|j| format!("x{j}")).collect(), polys)
}
