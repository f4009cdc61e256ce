//! Minimizes (y1 − 2)² + y1·y2 − y2 over bounded integers with one
//! inequality, and prints the bisection trace.

use num_bigint::BigInt;
use polyboole::algebra::{Monomial, Ring, SparsePoly};
use polyboole::optimize::{qfp_opt, StandardProblem};
use polyboole::solver::BackendConfig;

fn main() -> polyboole::Result<()> {
    let zz = Ring::Integers;
    let mut p = StandardProblem::new(2);
    let y1 = p.add_y("y1", 3);
    let y2 = p.add_y("y2", 2);
    let t = |m: Monomial, c: i64| (m, BigInt::from(c));
    p.o = SparsePoly::from_int_terms(
        &zz,
        [
            t(Monomial::from_pairs([(y1, 2)]), 1),
            t(Monomial::var(y1), -4),
            t(Monomial::one(), 4),
            t(Monomial::product([y1, y2]), 1),
            t(Monomial::var(y2), -1),
        ],
    );
    // 0 ≤ y1 + y2 − 1 ≤ 2
    p.i.push((SparsePoly::from_int_terms(&zz, [t(Monomial::var(y1), 1), t(Monomial::var(y2), 1), t(Monomial::one(), -1)]), BigInt::from(2)));
    let shift = p.shift_objective()?;

    let r = qfp_opt(&p, &BackendConfig::backtracking())?;
    for s in &r.trace {
        println!("alpha={} mu={} beta={} {:?}", s.alpha, s.mu, s.beta, s.outcome);
    }
    match r.value() {
        Some(v) => println!("minimum {} at {:?}", v - shift, r.named()),
        None => println!("{:?}", r.status),
    }
    Ok(())
}
