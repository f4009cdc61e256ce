//! Reduces a small system over 𝔽₅ to Boolean form, solves it and decodes
//! the root.

use num_bigint::BigInt;
use polyboole::algebra::{Monomial, PolySystem, Ring, SparsePoly};
use polyboole::encode::{full_reduce, ReduceOptions};
use polyboole::solver::{solve, BackendConfig, SolveOutcome};

fn main() -> polyboole::Result<()> {
    let r = Ring::modk(5)?;
    let t = |pairs: &[(u32, u32)], c: i64| (Monomial::from_pairs(pairs.iter().copied()), BigInt::from(c));
    // x³ + y = 0 and x·y = 4
    let f = SparsePoly::from_int_terms(&r, [t(&[(0, 3)], 1), t(&[(1, 1)], 1)]);
    let g = SparsePoly::from_int_terms(&r, [t(&[(0, 1), (1, 1)], 1), t(&[], -4)]);
    let sys = PolySystem::new(r, vec!["x".into(), "y".into()], vec![f, g])?;

    let b = full_reduce(&sys, ReduceOptions::default())?;
    println!("{} Boolean variables, {} equations, {} terms", b.num_vars(), b.equations.len(), b.total_sparseness());
    match solve(&b, &BackendConfig::backtracking())? {
        SolveOutcome::Sat(z) => {
            for (name, v) in b.named_values(&b.decode(&z)?) {
                println!("{name} = {v}");
            }
        }
        other => println!("{other:?}"),
    }
    Ok(())
}
