//! Writes a reduced system as OPB for an external pseudo-Boolean solver
//! and prints the variable map.

use num_bigint::BigInt;
use polyboole::algebra::{Monomial, PolySystem, Ring, SparsePoly};
use polyboole::encode::{full_reduce, ReduceOptions};
use polyboole::solver::{export_opb, import_solution};

fn main() -> polyboole::Result<()> {
    let r = Ring::modk(3)?;
    // x·y + x + 2 = 0
    let f = SparsePoly::from_int_terms(
        &r,
        [
            (Monomial::product([0, 1]), BigInt::from(1)),
            (Monomial::var(0), BigInt::from(1)),
            (Monomial::one(), BigInt::from(2)),
        ],
    );
    let sys = PolySystem::new(r, vec!["x".into(), "y".into()], vec![f])?;
    let b = full_reduce(&sys, ReduceOptions::default())?;

    let mut text = Vec::new();
    let side = export_opb(&b, &mut text)?;
    print!("{}", String::from_utf8_lossy(&text));
    for v in &side.variables {
        println!("* {} -> {}", v.pb, v.name);
    }

    // a hand-written answer line; a nonzero residual means it is not a root
    let z = import_solution("s SATISFIABLE\nv x1 -x2 x3 -x4\n", b.num_vars())?;
    println!("residuals of that line: {:?}", b.residuals(&z)?);
    Ok(())
}
