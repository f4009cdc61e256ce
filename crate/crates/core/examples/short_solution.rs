//! Short nonzero kernel vectors of a matrix over 𝔽₅ in centered
//! coordinates: the exact minimum, then a feasibility query under a bound.

use num_bigint::BigInt;
use polyboole::optimize::qfp_opt;
use polyboole::problems::{linear_system, matrix, sis_build, smallest_solution_build, solve_feasibility};
use polyboole::solver::BackendConfig;

fn main() -> polyboole::Result<()> {
    let p = BigInt::from(5);
    let a = matrix(&[&[1, 2, 3]]);
    let sys = linear_system(&a, &p, 3)?;
    let cfg = BackendConfig::backtracking();

    let r = qfp_opt(&smallest_solution_build(&sys)?, &cfg)?;
    println!("smallest ‖x‖² = {} at {:?}", r.value().unwrap() + 1, r.named());

    for bound in [1, 2] {
        let out = solve_feasibility(&sis_build(&sys, &BigInt::from(bound))?, &cfg)?;
        println!("‖x‖² ≤ {bound}: {:?}", out.values());
    }
    Ok(())
}
