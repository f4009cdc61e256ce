//! Hermite normal form, shortest vector and closest vector for a small
//! basis given by columns.

use num_bigint::BigInt;
use polyboole::optimize::qfp_opt;
use polyboole::problems::{cvp_build, hnf, in_lattice, matrix, svp_build, svp_coeff_bound, LatticeInstance};
use polyboole::solver::BackendConfig;

fn main() -> polyboole::Result<()> {
    let b = matrix(&[&[4, 1, 0], &[2, 3, 1], &[0, 1, 5]]);
    let r = hnf(&b)?;
    println!("H = {:?}", r.h);
    println!("pivot rows {:?}, within bound: {}", r.pivots, r.within_bound(&b));
    let v = matrix(&[&[5, 6, 6]]).remove(0);
    println!("(5, 6, 6) in H-coordinates: {:?}", in_lattice(&r, &v));

    let cfg = BackendConfig::backtracking();
    println!("closed-form coefficient bound: {}", svp_coeff_bound(&b));
    let inst = LatticeInstance::new(b.clone(), None, Some(BigInt::from(2)))?;
    let s = qfp_opt(&svp_build(&inst)?, &cfg)?;
    println!("shortest ‖v‖² = {} with {:?}", s.value().unwrap() + 1, s.named());

    let t = matrix(&[&[3, 7, 2]]).remove(0);
    let inst = LatticeInstance::new(b, Some(t), Some(BigInt::from(1)))?;
    let c = qfp_opt(&cvp_build(&inst)?, &cfg)?;
    println!("closest ‖v − t‖² = {}", c.value().unwrap());
    Ok(())
}
