//! A QUBO instance and a 0/1 linear program, both solved by bisection.

use polyboole::optimize::qfp_opt;
use polyboole::problems::{binlp_build, matrix, qubo_build};
use polyboole::solver::BackendConfig;

fn main() -> polyboole::Result<()> {
    let cfg = BackendConfig::backtracking();

    let q = matrix(&[&[-1, 2, 0], &[0, -2, 3], &[0, 0, -1]]);
    let s = qubo_build(&q)?;
    let r = qfp_opt(&s.problem, &cfg)?;
    println!("QUBO minimum {:?} at {:?}", s.original_value(&r), r.named());

    // min −3y1 − 2y2 − 4y3  s.t.  y1 + y2 + y3 ≤ 2,  y1 − y3 ≤ 0
    let c = matrix(&[&[-3, -2, -4]]).remove(0);
    let a = matrix(&[&[1, 1, 1], &[1, 0, -1]]);
    let h = matrix(&[&[2, 0]]).remove(0);
    let s = binlp_build(&c, &a, &h)?;
    let r = qfp_opt(&s.problem, &cfg)?;
    println!("LP minimum {:?} at {:?}", s.original_value(&r), r.named());
    Ok(())
}
