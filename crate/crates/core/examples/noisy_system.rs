//! Plants a linear system over 𝔽₃ with two corrupted rows and recovers the
//! fewest number of violated equations.

use num_bigint::BigInt;
use polyboole::optimize::qfp_opt;
use polyboole::problems::{lswn_system, planted_lswn, pswn_build, violated};
use polyboole::solver::BackendConfig;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polyboole::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (a, b, planted) = planted_lswn(&mut rng, 3, 5, 2, 2);
    let sys = lswn_system(&a, &b, &BigInt::from(3))?;
    println!("planted x = {planted:?} violates {} rows", violated(&sys, &planted)?);

    let r = qfp_opt(&pswn_build(&sys)?, &BackendConfig::backtracking())?;
    let named = r.named();
    println!("fewest violated rows: {}", r.value().unwrap());
    println!("x1 = {}, x2 = {}", named["x1"], named["x2"]);
    Ok(())
}
