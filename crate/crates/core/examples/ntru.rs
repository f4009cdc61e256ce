//! Generates a toy NTRU key, checks that it satisfies the key-recovery
//! system, then recovers a key from the public parameters alone.

use std::time::Duration;

use polyboole::problems::{ntru_attack_system, ntru_keygen, NtruParams};
use polyboole::solver::{solve, BackendConfig, SolveOutcome};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polyboole::Result<()> {
    let prm = NtruParams::new(5, 3, 16, 2, 1)?;
    let key = ntru_keygen(&prm, &mut ChaCha8Rng::seed_from_u64(3), 1000)?;
    println!("f = {:?}\ng = {:?}\nh = {:?}", key.f, key.g, key.h.coeffs);

    let prm = prm.with_h(key.h.clone())?;
    let atk = ntru_attack_system(&prm)?;
    println!("{} bits, {} equations", atk.system.num_vars(), atk.system.equations.len());
    let w = atk.witness(&key)?;
    println!("key satisfies the system: {}", atk.system.is_solution(&w));

    let cfg = BackendConfig { time_limit: Some(Duration::from_secs(30)), ..BackendConfig::backtracking() };
    match solve(&atk.system, &cfg)? {
        SolveOutcome::Sat(z) => {
            let (f, g) = atk.decode_key(&z)?;
            println!("recovered f = {f:?}, g = {g:?}, decrypts: {}", prm.recovers(&f)?);
        }
        other => println!("{other:?}"),
    }
    Ok(())
}
