//! A system over 𝔽₄ = 𝔽₂[θ]/(θ² + θ + 1): descent to 𝔽₂ coordinates,
//! solving, and reassembly of the field values.

use polyboole::algebra::{Elem, Monomial, PolySystem, Ring, SparsePoly};
use polyboole::encode::{full_reduce, ReduceOptions};
use polyboole::solver::{solve, BackendConfig};

fn main() -> polyboole::Result<()> {
    let gf4 = Ring::ext(2, vec![1, 1, 1])?;
    // x² + θ·x + θ + 1 = 0
    let f = SparsePoly::from_terms(
        &gf4,
        [
            (Monomial::from_pairs([(0, 2)]), Elem::Ext(vec![1, 0])),
            (Monomial::var(0), Elem::Ext(vec![0, 1])),
            (Monomial::one(), Elem::Ext(vec![1, 1])),
        ],
    )?;
    let sys = PolySystem::new(gf4, vec!["x".into()], vec![f])?;
    let b = full_reduce(&sys, ReduceOptions::default())?;
    println!("{} bits over {} equations", b.num_vars(), b.equations.len());
    match solve(&b, &BackendConfig::backtracking())?.assignment() {
        Some(z) => {
            for (name, v) in b.field_values(&b.decode(z)?) {
                println!("{name} = {v} (power-basis coordinates)");
            }
        }
        None => println!("no root"),
    }
    Ok(())
}
