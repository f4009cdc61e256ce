//! Rewrites x1³x2⁵ + 2x1⁷x2⁵ + 3 into degree-2 equations and prints the
//! squaring chain, the product chain and the rewritten polynomial.

use num_bigint::BigInt;
use polyboole::algebra::{Monomial, Ring, SparsePoly};
use polyboole::encode::{quadratize, VarTable};

fn main() {
    let zz = Ring::Integers;
    let m = |a: u32, b: u32| Monomial::from_pairs([(0, a), (1, b)]);
    let f = SparsePoly::from_int_terms(
        &zz,
        [(m(3, 5), BigInt::from(1)), (m(7, 5), BigInt::from(2)), (Monomial::one(), BigInt::from(3))],
    );
    let mut vars = VarTable::from_names(&["x1".into(), "x2".into()]).unwrap();
    let q = quadratize(std::slice::from_ref(&f), &mut vars);
    let name = |v| vars.name(v).to_string();

    println!("squaring chain:");
    for e in &q.squaring {
        println!("  {} = 0", e.display_with(&name));
    }
    println!("product chain:");
    for e in &q.products {
        println!("  {} = 0", e.display_with(&name));
    }
    println!("rewritten: {} = 0", q.rewritten[0].display_with(&name));
    let terms: usize = q.system().iter().map(|p| p.num_terms()).sum();
    println!("{} new variables, {} terms (input had {})", q.new_vars.len(), terms, f.num_terms());
}
