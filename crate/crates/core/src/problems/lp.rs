use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{check_rect, inf_norm, Shifted};
use crate::algebra::{Monomial, Ring, SparsePoly, VarId};
use crate::error::{Error, Result};
use crate::optimize::StandardProblem;

/// min c·y subject to A y ≤ h over y ∈ {0,1}^n.
///
/// Row i becomes 0 ≤ Σ a_ij y_j + e_i ≤ h_i + e_i with e_i = Σ|a_ij|.
/// A row with h_i + e_i = 0 turns into an exact equation, one with
/// h_i + e_i < 0 into the unsatisfiable equation 1 = 0.
pub fn binlp_build(c: &[BigInt], a: &[Vec<BigInt>], h: &[BigInt]) -> Result<Shifted> {
    let n = c.len();
    if a.len() != h.len() || a.iter().any(|r| r.len() != n) {
        return Err(Error::ShapeMismatch(format!("A must be {}x{n}", h.len())));
    }
    let zz = Ring::Integers;
    let mut prob = StandardProblem::new(2);
    let ys: Vec<VarId> = (0..n).map(|j| prob.add_y(format!("y{}", j + 1), 1)).collect();
    for (row, hi) in a.iter().zip(h) {
        let e: BigInt = row.iter().map(|x| x.abs()).sum();
        let mut g = SparsePoly::int_constant(&zz, e.clone());
        for (x, &y) in row.iter().zip(&ys) {
            g.add_term(Monomial::var(y), zz.from_int(x));
        }
        let b = hi + &e;
        if b.is_negative() {
            prob.e.push(SparsePoly::int_constant(&zz, 1));
        } else if b.is_zero() {
            prob.e.push(g);
        } else {
            prob.i.push((g, b));
        }
    }
    let shift: BigInt = c.iter().map(|x| x.abs()).sum();
    let mut o = SparsePoly::int_constant(&zz, shift.clone());
    for (cj, &y) in c.iter().zip(&ys) {
        o.add_term(Monomial::var(y), zz.from_int(cj));
    }
    prob.o = o;
    prob.u = &shift * 2 + 1;
    Ok(Shifted { problem: prob, shift })
}

/// min yᵀQy over y ∈ {0,1}^m, shifted by m²·max|Q_ij|.
pub fn qubo_build(q: &[Vec<BigInt>]) -> Result<Shifted> {
    check_rect(q)?;
    let m = q.len();
    if q[0].len() != m {
        return Err(Error::ShapeMismatch("Q must be square".into()));
    }
    let zz = Ring::Integers;
    let mut prob = StandardProblem::new(2);
    let ys: Vec<VarId> = (0..m).map(|j| prob.add_y(format!("y{}", j + 1), 1)).collect();
    let shift = BigInt::from(m * m) * inf_norm(q);
    let mut o = SparsePoly::int_constant(&zz, shift.clone());
    for (i, row) in q.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            o.add_term(Monomial::product([ys[i], ys[j]]), zz.from_int(x));
        }
    }
    prob.o = o;
    prob.u = &shift * 2 + 1;
    Ok(Shifted { problem: prob, shift })
}
