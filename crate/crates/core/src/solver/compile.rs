use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::encode::BooleanSystem;

/// One equation Σ c·Πx + constant = 0 with machine coefficients.
#[derive(Clone, Debug)]
pub(crate) struct CEq {
    pub constant: i128,
    /// (coefficient, term vars), sorted by |coefficient| descending
    pub terms: Vec<(i128, Vec<u32>)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub n: usize,
    pub eqs: Vec<CEq>,
}

const LIMIT: u32 = 120;

/// None when some equation could overflow 128-bit arithmetic.
pub(crate) fn compile(sys: &BooleanSystem) -> Option<Compiled> {
    let limit = BigInt::from(1) << LIMIT;
    let mut eqs = Vec::with_capacity(sys.equations.len());
    for e in &sys.equations {
        let total: BigInt = e.int_terms().map(|(_, c)| c.abs()).sum();
        if total >= limit {
            return None;
        }
        let mut constant = 0i128;
        let mut terms = Vec::new();
        for (m, c) in e.int_terms() {
            let c = c.to_i128()?;
            if m.is_one() {
                constant = c;
            } else {
                terms.push((c, m.vars().collect::<Vec<_>>()));
            }
        }
        terms.sort_by_key(|t| std::cmp::Reverse(t.0.unsigned_abs()));
        eqs.push(CEq { constant, terms });
    }
    Some(Compiled { n: sys.num_vars(), eqs })
}
