//! Seeded instance generators. Every function takes the caller's RNG.

use num_bigint::BigInt;
use rand::seq::index::sample;
use rand::Rng;

use super::{rank, Matrix};

/// Entries uniform in [−max, max].
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, max: i64) -> Matrix {
    (0..rows).map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-max..=max))).collect()).collect()
}

/// Resamples until the columns are independent. Needs rows ≥ cols.
pub fn random_full_rank(rng: &mut impl Rng, rows: usize, cols: usize, max: i64) -> Matrix {
    assert!(rows >= cols && max >= 1);
    loop {
        let m = random_matrix(rng, rows, cols, max);
        if rank(&m) == cols {
            return m;
        }
    }
}

/// Upper-triangular Q with entries in [−max, max].
pub fn random_qubo(rng: &mut impl Rng, m: usize, max: i64) -> Matrix {
    (0..m)
        .map(|i| (0..m).map(|j| BigInt::from(if j >= i { rng.gen_range(-max..=max) } else { 0 })).collect())
        .collect()
}

/// r×n matrix over {0, …, p−1}.
pub fn random_sis_matrix(rng: &mut impl Rng, r: usize, n: usize, p: u64) -> Matrix {
    (0..r).map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(0..p))).collect()).collect()
}

/// (A, b, x*) over 𝔽_p where A x* − b is nonzero in exactly `errors` rows.
pub fn planted_lswn(rng: &mut impl Rng, p: u64, r: usize, n: usize, errors: usize) -> (Matrix, Vec<BigInt>, Vec<BigInt>) {
    assert!(errors <= r && p >= 2);
    let a = random_sis_matrix(rng, r, n, p);
    let x: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    let bad: Vec<usize> = sample(rng, r, errors).into_vec();
    let b = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let ax: BigInt = row.iter().zip(&x).map(|(c, v)| c * v).sum();
            let noise = if bad.contains(&i) { rng.gen_range(1..p) } else { 0 };
            (ax + noise) % p
        })
        .collect();
    (a, b, x.into_iter().map(BigInt::from).collect())
}
