//! Reduction of polynomial systems over finite rings to Boolean
//! multilinear systems, and bounded-integer optimization on top of that.
//!
//! Pipeline: [`encode::quadratize`] brings every equation to degree two,
//! [`encode::full_reduce`] lifts to ℤ and writes each variable in base 2,
//! and [`solver::solve`] runs an exact backend or exports OPB.
//! [`optimize::qfp_opt`] bisects an objective over repeated feasibility
//! calls. Problem builders (QUBO, 0/1 LP, noisy linear systems, SIS,
//! SVP/CVP, NTRU key recovery) live in [`problems`].
//!
//! ```
//! use polyboole::algebra::{Monomial, PolySystem, Ring, SparsePoly};
//! use polyboole::encode::{full_reduce, ReduceOptions};
//! use polyboole::solver::{solve, BackendConfig};
//! use num_bigint::BigInt;
//!
//! let r = Ring::modk(3).unwrap();
//! let f = SparsePoly::from_int_terms(&r, [(Monomial::var(0), BigInt::from(1)), (Monomial::one(), BigInt::from(-2))]);
//! let sys = PolySystem::new(r, vec!["x".into()], vec![f]).unwrap();
//! let b = full_reduce(&sys, ReduceOptions::default()).unwrap();
//! let z = solve(&b, &BackendConfig::backtracking()).unwrap();
//! let sol = b.decode(z.assignment().unwrap()).unwrap();
//! assert_eq!(b.named_values(&sol)["x"], BigInt::from(2));
//! ```

pub mod algebra;
pub mod cli;
pub mod encode;
pub mod error;
pub mod optimize;
pub mod problems;
pub mod solver;

pub use error::{Error, Result};
