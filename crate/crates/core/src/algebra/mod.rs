//! Exact arithmetic: rings, sparse polynomials, cyclic convolution.

mod cyclic;
mod json;
mod poly;
mod ring;

pub use cyclic::{cyclic_convolve, cyclic_invert, CyclicElement};
pub use json::{
    poly_from_json, poly_to_json, terms_from_json, terms_to_json, CoeffJson, PolyJson, PolySystem, PolySystemJson,
    RingJson, TermJson,
};
pub(crate) use json::parse_int;
pub use poly::{Monomial, SparsePoly, VarId};
pub use ring::{ext_reduce, is_prime, is_prime_u64, Elem, ExtField, Ring};
