//! From polynomial systems to integer equations over 0/1 variables.
//!
//! θ expansions, quadratization, bit-blasting, modular lifting, extension
//! descent and the integer/inequality encodings all write into an
//! [`Encoder`], which produces a [`BooleanSystem`].

mod encoder;
mod json;
mod pipeline;
mod quadratize;
mod registry;
mod system;
mod theta;

pub use encoder::{field_range, Encoder, LiftMode, Repr};
pub use json::BooleanSystemJson;
pub use pipeline::{
    bit_blast, descend_extension, encode_inequalities, encode_integers, full_reduce, lift_modular, Blasted, Descent,
    ReduceOptions, VarBound,
};
pub use quadratize::{quadratize, ChainKind, ChainVar, Quadratization};
pub use registry::{BitClass, BoolVar, Registry, VarTable};
pub use system::{BooleanSystem, DeriveRule, DerivedVar, EncodedSolution, ExtLayout, LiftRecord};
pub use theta::{expansion_map, theta, theta_centered, theta_len, theta_weights, AffineExpansion};
