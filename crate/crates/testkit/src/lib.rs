//! Independent reference computations for tests. Nothing here depends on
//! `cofun-core`: modules over `Z/n` are enumerated exhaustively and integer
//! invariants come from determinantal divisors.

pub mod finite;
pub mod gen;
pub mod minors;

pub use finite::{
    bilinear_count, cyclic_profile, hom_profile, homs, morphism_profiles, tensor_profile, FiniteQuotient,
    MorphismProfiles,
};
pub use gen::Gen;
pub use minors::{determinant, invariant_factors};
