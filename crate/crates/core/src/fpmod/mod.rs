//! Finitely presented modules and their morphisms.

mod hom;
mod module;
mod morphism;
mod predicates;

pub use hom::{dual_module, hom_module, pure_tensor, tensor_module, tensor_morphism, HomModule};
pub use module::{Decomposition, DirectSum, FpModule, ModuleElement};
pub use morphism::{is_exact_at, quotient, submodule, FpMorphism, Image, Quotient, Submodule};
pub use predicates::{
    element_trace_ideal, free_cover, is_projective, is_pure_submodule, projective_section, purity, purity_test_modules,
    split_retraction, split_section, trace_ideal, Purity, TraceIdeal,
};
