//! Finitely presented functors of modules and their natural transformations.

mod coherent;
mod factor;
mod nat;
mod probes;

pub use coherent::{qc, scheme, CoherentFunctor, Evaluation, Origin};
pub use factor::{
    fg_image_factorization, kernel_factorization, nat_to_tensor, tensor_to_nat, ImageFactorization, KernelFactorization,
};
pub use nat::{
    hom_functor, nat_cokernel, nat_kernel, qc_map, scheme_map, yoneda, NatCokernel, NatHom, NatKernel,
    NatTransformation,
};
pub use probes::{
    exactness_profile, sch_envelope, sml_probe_check, Envelope, ExactnessProfile, ProbeFamily, SequenceExactness,
    ShortExact, SmlCheck, SmlWitness, DEFAULT_FACTOR_LIMIT,
};
