//! Decision procedures for trace, strict Mittag-Leffler and related predicates,
//! telescopes, and finite Kaplansky filtrations.

mod kaplansky;
mod local;
mod telescope;
mod trace;
mod verdict;

pub use kaplansky::{kaplansky_filtration, Decomposed, Filtration, FiltrationChecks, FiltrationStage, Summand};
pub use local::{
    factorization_pairs, find_section, finite_free_summands, free_embedding, locally_projective_factorization,
    locally_projective_verdict, locally_split_retraction, FreeSummands,
};
pub use telescope::{
    chain_scheme_detection, telescope_colim_eval, telescope_split, ChainDetection, ColimitValue, ImageProfile,
    SplitChecks, StageRule, Telescope, TelescopeSplit, DEFAULT_BOUND,
};
pub use trace::{
    dual_image_stages, element_sample, is_trace_module, strict_ml_comparison, strict_ml_verdict, strict_ml_verdict_on,
    ttt_cokernel_check,
};
pub use verdict::{Comparison, TraceCertificate, Truth, TttCertificate, Verdict, Witness};
