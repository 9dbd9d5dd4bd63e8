//! Finitely presented modules over `Z` and `Z/n`, finitely presented functors
//! of modules, and decision procedures for Mittag-Leffler type predicates.

pub mod error;
pub mod exact;
pub mod fpmod;
pub mod functor;
pub mod mllab;

pub use error::{Error, Result};
