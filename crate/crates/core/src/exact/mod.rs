//! Exact linear algebra over `Z` and `Z/n`: normal forms, linear systems, kernels.

mod matrix;
mod ring;
mod snf;
mod solve;

pub use matrix::IntMatrix;
pub use ring::{extended_gcd, Int, RingSpec};
pub use snf::{smith_normal_form, SmithForm};
pub use solve::{kernel_basis, solve_linear, LeftSolver, Solution};
