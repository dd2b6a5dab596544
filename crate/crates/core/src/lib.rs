//! Cohomology of classifying spaces of twisted loop groups, computed
//! exactly through Weyl-group invariant theory.
//!
//! The pipeline builds a root system, a Dynkin diagram automorphism `σ`,
//! the Weyl group `W`, the stabilizer `W_σ` of the `σ`-fixed subspace
//! `𝔱^σ`, and finally the super-Molien series of `W_σ` acting on `𝔱^σ`.

pub mod error;
pub mod exact;
pub mod report;
pub mod rootsys;
pub mod twist;
pub mod weyl;

pub use error::{Error, Result};
