//! Initial degrees of symbolic powers of points in projective space, computed
//! with exact interpolation linear algebra, together with Waldschmidt-constant
//! bounds, conjecture checks and an exact verifier for a binomial inequality
//! used in bounding them.

pub mod analysis;
pub mod configs;
pub mod exactla;
pub mod fields;
pub mod interpolation;
pub mod lemma;
pub mod poly;

/// Crate version, stamped into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
