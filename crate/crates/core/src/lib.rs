//! Combinatorial dynamics of the exponential family `e^z + c`, with the
//! quadratic family `z² + c` as a classically understood oracle.
//!
//! The crate computes dynamic rays by iterated pullback, detects their
//! landing points, assembles the graph of co-landing periodic rays, cuts the
//! plane into basic regions, and then runs verification passes over that
//! decomposition: a census of interior and virtual fixed points per region,
//! trapping patterns for singular orbits, and the count of non-repelling
//! cycles against the number of singular values.
//!
//! All operations are pure functions of their inputs; nothing here keeps
//! global state, so everything can be driven concurrently by a caller.

pub mod address;
pub mod error;
pub mod maps;
pub mod periodic;
pub mod polyoracle;
pub mod rays;
pub mod regions;
pub mod report;
pub mod singular;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Toolkit version string, embedded into every JSON report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
