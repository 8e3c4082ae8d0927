//! Exact service rate regions of linear coded storage systems.
//!
//! A `k × n` generator matrix `G` over GF(q) stores `k` objects on `n`
//! servers; server `j` holds the combination given by column `j`. A set of
//! servers can serve object `i` when their columns span `e_i`. The service
//! rate region is the set of request-rate vectors `(λ_1, …, λ_k)` that can be
//! split over such recovery sets without any server exceeding unit capacity.
//!
//! The crate computes that region exactly in rational arithmetic, together
//! with three outer bounds driven by recovery-set sizes and dual-code
//! weights, and decides containment and sharpness between them.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gfield;
pub mod gfmatrix;
pub mod lincode;
pub mod ratpoly;
pub mod recovery;
pub mod region;
pub mod serverset;

pub use error::{Error, Result};
