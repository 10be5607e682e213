//! Secure detection and correction of corrupted secret shares.
//!
//! Shares of a Shamir polynomial over Z_p form a Reed-Solomon codeword, so a
//! corrupted share is a symbol error. This crate provides:
//!
//! - [`algebra`]: prime-field elements, polynomials, matrices and determinants
//! - [`coding`]: Reed-Solomon encoding and a Berlekamp-Welch decoder
//! - [`sharing`]: Shamir sharing, additive splitting, Lagrange constants
//! - [`protocol`]: distributed error localization and share recovery
//! - [`simnet`]: the round-synchronous network and adversary used to run them
//! - [`scenario`]: scenario files and the report printed by the `mpcshield` CLI

pub mod algebra;
pub mod coding;
pub mod protocol;
pub mod scenario;
pub mod sharing;
pub mod simnet;
