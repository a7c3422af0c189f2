//! Exact and ultrametric-numeric computer algebra over `A = F_q[θ]`.
//!
//! The crate computes in and verifies identities between:
//!
//! - exact arithmetic in `F_q`, `A = F_q[θ]` and `K = F_q(θ)` ([`arith`]);
//! - truncated Puiseux series over `F_{q^m}((θ^(-1/e)))` with exact
//!   precision tracking, modelling `K_∞` and the computable subfields of
//!   `C_∞` ([`series`]);
//! - the q-shuffle algebras on words `x_k` and on mixed words `x_k`/`y_ℓ`,
//!   together with the word-expansion map and brute-force associativity
//!   sweeps ([`words`], [`shuffle`]);
//! - Thakur power sums, truncated multiple zeta values and their `K_∞`
//!   limits ([`sums`]);
//! - lattice sums on the Drinfeld symmetric space: multiple Eisenstein
//!   series, Goss power sums, lattice exponentials and Goss polynomials
//!   ([`lattice`]);
//! - the realization maps sending mixed words to Eisenstein/Goss data and
//!   the end-to-end homomorphism checks ([`realize`]).
//!
//! Every numeric claim is certified: series carry a `known_prec` bound and
//! comparisons beyond it are errors, never silent passes. The [`suite`]
//! module bundles the full verification battery used by the CLI and the
//! acceptance tests.

pub mod arith;
pub mod boxsum;
pub mod lattice;
pub mod realize;
pub mod report;
pub mod series;
pub mod shuffle;
pub mod suite;
pub mod sums;
pub mod words;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {0} exceeds the supported bound {1}")]
    FieldTooLarge(u64, u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero rational function")]
    DivisionByZero,
    #[error("cannot invert a series that vanishes to precision {prec_units}")]
    ZeroInversion { prec_units: i64 },
    #[error("comparison requested up to exponent {requested}, but only {known} is certified")]
    PrecisionExceeded { requested: i64, known: i64 },
    #[error("series fields are incompatible: {0}")]
    FieldMismatch(String),
    #[error("ramification {ram} is not divisible by {den}")]
    RamMismatch { ram: u32, den: u32 },
    #[error("degree bound too small: certified exponent {achievable_units} < requested {requested_units}")]
    InsufficientDegreeBound {
        achievable_units: i64,
        requested_units: i64,
    },
    #[error("evaluation point is within precision of a lattice point")]
    PoleProximity,
    #[error("enumeration size {size} exceeds the work cap {cap}")]
    WorkCapExceeded { size: u128, cap: u128 },
    #[error("coordinate valuations collide modulo 1: {0}")]
    IndependenceCertificate(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
