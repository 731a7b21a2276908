//! Row-LRPC rank-metric codes over `F_{q^m}`.
//!
//! This crate is the allocation-only algebraic core: arithmetic in a prime
//! field `F_q` and its extension `F_{q^m}`, `F_q`-subspaces of `F_{q^m}`,
//! vectors and matrices over `F_{q^m}` with rank-metric weights, code
//! construction, exact-rank error sampling, and the support-recovery decoder
//! built on Cramer's-rule candidate sets and set intersection.
//!
//! It is `#![no_std]`; randomness comes in through [`rand::Rng`] so callers
//! choose the generator and its seeding.
//!
//! ```
//! use rand::SeedableRng;
//! use rowlrpc_core::{channel, codes, decoder, FieldContext};
//!
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
//! let ctx = FieldContext::with_default_modulus(2, 20).unwrap();
//! let code = codes::sample_row_lrpc(&ctx, 20, 8, 2, &mut rng).unwrap();
//! let err = channel::sample_error(&ctx, 20, 2, &mut rng).unwrap();
//! let s = code.syndrome(&err.e).unwrap();
//! let out = decoder::decode(&code, &s, 2, &decoder::DecoderConfig::default()).unwrap();
//! if out.status == decoder::DecodeStatus::Success {
//!     assert_eq!(out.error.unwrap().e, err.e);
//! }
//! ```
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channel;
pub mod codes;
pub mod decoder;
mod error;
pub mod field;
pub mod fq;
pub mod linalg;
pub mod subspace;

pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement};
pub use linalg::{MatrixFqm, Solution};
pub use subspace::{EnumerationBudget, Subspace};
