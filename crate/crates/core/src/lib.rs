//! Twisted and doubly-twisted conjugacy in finitely generated free groups,
//! together with an authentication scheme over truncated polynomials and a
//! Gröbner-basis key-recovery attack against it.
//!
//! Modules, bottom-up:
//!
//! - [`words`]: reduced words, homomorphisms, cancellation segments.
//! - [`stallings`]: subgroup graphs by folding, membership.
//! - [`remnant`]: remnants and the conditions built from them.
//! - [`dtc`]: doubly-twisted conjugacy search and decision.
//! - [`fbc`]: free-by-cyclic groups and their conjugacy problem.
//! - [`truncpoly`]: `GF(2)[x]/⟨x^N⟩` and 2×2 matrices over it.
//! - [`protocol`]: the challenge-response scheme and an impersonator.
//! - [`attack`]: the truncated degree-2 Gröbner attack.
//! - [`fixtures`]: shipped reference data.

pub mod error;
pub mod words;
pub mod stallings;
pub mod remnant;
pub mod dtc;
pub mod fbc;
pub mod truncpoly;
pub mod protocol;
pub mod attack;
pub mod fixtures;

pub use error::{Error, Result};
pub use words::{FreeHom, Word};
