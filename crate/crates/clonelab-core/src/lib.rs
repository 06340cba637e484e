//! Exact small-dimension numerics for quantum cloning games and
//! monogamy-of-entanglement games.
//!
//! The crate is `no_std` with `alloc`. Every routine is a pure function over
//! immutable inputs, so callers may fan work out across threads freely.
//!
//! Modules:
//!
//! - [`matcore`]: dense complex matrices, norms, multipartite operations and
//!   the structured block-tensor constructions.
//! - [`typesys`]: binary types, subtypes, phase twirls and the `B_μ` matrices.
//! - [`games`]: game and strategy descriptions plus their exact values.
//! - [`designs`]: unitary ensembles, frame potentials and moment operators.
//! - [`reductions`]: the worst-to-average transformer and the black-hole game.
//!
//! Basis conventions: multipartite indices are big-endian, so in `A ⊗ B` the
//! row index is `i_A * dim_B + i_B`. An `n`-qubit register stores the bit
//! string `u_1 … u_n` as the integer whose most significant bit is `u_1`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod designs;
pub mod error;
pub mod games;
pub mod matcore;
pub mod reductions;
pub mod rng;
pub mod typesys;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, C64};

/// Default tolerance for inequality checks.
pub const TOL_INEQ: f64 = 1e-9;
/// Default tolerance for algebraic identities.
pub const TOL_IDENT: f64 = 1e-12;
