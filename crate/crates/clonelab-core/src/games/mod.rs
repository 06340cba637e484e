//! Games, strategies and their exact values.
//!
//! Monogamy games ([`MOEGame`]) and cloning games ([`CloningGame`]) are both
//! evaluated by exact averages over explicit question lists. Channels are
//! Kraus lists; Choi states are derived from them with the player registers
//! first and the reference copies after.
//!
//! The binary phase construction uses challenge unitaries `U_f H^{⊗n}`. A
//! [`RestrictedStrategy`] makes one oracle call per player, and
//! [`verify_tcopy_chain`] evaluates every quantity in the `t`-copy bound for it.

mod chain;
mod channel;
mod cloning;
mod counterexample;
mod moe;
mod phase;
mod restricted;
mod salted;

pub use chain::{chain_constant, verify_tcopy_chain, TcopyChainReport};
pub use channel::{choi_state, Channel, MAX_DENSE_CHOI};
pub use cloning::{
    cloning_value, computational_measurement, monogamy_form_value, single_copy_as_moe, CloningGame,
    CloningStrategy,
};
pub use counterexample::{counterexample_strategy, paired_reference_state, CounterexampleReport};
pub use moe::{moe_value, pairwise_overlap, parallel_repeat, tfkw_bound, MOEGame, MOEStrategy, MAX_REPEATED_DIM};
pub use phase::{binary_phase_game, binary_phase_unitary, hadamard_transform};
pub use restricted::{
    restricted_value, type_decomposed_value, typed_choi_vectors, xi_operator, xi_vectors, RestrictedStrategy,
    RestrictedValue, MAX_DENSE_XI,
};
pub use salted::{
    max_salted_overlap, salted_overlap_experiment, salted_overlap_trial, salted_phase_game, SaltedOverlapConfig,
    SaltedOverlapStats, MAX_SALTED_BITS,
};
