//! Strategy transformations built on top of [`crate::games`].
//!
//! [`worst_to_average_transform`] turns an average-case one-query strategy
//! into one for an arbitrary challenge ensemble by twirling with an exact
//! design. The black-hole game evaluates two single-query observers on the
//! output of a scrambler followed by an arbitrary channel, and
//! [`bh_postselection_check`] recomputes its value through each rewriting used
//! to bound it.
//!
//! Observers are capped at [`MAX_ANCILLAS`] ancilla qubits so that every
//! evaluated term stays dense and small.

mod blackhole;
mod wc2ac;

pub use blackhole::{
    average_reports, bh_member_chain, bh_member_value, bh_postselection_check, bh_value, bh_value_with_error,
    BhChainReport, BlackHoleGame, OracleCall, SingleQueryObserver, MAX_ANCILLAS, MAX_BH_DIM,
};
pub use wc2ac::{
    average_case_value, required_design_order, transform_unchecked, worst_to_average_transform, WorstCaseStrategy,
};
