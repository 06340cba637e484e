//! Binary types, subtypes and the phase-twirl machinery.
//!
//! Query tuples live in `[N]^r` and are paired with an auxiliary index in
//! `[M]`; see [`IndexSpace`] for the flat layout. Projectors onto sets of query
//! tuples are diagonal and stored as membership masks ([`IndexPredicate`]).

mod bmatrix;
mod subtypes;
mod twirl;
mod types;

pub use bmatrix::{
    b_matrix_gram, b_matrix_norm_sq, build_b_matrix, distinct_count_bound, distinct_value_projector, free_var_distinct_gap, free_variable_symbols,
    strip_free_vars, subtype_reduction_sides, PlayerLayout,
};
pub use subtypes::{
    audit_type, enumerate_subtypes, greedy_subtype_partition, subtype_count_bound, subtype_projector, Subtype,
    SubtypeAudit, SubtypeSymbol,
};
pub use twirl::{phase_oracle, phase_twirl, FamilyMode, FunctionFamily};
pub(crate) use types::parity_mask;
pub use types::{bin_type, realizable_types, type_block_diagonal, type_projector, BinTypeVec, IndexPredicate, IndexSpace};
