//! Dense complex linear algebra and the structured block-tensor constructions.
//!
//! [`ComplexMatrix`] is the numeric carrier for every other module. Norms come
//! from a dense SVD up to dimension 64 and from power iteration above that; both
//! paths are public so they can be cross-checked.

mod blocks;
mod matrix;
pub(crate) mod norms;
pub mod random;
mod systems;

pub use blocks::{
    assemble_block_tensor, block_colwise_tensor, block_tensor_preconditions, colwise_preconditions,
    join_blocks, multi_block_tensor, split_blocks, BlockSpec, BlockTensorPreconditions, ColwisePreconditions,
    ScalarGrid,
};
pub use matrix::{basis, c64, sum_matrices, vdot, vkron, vnorm, ComplexMatrix, C64};
pub use norms::{
    frobenius_norm, hermitian_eigenvalues, min_eigenvalue, op_norm, op_norm_dense, op_norm_power, rank,
    singular_values, PowerIteration, DENSE_NORM_LIMIT, POWER_MAX_ITER, POWER_TOL,
};
pub use systems::{
    abc_apply, apply_local, index_permutation, partial_trace, partial_transpose, permute_systems,
    permute_vector, reduced_from_vectors, swap_systems, vectorize, DimSpec,
};

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}
