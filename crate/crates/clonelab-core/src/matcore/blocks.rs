use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{c64, ComplexMatrix, C64};
use super::norms::op_norm;
use crate::error::{dimension, domain, Result};

/// Row and column partition of a block matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    row_partition: Vec<usize>,
    col_partition: Vec<usize>,
}

impl BlockSpec {
    pub fn new(row_partition: Vec<usize>, col_partition: Vec<usize>) -> Result<Self> {
        if row_partition.is_empty() || col_partition.is_empty() {
            return Err(domain("a block partition needs at least one part"));
        }
        if row_partition.iter().chain(&col_partition).any(|&p| p == 0) {
            return Err(domain("block sizes must be positive"));
        }
        Ok(Self { row_partition, col_partition })
    }

    /// Uniform partition into `r × c` blocks of size `h × w`.
    pub fn uniform(r: usize, c: usize, h: usize, w: usize) -> Result<Self> {
        Self::new(vec![h; r], vec![w; c])
    }

    pub fn row_partition(&self) -> &[usize] {
        &self.row_partition
    }

    pub fn col_partition(&self) -> &[usize] {
        &self.col_partition
    }

    pub fn block_rows(&self) -> usize {
        self.row_partition.len()
    }

    pub fn block_cols(&self) -> usize {
        self.col_partition.len()
    }

    pub fn total_rows(&self) -> usize {
        self.row_partition.iter().sum()
    }

    pub fn total_cols(&self) -> usize {
        self.col_partition.iter().sum()
    }

    fn offsets(parts: &[usize]) -> Vec<usize> {
        let mut acc = 0;
        parts
            .iter()
            .map(|&p| {
                let o = acc;
                acc += p;
                o
            })
            .collect()
    }

    pub fn row_offsets(&self) -> Vec<usize> {
        Self::offsets(&self.row_partition)
    }

    pub fn col_offsets(&self) -> Vec<usize> {
        Self::offsets(&self.col_partition)
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if m.rows() != self.total_rows() || m.cols() != self.total_cols() {
            return Err(dimension(format!(
                "{}x{} matrix does not fit a {}x{} block partition",
                m.rows(),
                m.cols(),
                self.total_rows(),
                self.total_cols()
            )));
        }
        Ok(())
    }
}

/// Grid of block scalars `γ_{i,k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid {
    rows: usize,
    cols: usize,
    gamma: Vec<C64>,
}

impl ScalarGrid {
    pub fn new(rows: usize, cols: usize, gamma: Vec<C64>) -> Result<Self> {
        if gamma.len() != rows * cols {
            return Err(dimension("scalar grid has the wrong number of entries"));
        }
        Ok(Self { rows, cols, gamma })
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self { rows, cols, gamma: vec![c64(1.0, 0.0); rows * cols] }
    }

    pub fn get(&self, i: usize, k: usize) -> C64 {
        self.gamma[i * self.cols + k]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn max_modulus(&self) -> f64 {
        self.gamma.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Splits `m` into its `(i, k)` blocks.
pub fn split_blocks(m: &ComplexMatrix, spec: &BlockSpec) -> Result<Vec<Vec<ComplexMatrix>>> {
    spec.check(m)?;
    let (ro, co) = (spec.row_offsets(), spec.col_offsets());
    Ok((0..spec.block_rows())
        .map(|i| {
            (0..spec.block_cols())
                .map(|k| m.block(ro[i], co[k], spec.row_partition[i], spec.col_partition[k]))
                .collect()
        })
        .collect())
}

/// Assembles a grid of blocks; all blocks in a block row share a height and all
/// blocks in a block column share a width.
pub fn join_blocks(blocks: &[Vec<ComplexMatrix>]) -> Result<ComplexMatrix> {
    let r = blocks.len();
    let c = blocks.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || blocks.iter().any(|row| row.len() != c) {
        return Err(domain("ragged or empty block grid"));
    }
    let heights: Vec<usize> = blocks.iter().map(|row| row[0].rows()).collect();
    let widths: Vec<usize> = blocks[0].iter().map(ComplexMatrix::cols).collect();
    for (i, row) in blocks.iter().enumerate() {
        for (k, b) in row.iter().enumerate() {
            if b.rows() != heights[i] || b.cols() != widths[k] {
                return Err(domain(format!("block ({i},{k}) has inconsistent shape")));
            }
        }
    }
    let (tr, tc): (usize, usize) = (heights.iter().sum(), widths.iter().sum());
    let mut data = vec![C64::zero(); tr * tc];
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (k, b) in row.iter().enumerate() {
            for a in 0..heights[i] {
                for e in 0..widths[k] {
                    data[(r0 + a) * tc + c0 + e] = b.get(a, e);
                }
            }
            c0 += widths[k];
        }
        r0 += heights[i];
    }
    ComplexMatrix::new(tr, tc, data)
}

fn check_grid(a_spec: &BlockSpec, b_spec: &BlockSpec, gamma: &ScalarGrid) -> Result<()> {
    let shape = (a_spec.block_rows(), a_spec.block_cols());
    if shape != (b_spec.block_rows(), b_spec.block_cols()) || shape != gamma.shape() {
        return Err(domain("A, B and the scalar grid must share the block grid shape"));
    }
    Ok(())
}

/// The matrix whose `(i, k)` block is `γ_{i,k} A_{i,k} ⊗ B_{i,k}`.
pub fn assemble_block_tensor(
    a: &ComplexMatrix,
    a_spec: &BlockSpec,
    b: &ComplexMatrix,
    b_spec: &BlockSpec,
    gamma: &ScalarGrid,
) -> Result<ComplexMatrix> {
    check_grid(a_spec, b_spec, gamma)?;
    let ab = split_blocks(a, a_spec)?;
    let bb = split_blocks(b, b_spec)?;
    let grid: Vec<Vec<ComplexMatrix>> = ab
        .iter()
        .zip(&bb)
        .enumerate()
        .map(|(i, (arow, brow))| {
            arow.iter().zip(brow).enumerate().map(|(k, (x, y))| x.kron(y).scale(gamma.get(i, k))).collect()
        })
        .collect();
    join_blocks(&grid)
}

/// The quantities entering the block-tensor norm bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTensorPreconditions {
    /// `‖A‖`.
    pub a_norm: f64,
    /// Operator norm of each block column of `B`.
    pub b_column_norms: Vec<f64>,
    /// `max |γ_{i,k}|`.
    pub max_gamma: f64,
}

impl BlockTensorPreconditions {
    /// Whether every precondition holds up to `tol`.
    pub fn hold(&self, tol: f64) -> bool {
        self.a_norm <= 1.0 + tol
            && self.max_gamma <= 1.0 + tol
            && self.b_column_norms.iter().all(|&n| n <= 1.0 + tol)
    }

    /// Index of the first block column of `B` whose norm exceeds `1 + tol`.
    pub fn first_bad_column(&self, tol: f64) -> Option<usize> {
        self.b_column_norms.iter().position(|&n| n > 1.0 + tol)
    }
}

/// Evaluates the preconditions of the block-tensor bound.
pub fn block_tensor_preconditions(
    a: &ComplexMatrix,
    a_spec: &BlockSpec,
    b: &ComplexMatrix,
    b_spec: &BlockSpec,
    gamma: &ScalarGrid,
) -> Result<BlockTensorPreconditions> {
    check_grid(a_spec, b_spec, gamma)?;
    a_spec.check(a)?;
    b_spec.check(b)?;
    let co = b_spec.col_offsets();
    let b_column_norms = (0..b_spec.block_cols())
        .map(|k| op_norm(&b.block(0, co[k], b.rows(), b_spec.col_partition[k])))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockTensorPreconditions { a_norm: op_norm(a)?, b_column_norms, max_gamma: gamma.max_modulus() })
}

/// Block column-wise tensor product.
///
/// `factors[t]` is split into block columns by `col_partitions[t]`; all factors
/// must have the same number `d` of block columns. Block column `j` of the result
/// is the Kronecker product of block column `j` of every factor.
pub fn block_colwise_tensor(factors: &[ComplexMatrix], col_partitions: &[Vec<usize>]) -> Result<ComplexMatrix> {
    let d = check_colwise(factors, col_partitions)?;
    let cols: Vec<Vec<ComplexMatrix>> = factors
        .iter()
        .zip(col_partitions)
        .map(|(f, parts)| {
            let mut c0 = 0;
            parts
                .iter()
                .map(|&w| {
                    let blk = f.block(0, c0, f.rows(), w);
                    c0 += w;
                    blk
                })
                .collect()
        })
        .collect();
    let row: Vec<ComplexMatrix> =
        (0..d).map(|j| ComplexMatrix::kron_all(cols.iter().map(|fc| &fc[j]))).collect();
    join_blocks(&[row])
}

fn check_colwise(factors: &[ComplexMatrix], col_partitions: &[Vec<usize>]) -> Result<usize> {
    if factors.is_empty() || factors.len() != col_partitions.len() {
        return Err(domain("need one column partition per factor"));
    }
    let d = col_partitions[0].len();
    if d == 0 || col_partitions.iter().any(|p| p.len() != d) {
        return Err(domain("all factors must share the number of block columns"));
    }
    for (f, p) in factors.iter().zip(col_partitions) {
        if p.iter().sum::<usize>() != f.cols() || p.contains(&0) {
            return Err(dimension("column partition does not match the factor width"));
        }
    }
    Ok(d)
}

/// The quantities entering the column-wise tensor bound.
#[derive(Debug, Clone, PartialEq)]
pub struct ColwisePreconditions {
    /// Largest operator norm over all blocks of all factors.
    pub max_block_norm: f64,
    /// Global operator norm of each factor.
    pub factor_norms: Vec<f64>,
}

impl ColwisePreconditions {
    pub fn hold(&self, tol: f64) -> bool {
        self.max_block_norm <= 1.0 + tol && self.factor_norms.iter().any(|&n| n <= 1.0 + tol)
    }
}

pub fn colwise_preconditions(factors: &[ComplexMatrix], col_partitions: &[Vec<usize>]) -> Result<ColwisePreconditions> {
    check_colwise(factors, col_partitions)?;
    let mut max_block_norm: f64 = 0.0;
    for (f, parts) in factors.iter().zip(col_partitions) {
        let mut c0 = 0;
        for &w in parts {
            max_block_norm = max_block_norm.max(op_norm(&f.block(0, c0, f.rows(), w))?);
            c0 += w;
        }
    }
    let factor_norms = factors.iter().map(op_norm).collect::<Result<Vec<_>>>()?;
    Ok(ColwisePreconditions { max_block_norm, factor_norms })
}

/// Block matrix whose `(i, k)` block is `γ_{i,k} ⊗_t A_{t,i,k}`, all factors
/// sharing the block partition `spec`.
pub fn multi_block_tensor(factors: &[ComplexMatrix], spec: &BlockSpec, gamma: &ScalarGrid) -> Result<ComplexMatrix> {
    if factors.is_empty() {
        return Err(domain("need at least one factor"));
    }
    if gamma.shape() != (spec.block_rows(), spec.block_cols()) {
        return Err(domain("scalar grid shape differs from the block grid"));
    }
    let split = factors.iter().map(|f| split_blocks(f, spec)).collect::<Result<Vec<_>>>()?;
    let grid: Vec<Vec<ComplexMatrix>> = (0..spec.block_rows())
        .map(|i| {
            (0..spec.block_cols())
                .map(|k| ComplexMatrix::kron_all(split.iter().map(|s| &s[i][k])).scale(gamma.get(i, k)))
                .collect()
        })
        .collect();
    join_blocks(&grid)
}
