use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{dimension, domain, Result};

/// Ordered subsystem dimensions of a multipartite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimSpec {
    factors: Vec<usize>,
}

impl DimSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.iter().any(|&d| d == 0) {
            return Err(domain("subsystem dimensions must be positive"));
        }
        Ok(Self { factors })
    }

    /// `k` subsystems of dimension `d` each.
    pub fn uniform(d: usize, k: usize) -> Self {
        Self { factors: vec![d; k] }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the factor dimensions.
    pub fn total(&self) -> usize {
        self.factors.iter().product()
    }

    /// Digits of a flat index, most significant factor first.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factors).rev() {
            *slot = idx % d;
            idx /= d;
        }
        out
    }

    /// Flat index of a digit string.
    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.factors).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(dimension(format!(
                "{}x{} matrix against subsystem dimensions {:?}",
                m.rows(),
                m.cols(),
                self.factors
            )));
        }
        Ok(())
    }

    fn check_subsystems(&self, which: &[usize]) -> Result<()> {
        if let Some(&bad) = which.iter().find(|&&k| k >= self.factors.len()) {
            return Err(domain(format!("subsystem {bad} out of range")));
        }
        Ok(())
    }
}

/// Traces out every subsystem not listed in `keep`.
///
/// The kept factors retain their original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(m)?;
    dims.check_subsystems(keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let kdims = DimSpec { factors: kept.iter().map(|&k| dims.factors[k]).collect() };
    let tdims = DimSpec { factors: traced.iter().map(|&k| dims.factors[k]).collect() };
    let (dk, dt) = (kdims.total(), tdims.total());
    let mut out = vec![C64::zero(); dk * dk];
    let mut full = vec![0usize; dims.len()];
    let compose = |full: &mut [usize], kd: &[usize], td: &[usize]| {
        for (&pos, &v) in kept.iter().zip(kd) {
            full[pos] = v;
        }
        for (&pos, &v) in traced.iter().zip(td) {
            full[pos] = v;
        }
        dims.index(full)
    };
    for i in 0..dk {
        let di = kdims.digits(i);
        for j in 0..dk {
            let dj = kdims.digits(j);
            let mut acc = C64::zero();
            for s in 0..dt {
                let ds = tdims.digits(s);
                let r = compose(&mut full, &di, &ds);
                let c = compose(&mut full, &dj, &ds);
                acc += m.get(r, c);
            }
            out[i * dk + j] = acc;
        }
    }
    ComplexMatrix::new(dk, dk, out)
}

/// Transposes the listed subsystems only.
pub fn partial_transpose(m: &ComplexMatrix, dims: &DimSpec, which: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(m)?;
    dims.check_subsystems(which)?;
    let d = dims.total();
    Ok(ComplexMatrix::from_fn(d, d, |r, c| {
        let mut dr = dims.digits(r);
        let mut dc = dims.digits(c);
        for &k in which {
            core::mem::swap(&mut dr[k], &mut dc[k]);
        }
        m.get(dims.index(&dr), dims.index(&dc))
    }))
}

/// Reorders subsystems: factor `perm[k]` of the input becomes factor `k` of the output.
///
/// Returns `P M P†` for the corresponding permutation operator `P`, together with
/// the permuted dimension list.
pub fn permute_systems(m: &ComplexMatrix, dims: &DimSpec, perm: &[usize]) -> Result<(ComplexMatrix, DimSpec)> {
    dims.check_matrix(m)?;
    let map = index_permutation(dims, perm)?;
    let new_dims = DimSpec { factors: perm.iter().map(|&k| dims.factors[k]).collect() };
    let d = dims.total();
    // map[new] = old
    let out = ComplexMatrix::from_fn(d, d, |r, c| m.get(map[r], map[c]));
    Ok((out, new_dims))
}

/// Permutes the amplitudes of a state vector; see [`permute_systems`].
pub fn permute_vector(v: &[C64], dims: &DimSpec, perm: &[usize]) -> Result<Vec<C64>> {
    if v.len() != dims.total() {
        return Err(dimension("vector length does not match subsystem dimensions"));
    }
    let map = index_permutation(dims, perm)?;
    Ok(map.iter().map(|&old| v[old]).collect())
}

/// For each flat index of the permuted space, the flat index in the original space.
pub fn index_permutation(dims: &DimSpec, perm: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() {
        return Err(domain("permutation length differs from the number of subsystems"));
    }
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(domain("not a permutation of the subsystems"));
        }
        seen[p] = true;
    }
    let new_dims = DimSpec { factors: perm.iter().map(|&k| dims.factors[k]).collect() };
    let mut old = vec![0usize; dims.len()];
    Ok((0..dims.total())
        .map(|idx| {
            let nd = new_dims.digits(idx);
            for (k, &p) in perm.iter().enumerate() {
                old[p] = nd[k];
            }
            dims.index(&old)
        })
        .collect())
}

/// Conjugation by the operator exchanging subsystems `i` and `j`.
///
/// With unequal dimensions the output lives on the exchanged dimension list.
pub fn swap_systems(m: &ComplexMatrix, dims: &DimSpec, i: usize, j: usize) -> Result<ComplexMatrix> {
    dims.check_subsystems(&[i, j])?;
    let mut perm: Vec<usize> = (0..dims.len()).collect();
    perm.swap(i, j);
    Ok(permute_systems(m, dims, &perm)?.0)
}

/// Applies `op` to subsystem `k` of the state vector `v`.
///
/// `op` may change the dimension of that subsystem (rectangular operators).
pub fn apply_local(v: &[C64], dims: &DimSpec, k: usize, op: &ComplexMatrix) -> Result<Vec<C64>> {
    if v.len() != dims.total() {
        return Err(dimension("vector length does not match subsystem dimensions"));
    }
    dims.check_subsystems(&[k])?;
    let dk = dims.factors[k];
    if op.cols() != dk {
        return Err(dimension(format!("local operator has {} columns, subsystem has dimension {dk}", op.cols())));
    }
    let before: usize = dims.factors[..k].iter().product();
    let after: usize = dims.factors[k + 1..].iter().product();
    let dout = op.rows();
    let mut out = vec![C64::zero(); before * dout * after];
    for b in 0..before {
        for a in 0..after {
            for i in 0..dout {
                let row = op.row(i);
                let mut acc = C64::zero();
                for (j, &o) in row.iter().enumerate() {
                    if !o.is_zero() {
                        acc += o * v[(b * dk + j) * after + a];
                    }
                }
                out[(b * dout + i) * after + a] = acc;
            }
        }
    }
    Ok(out)
}

/// Reduced density matrix `Tr_{complement}(Σ_k |ψ_k⟩⟨ψ_k|)` for a list of
/// unnormalized pure components.
pub fn reduced_from_vectors(psis: &[Vec<C64>], dims: &DimSpec, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_subsystems(keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !kept.contains(k)).collect();
    let perm: Vec<usize> = kept.iter().chain(&traced).copied().collect();
    let dk: usize = kept.iter().map(|&k| dims.factors[k]).product();
    let dt: usize = traced.iter().map(|&k| dims.factors[k]).product();
    let mut out = vec![C64::zero(); dk * dk];
    for psi in psis {
        let p = permute_vector(psi, dims, &perm)?;
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = C64::zero();
                for s in 0..dt {
                    acc += p[i * dt + s] * p[j * dt + s].conj();
                }
                out[i * dk + j] += acc;
            }
        }
    }
    ComplexMatrix::new(dk, dk, out)
}

/// `vec(Λ) = Σ_{ij} Λ_{ij} |i⟩ ⊗ |j⟩`, the row-major flattening.
pub fn vectorize(lambda: &ComplexMatrix) -> Vec<C64> {
    lambda.data().to_vec()
}

/// `(A ⊗ Cᵀ) vec(B)`, which equals `vec(ABC)`.
pub fn abc_apply(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<Vec<C64>> {
    let d = b.rows();
    for m in [a, b, c] {
        if !m.is_square() || m.rows() != d {
            return Err(dimension("ABC rule needs square operands of equal dimension"));
        }
    }
    Ok(a.kron(&c.transpose()).apply(&vectorize(b)))
}
