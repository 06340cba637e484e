use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{dimension, domain, Error, Result};
use crate::matcore::{ComplexMatrix, C64};

/// Odd-multiplicity support of a query tuple over the alphabet `[N]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinTypeVec {
    alphabet: usize,
    support: Vec<usize>,
}

impl BinTypeVec {
    /// Type with the given support; indices are sorted and deduplicated.
    pub fn new(alphabet: usize, mut support: Vec<usize>) -> Result<Self> {
        support.sort_unstable();
        support.dedup();
        if support.iter().any(|&i| i >= alphabet) {
            return Err(domain(format!("type support exceeds alphabet size {alphabet}")));
        }
        Ok(Self { alphabet, support })
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn contains(&self, i: usize) -> bool {
        self.support.binary_search(&i).is_ok()
    }

    /// Whether some tuple of length `r` has this type.
    pub fn is_realizable(&self, r: usize) -> bool {
        let s = self.support.len();
        s <= r && (r - s) % 2 == 0 && (self.alphabet > 0 || r == 0)
    }
}

/// Binary type of a query tuple. The auxiliary index never affects the type.
pub fn bin_type(x: &[usize], alphabet: usize, _aux: usize) -> Result<BinTypeVec> {
    let mut parity = vec![false; alphabet];
    for &xi in x {
        if xi >= alphabet {
            return Err(domain(format!("entry {xi} outside the alphabet [{alphabet}]")));
        }
        parity[xi] ^= true;
    }
    Ok(BinTypeVec { alphabet, support: (0..alphabet).filter(|&i| parity[i]).collect() })
}

/// Every type realizable by tuples of length `r` over `[alphabet]`, ordered by
/// support size and then lexicographically.
pub fn realizable_types(alphabet: usize, r: usize) -> Vec<BinTypeVec> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << alphabet) {
        let support: Vec<usize> = (0..alphabet).filter(|&i| mask >> i & 1 == 1).collect();
        let t = BinTypeVec { alphabet, support };
        if t.is_realizable(r) {
            out.push(t);
        }
    }
    out.sort_by(|a, b| a.support.len().cmp(&b.support.len()).then_with(|| a.support.cmp(&b.support)));
    out
}

/// The index set `[N]^r × [M]`; a flat index is `query * M + aux` with the query
/// tuple read big-endian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexSpace {
    pub alphabet: usize,
    pub r: usize,
    pub aux: usize,
}

impl IndexSpace {
    pub fn new(alphabet: usize, r: usize, aux: usize) -> Result<Self> {
        if alphabet == 0 || aux == 0 {
            return Err(domain("alphabet and auxiliary dimension must be positive"));
        }
        Ok(Self { alphabet, r, aux })
    }

    /// Number of query tuples `N^r`.
    pub fn queries(&self) -> usize {
        self.alphabet.pow(self.r as u32)
    }

    /// Total dimension `N^r · M`.
    pub fn dim(&self) -> usize {
        self.queries() * self.aux
    }

    pub fn query_digits(&self, mut q: usize) -> Vec<usize> {
        let mut out = vec![0; self.r];
        for slot in out.iter_mut().rev() {
            *slot = q % self.alphabet;
            q /= self.alphabet;
        }
        out
    }

    pub fn query_index(&self, x: &[usize]) -> usize {
        x.iter().fold(0, |acc, &v| acc * self.alphabet + v)
    }
}

/// Diagonal projector on `[N]^r × [M]` described by a membership test on query
/// tuples; the auxiliary index is unconstrained.
///
/// Only the `N^r` membership bits are stored; the projector itself is never
/// materialized unless [`IndexPredicate::to_matrix`] is called.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexPredicate {
    space: IndexSpace,
    mask: Vec<bool>,
}

impl IndexPredicate {
    /// Predicate from a membership test on query tuples.
    pub fn from_fn(space: IndexSpace, mut f: impl FnMut(&[usize]) -> bool) -> Self {
        let mask = (0..space.queries()).map(|q| f(&space.query_digits(q))).collect();
        Self { space, mask }
    }

    pub fn empty(space: IndexSpace) -> Self {
        Self { space, mask: vec![false; space.queries()] }
    }

    pub fn space(&self) -> IndexSpace {
        self.space
    }

    /// Membership of a full flat index.
    pub fn contains(&self, idx: usize) -> bool {
        self.mask[idx / self.space.aux]
    }

    pub fn contains_query(&self, x: &[usize]) -> bool {
        self.mask[self.space.query_index(x)]
    }

    /// Number of member query tuples.
    pub fn query_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    /// Rank of the projector, `query_count · M`.
    pub fn rank(&self) -> usize {
        self.query_count() * self.space.aux
    }

    pub fn member_queries(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&q| self.mask[q]).collect()
    }

    /// Flat indices of the support, ascending.
    pub fn support(&self) -> Vec<usize> {
        let m = self.space.aux;
        self.member_queries().into_iter().flat_map(|q| (q * m)..(q * m + m)).collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(domain("predicates live on different index spaces"));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { space: self.space, mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a || *b).collect() })
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { space: self.space, mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect() })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self { space: self.space, mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && !*b).collect() })
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.space == other.space && self.mask.iter().zip(&other.mask).all(|(a, b)| !*a || *b)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.space == other.space && self.mask.iter().zip(&other.mask).all(|(a, b)| !(*a && *b))
    }

    fn check_matrix(&self, a: &ComplexMatrix) -> Result<()> {
        if !a.is_square() || a.rows() != self.space.dim() {
            return Err(dimension(format!("{}x{} operator on a space of dimension {}", a.rows(), a.cols(), self.space.dim())));
        }
        Ok(())
    }

    /// `Π A Π` by masking rows and columns.
    pub fn sandwich(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_matrix(a)?;
        Ok(ComplexMatrix::from_fn(a.rows(), a.cols(), |i, j| {
            if self.contains(i) && self.contains(j) { a.get(i, j) } else { C64::zero() }
        }))
    }

    /// `Π A Π` compressed to the support; it has the same nonzero spectrum.
    pub fn restrict(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_matrix(a)?;
        let s = self.support();
        Ok(a.submatrix(&s, &s))
    }

    /// `Tr[Π ρ]` (real part).
    pub fn trace_with(&self, rho: &ComplexMatrix) -> Result<f64> {
        self.check_matrix(rho)?;
        Ok(self.support().into_iter().map(|i| rho.get(i, i).re).sum())
    }

    /// `Tr[Π Σ_k |ψ_k⟩⟨ψ_k|]` for unnormalized components.
    pub fn trace_with_vectors(&self, psis: &[Vec<C64>]) -> Result<f64> {
        let d = self.space.dim();
        if psis.iter().any(|p| p.len() != d) {
            return Err(dimension("state component has the wrong length"));
        }
        let s = self.support();
        Ok(psis.iter().map(|p| s.iter().map(|&i| p[i].norm_sqr()).sum::<f64>()).sum())
    }

    /// Zeroes the amplitudes outside the support.
    pub fn mask_vector(&self, v: &[C64]) -> Vec<C64> {
        v.iter().enumerate().map(|(i, &z)| if self.contains(i) { z } else { C64::zero() }).collect()
    }

    /// Dense projector, refused above dimension `limit`.
    pub fn to_matrix(&self, limit: usize) -> Result<ComplexMatrix> {
        let d = self.space.dim();
        if d > limit {
            return Err(Error::TooLarge { dim: d, limit });
        }
        let entries: Vec<C64> = (0..d).map(|i| if self.contains(i) { C64::new(1.0, 0.0) } else { C64::zero() }).collect();
        Ok(ComplexMatrix::diag(&entries))
    }
}

/// `Π_λ`: query tuples of binary type `λ`.
pub fn type_projector(lambda: &BinTypeVec, space: IndexSpace) -> Result<IndexPredicate> {
    if lambda.alphabet() != space.alphabet {
        return Err(domain("type alphabet differs from the index space"));
    }
    let n = space.alphabet;
    Ok(IndexPredicate::from_fn(space, |x| {
        let mut parity = vec![false; n];
        for &xi in x {
            parity[xi] ^= true;
        }
        (0..n).filter(|&i| parity[i]).eq(lambda.support().iter().copied())
    }))
}

/// `Σ_λ Π_λ O Π_λ`: keeps exactly the entries whose row and column queries share a type.
pub fn type_block_diagonal(o: &ComplexMatrix, space: IndexSpace) -> Result<ComplexMatrix> {
    if !o.is_square() || o.rows() != space.dim() {
        return Err(dimension("operator does not match the index space"));
    }
    let types: Vec<u64> = (0..space.queries()).map(|q| parity_mask(&space.query_digits(q))).collect();
    let m = space.aux;
    Ok(ComplexMatrix::from_fn(o.rows(), o.cols(), |i, j| {
        if types[i / m] == types[j / m] { o.get(i, j) } else { C64::zero() }
    }))
}

/// Parity bitmask of a tuple (bit `i` set when `i` occurs an odd number of times).
pub(crate) fn parity_mask(x: &[usize]) -> u64 {
    x.iter().fold(0u64, |acc, &v| acc ^ (1u64 << v))
}
