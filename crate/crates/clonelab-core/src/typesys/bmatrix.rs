use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::subtypes::{enumerate_subtypes, subtype_count_bound, subtype_projector, Subtype, SubtypeSymbol};
use super::types::{realizable_types, type_projector, IndexPredicate, IndexSpace};
use crate::error::{domain, Result};
use crate::matcore::{hermitian_eigenvalues, op_norm_dense, ComplexMatrix, C64};

/// Variable symbols of `μ` that occur only in the phase positions
/// `t+1 .. t+ℓ` (zero-based), for a subtype of length `t + 1 + ℓ`.
pub fn free_variable_symbols(mu: &Subtype, t: usize, ell: usize) -> Result<Vec<usize>> {
    if mu.len() != t + 1 + ell {
        return Err(domain(format!("subtype of length {} is not of length t+1+ℓ = {}", mu.len(), t + 1 + ell)));
    }
    let mut in_query = vec![false; mu.num_vars()];
    for s in &mu.symbols()[..=t] {
        if let SubtypeSymbol::Var(j) = *s {
            in_query[j - 1] = true;
        }
    }
    Ok((1..=mu.num_vars()).filter(|&j| !in_query[j - 1]).collect())
}

/// Removes every position holding a free variable symbol and renumbers the
/// remaining variables by first appearance.
///
/// Returns the stripped subtype, the number `b` of free symbols and the number
/// `p` of removed positions, so the stripped subtype has length `t + 1 + ℓ - p`.
pub fn strip_free_vars(mu: &Subtype, t: usize, ell: usize) -> Result<(Subtype, usize, usize)> {
    let free = free_variable_symbols(mu, t, ell)?;
    let mut renumber = vec![0usize; mu.num_vars() + 1];
    let mut next = 0;
    let mut symbols = Vec::new();
    let mut removed = 0;
    for &s in mu.symbols() {
        match s {
            SubtypeSymbol::Var(j) if free.contains(&j) => removed += 1,
            SubtypeSymbol::Var(j) => {
                if renumber[j] == 0 {
                    next += 1;
                    renumber[j] = next;
                }
                symbols.push(SubtypeSymbol::Var(renumber[j]));
            }
            fixed => symbols.push(fixed),
        }
    }
    Ok((Subtype::from_symbols_unchecked(symbols), free.len(), removed))
}

/// Dimensions shared by the `B_μ` construction and the projector `Ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayerLayout {
    /// Qubits per challenge register.
    pub n: usize,
    /// Number of copies handed to the cloner; there are `t + 1` players.
    pub t: usize,
    /// Ancilla qubits per player (the control qubit comes on top).
    pub a: usize,
}

impl PlayerLayout {
    /// Alphabet size `N = 2^n`.
    pub fn alphabet(&self) -> usize {
        1 << self.n
    }

    /// Per-player auxiliary dimension `d' = 2^{a+1}`.
    pub fn aux_per_player(&self) -> usize {
        1 << (self.a + 1)
    }

    /// Dimension of one player register, `2^{n+a+1}`.
    pub fn player_dim(&self) -> usize {
        self.alphabet() * self.aux_per_player()
    }

    /// Packed auxiliary dimension `M = d'^{t+1}`.
    pub fn packed_aux(&self) -> usize {
        self.aux_per_player().pow(self.t as u32 + 1)
    }

    /// Number of query positions `r = 2t + 1`.
    pub fn r(&self) -> usize {
        2 * self.t + 1
    }

    /// Index space `[N]^r × [M]` in type ordering.
    pub fn space(&self) -> IndexSpace {
        IndexSpace { alphabet: self.alphabet(), r: self.r(), aux: self.packed_aux() }
    }

    pub(crate) fn check_unitaries(&self, qs: &[ComplexMatrix]) -> Result<()> {
        if qs.len() != self.t + 1 {
            return Err(domain(format!("expected {} post-query unitaries, got {}", self.t + 1, qs.len())));
        }
        for q in qs {
            if !q.is_square() || q.rows() != self.player_dim() {
                return Err(domain("post-query unitary has the wrong dimension"));
            }
            q.ensure_unitary(1e-9)?;
        }
        Ok(())
    }
}

fn digits(mut v: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = v % base;
        v /= base;
    }
    out
}

/// The matrix `B_μ` for a subtype of length `t + 1 + ℓ`.
///
/// Rows are indexed by `(y, w)` with `y ∈ [N]^{#vars}` the variable values and
/// `w ∈ [d']^{t+1}` the per-player auxiliary values; columns by `(x, z)` with
/// `x ∈ [N]` and `z ∈ [d']^{t+1}`. Both are read big-endian. With
/// `v = reconstruct(μ, y)`, the entry is
/// `(-1)^{⟨v_{t+1} ⊕ … ⊕ v_{t+ℓ}, x⟩} Π_i conj(Q_i[(x, z_i), (v_i, w_i)])`.
pub fn build_b_matrix(mu: &Subtype, qs: &[ComplexMatrix], layout: PlayerLayout, ell: usize) -> Result<ComplexMatrix> {
    let t = layout.t;
    if mu.len() != t + 1 + ell {
        return Err(domain("subtype length must be t + 1 + ℓ"));
    }
    layout.check_unitaries(qs)?;
    let (nsym, dp) = (layout.alphabet(), layout.aux_per_player());
    let nv = mu.num_vars();
    let packed = layout.packed_aux();
    let rows = nsym.pow(nv as u32) * packed;
    let cols = nsym * packed;
    let ws: Vec<Vec<usize>> = (0..packed).map(|w| digits(w, dp, t + 1)).collect();
    let mut data = vec![C64::new(0.0, 0.0); rows * cols];
    for yi in 0..nsym.pow(nv as u32) {
        let v = mu.reconstruct(&digits(yi, nsym, nv))?;
        let phase_word = v[t + 1..].iter().fold(0usize, |acc, &u| acc ^ u);
        for (wi, w) in ws.iter().enumerate() {
            let row = yi * packed + wi;
            for x in 0..nsym {
                let sign = if (phase_word & x).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                for (zi, z) in ws.iter().enumerate() {
                    let mut acc = C64::new(sign, 0.0);
                    for i in 0..=t {
                        let q = &qs[i];
                        acc *= q.get(x * dp + z[i], v[i] * dp + w[i]).conj();
                        if acc.norm_sqr() == 0.0 {
                            break;
                        }
                    }
                    data[row * cols + x * packed + zi] = acc;
                }
            }
        }
    }
    ComplexMatrix::new(rows, cols, data)
}

/// `B_μ† B_μ`, assembled without forming `B_μ`.
///
/// The sum over the auxiliary row index factorizes over players, so the Gram
/// matrix is `Σ_y s_y(x) s_y(x') Π_i G_i^{v_i}[(x, z_i), (x', z'_i)]` with
/// `G_i^v[(x, z), (x', z')] = Σ_w Q_i[(x, z), (v, w)] conj(Q_i[(x', z'), (v, w)])`.
pub fn b_matrix_gram(mu: &Subtype, qs: &[ComplexMatrix], layout: PlayerLayout, ell: usize) -> Result<ComplexMatrix> {
    let t = layout.t;
    if mu.len() != t + 1 + ell {
        return Err(domain("subtype length must be t + 1 + ℓ"));
    }
    layout.check_unitaries(qs)?;
    let (nsym, dp) = (layout.alphabet(), layout.aux_per_player());
    let pd = layout.player_dim();
    // g[i][v] is the (x, z) × (x', z') block for player i and query value v.
    let g: Vec<Vec<Vec<C64>>> = qs
        .iter()
        .map(|q| {
            (0..nsym)
                .map(|v| {
                    let mut out = vec![C64::new(0.0, 0.0); pd * pd];
                    for a in 0..pd {
                        for b in 0..pd {
                            out[a * pd + b] = (0..dp).map(|w| q.get(a, v * dp + w) * q.get(b, v * dp + w).conj()).sum();
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    let packed = layout.packed_aux();
    let cols = nsym * packed;
    let zs: Vec<Vec<usize>> = (0..packed).map(|z| digits(z, dp, t + 1)).collect();
    let nv = mu.num_vars();
    let mut data = vec![C64::new(0.0, 0.0); cols * cols];
    for yi in 0..nsym.pow(nv as u32) {
        let v = mu.reconstruct(&digits(yi, nsym, nv))?;
        let word = v[t + 1..].iter().fold(0usize, |acc, &u| acc ^ u);
        for x in 0..nsym {
            for x2 in 0..nsym {
                let sign = if ((word & x) ^ (word & x2)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                for (zi, z) in zs.iter().enumerate() {
                    for (zj, z2) in zs.iter().enumerate() {
                        let mut acc = C64::new(sign, 0.0);
                        for i in 0..=t {
                            acc *= g[i][v[i]][(x * dp + z[i]) * pd + x2 * dp + z2[i]];
                        }
                        data[(x * packed + zi) * cols + x2 * packed + zj] += acc;
                    }
                }
            }
        }
    }
    ComplexMatrix::new(cols, cols, data)
}

/// `‖B_μ‖²`, through the largest eigenvalue of [`b_matrix_gram`].
pub fn b_matrix_norm_sq(mu: &Subtype, qs: &[ComplexMatrix], layout: PlayerLayout, ell: usize) -> Result<f64> {
    let gram = b_matrix_gram(mu, qs, layout, ell)?;
    Ok(hermitian_eigenvalues(&gram)?.last().copied().unwrap_or(0.0).max(0.0))
}

/// `Γ_l`: tuples whose last `t` query positions hold exactly `l` distinct values.
pub fn distinct_value_projector(l: usize, t: usize, space: IndexSpace) -> Result<IndexPredicate> {
    if l == 0 || l > t || t > space.r {
        return Err(domain(format!("need 1 ≤ l ≤ t ≤ r (l = {l}, t = {t})")));
    }
    let start = space.r - t;
    Ok(IndexPredicate::from_fn(space, |x| {
        let mut tail: Vec<usize> = x[start..].to_vec();
        tail.sort_unstable();
        tail.dedup();
        tail.len() == l
    }))
}

/// `t^t N^l`, the bound on the number of `t`-tuples with `l` distinct values.
pub fn distinct_count_bound(t: usize, l: usize, alphabet: usize) -> f64 {
    num_traits::Float::powi(t as f64, t as i32) * num_traits::Float::powi(alphabet as f64, l as i32)
}

/// Both sides of the subtype reduction
/// `Tr[Π_λ A Π_λ ρ] ≤ (2r)^r Σ_μ ‖Π_μ A Π_μ‖ Tr[Π_μ ρ]` for one type.
pub fn subtype_reduction_sides(
    lambda: &super::types::BinTypeVec,
    a: &ComplexMatrix,
    rho: &ComplexMatrix,
    space: IndexSpace,
) -> Result<(f64, f64)> {
    let pi = type_projector(lambda, space)?;
    let lhs = pi.sandwich(a)?.trace_product(rho).re;
    let mut rhs = 0.0;
    for mu in enumerate_subtypes(lambda, space.r) {
        let s = subtype_projector(&mu, space)?;
        if s.query_count() == 0 {
            continue;
        }
        let norm = op_norm_dense(&s.restrict(a)?)?;
        rhs += norm * s.trace_with(rho)?;
    }
    Ok((lhs, subtype_count_bound(space.r) * rhs))
}

/// Largest violation of the entrywise diagonal inequality
/// `Σ_μ 2^{n b(μ)} 1[x ∈ S_μ] ≤ (2r)^r Σ_l 2^{n(t-l)} 1[x ∈ Γ_l]`
/// over all query tuples, where `μ` ranges over the subtypes of every type with
/// `r = 2t + 1` positions and `b(μ)` counts free variable symbols (`ℓ = t`).
///
/// A value `≤ 0` means the inequality holds everywhere.
pub fn free_var_distinct_gap(n: usize, t: usize) -> Result<f64> {
    let layout = PlayerLayout { n, t, a: 0 };
    let space = IndexSpace { alphabet: layout.alphabet(), r: layout.r(), aux: 1 };
    let nq = space.queries();
    let mut lhs = vec![0.0f64; nq];
    for lambda in realizable_types(space.alphabet, space.r) {
        for mu in enumerate_subtypes(&lambda, space.r) {
            let b = free_variable_symbols(&mu, t, t)?.len();
            let w = num_traits::Float::powi(2.0, (n * b) as i32);
            let s = subtype_projector(&mu, space)?;
            for q in s.member_queries() {
                lhs[q] += w;
            }
        }
    }
    let c = subtype_count_bound(space.r);
    let mut rhs = vec![0.0f64; nq];
    for l in 1..=t {
        let w = c * num_traits::Float::powi(2.0, (n * (t - l)) as i32);
        for q in distinct_value_projector(l, t, space)?.member_queries() {
            rhs[q] += w;
        }
    }
    Ok(lhs.iter().zip(&rhs).map(|(a, b)| a - b).fold(f64::NEG_INFINITY, f64::max))
}
