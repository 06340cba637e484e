use alloc::vec::Vec;

use num_traits::Float;

use super::restricted::{restricted_value, typed_choi_vectors, RestrictedStrategy};
use crate::error::Result;
use crate::matcore::{reduced_from_vectors, ComplexMatrix, DimSpec};
use crate::typesys::{
    b_matrix_norm_sq, distinct_count_bound, distinct_value_projector, enumerate_subtypes, free_var_distinct_gap,
    free_variable_symbols, realizable_types, subtype_count_bound, subtype_projector, FunctionFamily,
};

/// Every quantity of the `t`-copy bound, evaluated for one strategy.
///
/// The chain is `direct = typed ≤ subtype_norm_sum ≤ free_symbol_sum ≤
/// distinct_sum ≤ final_bound`, each step one inequality of the argument.
#[derive(Debug, Clone, PartialEq)]
pub struct TcopyChainReport {
    pub n: usize,
    pub t: usize,
    pub a: usize,
    pub direct: f64,
    pub typed: f64,
    pub family_exact: bool,
    /// `2^{n(t-1)} (2r)^r Σ_μ ‖Π_μ Ξ Π_μ‖ Tr[Π_μ ρ']`.
    pub subtype_norm_sum: f64,
    /// `2^{n(t-1)} (2r)^r Σ_μ 2^{-nt+nb(μ)} Tr[Π_μ ρ']`.
    pub free_symbol_sum: f64,
    /// `2^{-n} (2r)^{2r} Σ_l 2^{n(t-l)} Tr[Γ_l ρ']`.
    pub distinct_sum: f64,
    /// `(2r)^{2r} t^{t+1} 2^{-n}`.
    pub final_bound: f64,
    /// Largest `‖Π_μ Ξ Π_μ‖ - 2^{-nt+nb}` over all subtypes.
    pub subtype_norm_excess: f64,
    /// Largest `Tr[Γ_l ρ'] - t^t 2^{-nt+nl}` over `l`.
    pub gamma_trace_excess: f64,
    /// Max entry deviation of the reference marginal from `2^{-nt} I`.
    pub choi_marginal_deviation: f64,
    /// Largest entry of `LHS - RHS` in the diagonal free-symbol inequality.
    pub diagonal_gap: f64,
    pub subtypes_checked: usize,
}

impl TcopyChainReport {
    /// Whether every step holds within `tol` (the marginal check uses `1e-11`).
    pub fn failures(&self, tol: f64) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.family_exact && (self.direct - self.typed).abs() > tol {
            out.push("direct value differs from the type decomposition");
        }
        if self.typed > self.subtype_norm_sum + tol {
            out.push("subtype reduction");
        }
        if self.subtype_norm_excess > tol {
            out.push("per-subtype norm bound");
        }
        if self.subtype_norm_sum > self.free_symbol_sum + tol {
            out.push("free-symbol sum");
        }
        if self.diagonal_gap > tol || self.free_symbol_sum > self.distinct_sum + tol {
            out.push("free symbols to distinct values");
        }
        if self.gamma_trace_excess > tol {
            out.push("distinct-value trace bound");
        }
        if self.distinct_sum > self.final_bound + tol {
            out.push("final bound");
        }
        if self.choi_marginal_deviation > 1e-11 {
            out.push("reference marginal is not maximally mixed");
        }
        out
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.failures(tol).is_empty()
    }
}

/// The constant `(2r)^{2r} t^{t+1}` with `r = 2t + 1`.
pub fn chain_constant(t: usize) -> f64 {
    let r = 2 * t + 1;
    let c = subtype_count_bound(r);
    c * c * Float::powi(t as f64, t as i32 + 1)
}

/// Evaluates the whole chain for one strategy against the binary phase game
/// built from `family`.
pub fn verify_tcopy_chain(family: &FunctionFamily, s: &RestrictedStrategy) -> Result<TcopyChainReport> {
    let layout = s.layout;
    let (n, t) = (layout.n, layout.t);
    let value = restricted_value(family, s)?;
    let (qs, channel) = s.absorb_hadamards()?;
    let psis = typed_choi_vectors(&channel, layout)?;
    let space = layout.space();
    let r = layout.r();
    let two = |e: i32| Float::powi(2.0f64, e);
    let nt = (n * t) as i32;
    let count_bound = subtype_count_bound(r);

    let mut norm_sum = 0.0;
    let mut free_sum = 0.0;
    let mut excess = f64::NEG_INFINITY;
    let mut checked = 0;
    for lambda in realizable_types(space.alphabet, r) {
        for mu in enumerate_subtypes(&lambda, r) {
            let b = free_variable_symbols(&mu, t, t)?.len() as i32;
            let norm = b_matrix_norm_sq(&mu, &qs, layout, t)? / two(nt);
            let weight = subtype_projector(&mu, space)?.trace_with_vectors(&psis)?;
            let cap = two(-nt + n as i32 * b);
            excess = excess.max(norm - cap);
            norm_sum += norm * weight;
            free_sum += cap * weight;
            checked += 1;
        }
    }
    let scale = two(n as i32 * (t as i32 - 1)) * count_bound;

    let mut distinct = 0.0;
    let mut gamma_excess = f64::NEG_INFINITY;
    for l in 1..=t {
        let tr = distinct_value_projector(l, t, space)?.trace_with_vectors(&psis)?;
        gamma_excess = gamma_excess.max(tr - distinct_count_bound(t, l, space.alphabet) * two(-nt));
        distinct += two((n * (t - l)) as i32) * tr;
    }

    let mut factors = Vec::new();
    for _ in 0..=t {
        factors.push(layout.player_dim());
    }
    factors.extend(core::iter::repeat_n(layout.alphabet(), t));
    let refs: Vec<usize> = (t + 1..2 * t + 1).collect();
    let marginal = reduced_from_vectors(&s.channel.choi_vectors(), &DimSpec::new(factors)?, &refs)?;
    let d_ref = marginal.rows();
    let marginal_dev = marginal.max_abs_diff(&ComplexMatrix::identity(d_ref).scale_real(two(-nt)));

    Ok(TcopyChainReport {
        n,
        t,
        a: layout.a,
        direct: value.direct,
        typed: value.typed,
        family_exact: value.family_exact,
        subtype_norm_sum: scale * norm_sum,
        free_symbol_sum: scale * free_sum,
        distinct_sum: two(-(n as i32)) * count_bound * count_bound * distinct,
        final_bound: chain_constant(t) * two(-(n as i32)),
        subtype_norm_excess: excess,
        gamma_trace_excess: gamma_excess,
        choi_marginal_deviation: marginal_dev,
        diagonal_gap: free_var_distinct_gap(n, t)?,
        subtypes_checked: checked,
    })
}
