use alloc::vec::Vec;

use num_traits::Float;

use super::ensemble::UnitaryEnsemble;
use crate::error::{dimension, domain, Error, Result};
use crate::matcore::{partial_transpose, swap_systems, ComplexMatrix, DimSpec, C64};

/// Largest matrix side materialized by the moment constructions.
pub const MAX_MOMENT_DIM: usize = 4096;

/// A frame potential, exact for listed ensembles and a Monte-Carlo estimate
/// for sampled ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePotential {
    pub value: f64,
    /// Zero for exact evaluations.
    pub std_error: f64,
}

fn overlap_power(u: &ComplexMatrix, v: &ComplexMatrix, t: usize) -> f64 {
    let tr: C64 = u.data().iter().zip(v.data()).map(|(a, b)| a.conj() * b).sum();
    Float::powi(tr.norm_sqr(), t as i32)
}

/// `(1/|ν|²) Σ_{U,V} |Tr(U†V)|^{2t}` over an explicit list, summed in index order.
pub fn frame_potential_of(elements: &[ComplexMatrix], t: usize) -> f64 {
    let mut total = 0.0;
    for u in elements {
        for v in elements {
            total += overlap_power(u, v, t);
        }
    }
    total / (elements.len() * elements.len()) as f64
}

/// The frame potential of `ens` at order `t ≤ 3`.
///
/// For a group the double sum collapses to `(1/|G|) Σ_W |Tr W|^{2t}`. Sampled
/// ensembles pair member `2i` with `2i+1` and report the mean and its standard error.
pub fn frame_potential(ens: &UnitaryEnsemble, t: usize) -> Result<FramePotential> {
    if t == 0 || t > 3 {
        return Err(domain("frame potentials are evaluated for 1 ≤ t ≤ 3"));
    }
    if let Some(elems) = ens.elements() {
        let value = if ens.is_group() {
            elems.iter().map(|w| Float::powi(w.trace().norm_sqr(), t as i32)).sum::<f64>() / elems.len() as f64
        } else {
            frame_potential_of(elems, t)
        };
        return Ok(FramePotential { value, std_error: 0.0 });
    }
    let pairs = ens.len() / 2;
    if pairs < 2 {
        return Err(domain("a sampled frame potential needs at least four samples"));
    }
    let xs: Vec<f64> = (0..pairs).map(|i| overlap_power(&ens.member(2 * i), &ens.member(2 * i + 1), t)).collect();
    let mean = xs.iter().sum::<f64>() / pairs as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (pairs - 1) as f64;
    Ok(FramePotential { value: mean, std_error: Float::sqrt(var / pairs as f64) })
}

/// `p` forward and `q` adjoint copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MomentSpec {
    pub p: usize,
    pub q: usize,
}

impl MomentSpec {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(domain("a moment needs at least one copy"));
        }
        Ok(Self { p, q })
    }

    pub fn copies(&self) -> usize {
        self.p + self.q
    }

    fn side(&self, d: usize, factor: usize) -> Result<usize> {
        let side = d.saturating_pow((factor * self.copies()) as u32);
        if side > MAX_MOMENT_DIM {
            return Err(Error::TooLarge { dim: side, limit: MAX_MOMENT_DIM });
        }
        Ok(side)
    }
}

fn forward_adjoint(u: &ComplexMatrix, spec: MomentSpec) -> ComplexMatrix {
    u.kron_power(spec.p).kron(&u.adjoint().kron_power(spec.q))
}

fn average(ens: &UnitaryEnsemble, side: usize, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(side, side);
    for i in 0..ens.len() {
        acc = &acc + &f(&ens.member(i));
    }
    acc.scale_real(1.0 / ens.len() as f64)
}

/// `E_ν[W O W†]` with `W = U^{⊗p} ⊗ (U†)^{⊗q}`.
pub fn moment_operator(ens: &UnitaryEnsemble, o: &ComplexMatrix, spec: MomentSpec) -> Result<ComplexMatrix> {
    let side = spec.side(ens.dim(), 1)?;
    if o.rows() != side || o.cols() != side {
        return Err(dimension("operator does not act on p + q copies"));
    }
    Ok(average(ens, side, |u| {
        let w = forward_adjoint(u, spec);
        &(&w * o) * &w.adjoint()
    }))
}

/// `E_ν[U^{⊗p} ⊗ (U†)^{⊗q} ⊗ Ū^{⊗p} ⊗ (Uᵀ)^{⊗q}]`.
pub fn mixed_moment_tensor(ens: &UnitaryEnsemble, spec: MomentSpec) -> Result<ComplexMatrix> {
    let side = spec.side(ens.dim(), 2)?;
    Ok(average(ens, side, |u| forward_adjoint(u, spec).kron(&forward_adjoint(u, spec).conj())))
}

/// Outcome of [`verify_mixed_design_identity`].
#[derive(Debug, Clone, PartialEq)]
pub struct MixedIdentityReport {
    pub spec: MomentSpec,
    pub max_deviation: f64,
}

impl MixedIdentityReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Compares [`mixed_moment_tensor`] with the rearranged ordinary moment
/// `E_ν[U^{⊗p} ⊗ U^{⊗q} ⊗ Ū^{⊗p} ⊗ Ū^{⊗q}]`: exchange the second and fourth
/// factors, then transpose them. The two agree for every ensemble.
pub fn verify_mixed_design_identity(ens: &UnitaryEnsemble, spec: MomentSpec) -> Result<MixedIdentityReport> {
    if !ens.is_explicit() {
        return Err(domain("the identity is checked on explicit ensembles"));
    }
    let side = spec.side(ens.dim(), 2)?;
    let (dp, dq) = (ens.dim().pow(spec.p as u32), ens.dim().pow(spec.q as u32));
    let plain = average(ens, side, |u| {
        let f = u.kron_power(spec.copies());
        f.kron(&f.conj())
    });
    let dims = DimSpec::new([dp, dq, dp, dq].to_vec())?;
    let swapped = swap_systems(&plain, &dims, 1, 3)?;
    let rhs = partial_transpose(&swapped, &dims, &[1, 3])?;
    let lhs = mixed_moment_tensor(ens, spec)?;
    Ok(MixedIdentityReport { spec, max_deviation: lhs.max_abs_diff(&rhs) })
}
