use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use super::moe::mixture;
use crate::error::{domain, Error, Result};
use crate::matcore::random::haar_isometry;
use crate::matcore::{ComplexMatrix, C64};

const TP_TOL: f64 = 1e-10;
/// Largest dimension for which a Choi state is materialized densely.
pub const MAX_DENSE_CHOI: usize = 1024;

/// A CPTP map stored as Kraus operators `K_k: C^{d_in} → C^{d_out}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    d_in: usize,
    d_out: usize,
}

impl Channel {
    /// Checks shapes and `Σ K†K = I` to `1e-10`.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| domain("a channel needs at least one Kraus operator"))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for k in &kraus {
            if k.rows() != d_out || k.cols() != d_in {
                return Err(domain("Kraus operators have inconsistent shapes"));
            }
            sum = &sum + &(&k.adjoint() * k);
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d_in));
        if dev > TP_TOL {
            return Err(Error::Invariant(format!("channel is not trace preserving (deviation {dev:.3e})")));
        }
        Ok(Self { kraus, d_in, d_out })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(d)], d_in: d, d_out: d }
    }

    /// The channel `ρ ↦ V ρ V†` for an isometry `V`.
    pub fn isometry(v: ComplexMatrix) -> Result<Self> {
        Self::new(vec![v])
    }

    /// Random channel with `num_kraus` Kraus operators cut from a Haar isometry
    /// `C^{d_in} → C^{num_kraus} ⊗ C^{d_out}`.
    pub fn random<R: Rng + ?Sized>(d_in: usize, d_out: usize, num_kraus: usize, rng: &mut R) -> Result<Self> {
        if d_out * num_kraus < d_in {
            return Err(domain("output dimension times Kraus rank must cover the input dimension"));
        }
        let v = haar_isometry(d_out * num_kraus, d_in, rng);
        let kraus = (0..num_kraus).map(|j| v.block(j * d_out, 0, d_out, d_in)).collect();
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `Φ(ρ)`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.rows() != self.d_in {
            return Err(domain("input does not match the channel's input dimension"));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        Ok(out)
    }

    /// `ρ ↦ W Φ(ρ) W†` for an operator `W` on the output (typically unitary).
    pub fn then(&self, w: &ComplexMatrix) -> Result<Self> {
        if w.cols() != self.d_out {
            return Err(domain("post-processing operator does not match the output"));
        }
        Self::new(self.kraus.iter().map(|k| w * k).collect())
    }

    /// Unnormalized Choi matrix `J(Φ) = Σ_{ij} Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|`, output first.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let vs: Vec<Vec<C64>> = self.kraus.iter().map(|k| k.data().to_vec()).collect();
        mixture(&vs, self.d_out * self.d_in)
    }

    /// Components `(K_k ⊗ I)|EPR⟩` of the normalized Choi state, output first.
    ///
    /// `Σ_k |ψ_k⟩⟨ψ_k|` is the Choi state; the components are never orthogonalized.
    pub fn choi_vectors(&self) -> Vec<Vec<C64>> {
        let s = 1.0 / Float::sqrt(self.d_in as f64);
        self.kraus.iter().map(|k| k.data().iter().map(|z| z * s).collect()).collect()
    }
}

/// `(Φ ⊗ id)(|EPR^n⟩⟨EPR^n|^{⊗t})` with the player registers first and the `t`
/// reference registers after them, in copy order.
pub fn choi_state(phi: &Channel, t: usize, n: usize) -> Result<ComplexMatrix> {
    if phi.d_in != 1usize << (n * t) {
        return Err(domain(format!("channel input has dimension {}, expected 2^(nt) = {}", phi.d_in, 1usize << (n * t))));
    }
    let d = phi.d_out * phi.d_in;
    if d > MAX_DENSE_CHOI {
        return Err(Error::TooLarge { dim: d, limit: MAX_DENSE_CHOI });
    }
    Ok(mixture(&phi.choi_vectors(), d))
}
