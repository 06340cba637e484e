use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::channel::Channel;
use super::cloning::{cloning_value, CloningGame, CloningStrategy};
use super::phase::{binary_phase_game, hadamard_transform};
use crate::error::{domain, Error, Result};
use crate::matcore::{permute_vector, ComplexMatrix, DimSpec, C64};
use crate::typesys::{parity_mask, FunctionFamily, PlayerLayout};

/// Largest type-ordered dimension for which `Ξ` is materialized densely.
pub const MAX_DENSE_XI: usize = 512;

/// A one-query strategy in normal form.
///
/// Player `i` holds `C_i D_i E_i` (`n`, `a` and `1` qubits), applies the oracle
/// once to `C_i` (`U` when `controls[i]` is false, `U†` when true), then `Q_i`
/// to the whole register, and finally measures `C_i` in the standard basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedStrategy {
    pub channel: Channel,
    pub layout: PlayerLayout,
    pub unitaries: Vec<ComplexMatrix>,
    pub controls: Vec<bool>,
}

impl RestrictedStrategy {
    pub fn new(channel: Channel, layout: PlayerLayout, unitaries: Vec<ComplexMatrix>, controls: Vec<bool>) -> Result<Self> {
        layout.check_unitaries(&unitaries)?;
        if controls.len() != layout.t + 1 {
            return Err(domain("one control bit per player is required"));
        }
        if channel.d_in() != 1 << (layout.n * layout.t) {
            return Err(domain("channel input is not t copies of the challenge register"));
        }
        if channel.d_out() != layout.player_dim().pow(layout.t as u32 + 1) {
            return Err(domain("channel output is not t + 1 player registers"));
        }
        Ok(Self { channel, layout, unitaries, controls })
    }

    /// The cloner routes copy `i` to `C_i` for `i ≤ t`, leaving every other
    /// qubit in `|0⟩`; the first `t` players query `U†` and the last queries `U`.
    pub fn trivial(layout: PlayerLayout) -> Result<Self> {
        let (nsym, dp, t) = (layout.alphabet(), layout.aux_per_player(), layout.t);
        let d_in = nsym.pow(t as u32);
        let out = DimSpec::uniform(layout.player_dim(), t + 1);
        let v = ComplexMatrix::from_fn(out.total(), d_in, |r, c| {
            let copies = DimSpec::uniform(nsym, t).digits(c);
            let mut want: Vec<usize> = copies.iter().map(|&x| x * dp).collect();
            want.push(0);
            C64::new(if out.index(&want) == r { 1.0 } else { 0.0 }, 0.0)
        });
        let mut controls = vec![true; t];
        controls.push(false);
        Self::new(Channel::isometry(v)?, layout, vec![ComplexMatrix::identity(layout.player_dim()); t + 1], controls)
    }

    /// Oracle calls made by all players together; one each in normal form.
    pub fn query_count(&self) -> usize {
        self.layout.t + 1
    }

    /// `P_{i,x} = K† Q_i† (|x⟩⟨x| ⊗ I) Q_i K` with `K = U` or `U†` on `C_i`.
    pub fn measurements(&self, u: &ComplexMatrix) -> Vec<Vec<ComplexMatrix>> {
        let dp = self.layout.aux_per_player();
        let id = ComplexMatrix::identity(dp);
        (0..=self.layout.t)
            .map(|i| {
                let k = if self.controls[i] { u.adjoint() } else { u.clone() }.kron(&id);
                let qk = &self.unitaries[i] * &k;
                (0..self.layout.alphabet())
                    .map(|x| {
                        let rows: Vec<usize> = (x * dp..(x + 1) * dp).collect();
                        let cols: Vec<usize> = (0..qk.cols()).collect();
                        let b = qk.submatrix(&rows, &cols);
                        &b.adjoint() * &b
                    })
                    .collect()
            })
            .collect()
    }

    /// The strategy in the generic cloning-strategy form for a given game.
    pub fn to_cloning_strategy(&self, g: &CloningGame) -> Result<CloningStrategy> {
        if g.n() != self.layout.n || g.t() != self.layout.t {
            return Err(domain("strategy and game disagree on n or t"));
        }
        Ok(CloningStrategy {
            channel: self.channel.clone(),
            player_dims: vec![self.layout.player_dim(); self.layout.t + 1],
            measurements: g.unitaries().iter().map(|u| self.measurements(u)).collect(),
        })
    }

    /// Moves the fixed Hadamards of the binary phase oracle out of the queries.
    ///
    /// Returns the post-query unitaries `Q_i (L_i ⊗ I)` and the channel followed
    /// by `⊗_i (R_i ⊗ I)`, where `U = U_f H` is written `L_i U_f R_i` with
    /// `(L, R) = (I, H)` for a `U` query and `(H, I)` for a `U†` query.
    pub fn absorb_hadamards(&self) -> Result<(Vec<ComplexMatrix>, Channel)> {
        let h = hadamard_transform(self.layout.n);
        let id_c = ComplexMatrix::identity(self.layout.alphabet());
        let id_w = ComplexMatrix::identity(self.layout.aux_per_player());
        let mut qs = Vec::new();
        let mut rs = Vec::new();
        for (q, &dagger) in self.unitaries.iter().zip(&self.controls) {
            let (l, r) = if dagger { (&h, &id_c) } else { (&id_c, &h) };
            qs.push(q * &l.kron(&id_w));
            rs.push(r.kron(&id_w));
        }
        let channel = self.channel.then(&ComplexMatrix::kron_all(&rs))?;
        Ok((qs, channel))
    }
}

/// Components of the Choi state of `channel` reordered to type ordering:
/// `C_1 … C_{t+1}`, `A'_1 … A'_t`, then the per-player `D_i E_i` packed.
pub fn typed_choi_vectors(channel: &Channel, layout: PlayerLayout) -> Result<Vec<Vec<C64>>> {
    let (nsym, dp, t) = (layout.alphabet(), layout.aux_per_player(), layout.t);
    let mut factors = Vec::new();
    for _ in 0..=t {
        factors.push(nsym);
        factors.push(dp);
    }
    factors.extend(core::iter::repeat_n(nsym, t));
    let dims = DimSpec::new(factors)?;
    let mut perm: Vec<usize> = (0..=t).map(|i| 2 * i).collect();
    perm.extend((0..t).map(|j| 2 * (t + 1) + j));
    perm.extend((0..=t).map(|i| 2 * i + 1));
    channel.choi_vectors().iter().map(|psi| permute_vector(psi, &dims, &perm)).collect()
}

/// The vectors `ξ_{x,z}` whose projectors sum to `Ξ`, in type ordering.
///
/// `ξ_{x,z}(v, w) = Π_i conj(Q_i[(x, z_i), (v_i, w_i)]) · 2^{-nt/2} (-1)^{⟨x, v_{t+1} ⊕ … ⊕ v_{2t}⟩}`,
/// with `v_0 … v_t` the player positions and `v_{t+1} … v_{2t}` the references.
pub fn xi_vectors(qs: &[ComplexMatrix], layout: PlayerLayout) -> Result<Vec<Vec<C64>>> {
    layout.check_unitaries(qs)?;
    let space = layout.space();
    let (nsym, dp, t, m) = (layout.alphabet(), layout.aux_per_player(), layout.t, space.aux);
    let amp = 1.0 / Float::sqrt(nsym.pow(t as u32) as f64);
    let wdims = DimSpec::uniform(dp, t + 1);
    let ws: Vec<Vec<usize>> = (0..m).map(|w| wdims.digits(w)).collect();
    let queries: Vec<Vec<usize>> = (0..space.queries()).map(|q| space.query_digits(q)).collect();
    let mut out = Vec::with_capacity(nsym * m);
    for x in 0..nsym {
        for z in &ws {
            let mut v = vec![C64::new(0.0, 0.0); space.dim()];
            for (qi, q) in queries.iter().enumerate() {
                let word = q[t + 1..].iter().fold(0, |acc, &u| acc ^ u);
                let sign = if (word & x).count_ones() % 2 == 1 { -amp } else { amp };
                for (wi, w) in ws.iter().enumerate() {
                    let mut acc = C64::new(sign, 0.0);
                    for i in 0..=t {
                        acc *= qs[i].get(x * dp + z[i], q[i] * dp + w[i]).conj();
                    }
                    v[qi * m + wi] = acc;
                }
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Dense `Ξ`, refused above dimension [`MAX_DENSE_XI`].
pub fn xi_operator(qs: &[ComplexMatrix], layout: PlayerLayout) -> Result<ComplexMatrix> {
    let d = layout.space().dim();
    if d > MAX_DENSE_XI {
        return Err(Error::TooLarge { dim: d, limit: MAX_DENSE_XI });
    }
    Ok(super::moe::mixture(&xi_vectors(qs, layout)?, d))
}

/// `2^{n(t-1)} Σ_λ Tr[Π_λ Ξ Π_λ ρ']`, the value predicted by the type
/// decomposition when the oracle family is uniform enough.
pub fn type_decomposed_value(s: &RestrictedStrategy) -> Result<f64> {
    let layout = s.layout;
    let (qs, channel) = s.absorb_hadamards()?;
    let xis = xi_vectors(&qs, layout)?;
    let psis = typed_choi_vectors(&channel, layout)?;
    let space = layout.space();
    if space.alphabet > 16 {
        return Err(domain("type bookkeeping supports alphabets of size at most 16"));
    }
    let m = space.aux;
    let classes: Vec<usize> = (0..space.queries()).map(|q| parity_mask(&space.query_digits(q)) as usize).collect();
    let mut bucket = vec![C64::new(0.0, 0.0); 1 << space.alphabet];
    let mut total = 0.0;
    for xi in &xis {
        for psi in &psis {
            bucket.iter_mut().for_each(|b| *b = C64::new(0.0, 0.0));
            for (q, &cls) in classes.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for k in q * m..(q + 1) * m {
                    acc += xi[k].conj() * psi[k];
                }
                bucket[cls] += acc;
            }
            total += bucket.iter().map(|b| b.norm_sqr()).sum::<f64>();
        }
    }
    Ok(Float::powi(2.0, (layout.n * (layout.t - 1)) as i32) * total)
}

/// Both evaluations of a restricted strategy on the binary phase game.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestrictedValue {
    /// Direct evaluation of the cloning game.
    pub direct: f64,
    /// The type-decomposed expression.
    pub typed: f64,
    /// Whether the family averages degree-`(4t+2)` phase products exactly, so
    /// the two numbers must agree.
    pub family_exact: bool,
}

impl RestrictedValue {
    pub fn residual(&self) -> f64 {
        (self.direct - self.typed).abs()
    }
}

pub fn restricted_value(family: &FunctionFamily, s: &RestrictedStrategy) -> Result<RestrictedValue> {
    if family.n != s.layout.n {
        return Err(domain(format!("family is over {} bits, strategy over {}", family.n, s.layout.n)));
    }
    let g = binary_phase_game(family, s.layout.t)?;
    let direct = cloning_value(&g, &s.to_cloning_strategy(&g)?)?;
    let typed = type_decomposed_value(s)?;
    Ok(RestrictedValue { direct, typed, family_exact: family.is_exact_to_degree(4 * s.layout.t + 2) })
}
