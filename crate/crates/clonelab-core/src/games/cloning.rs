use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::channel::Channel;
use super::moe::{check_projective, MOEGame, MOEStrategy};
use crate::error::{domain, Result};
use crate::matcore::{apply_local, basis, permute_systems, vkron, vnorm, ComplexMatrix, DimSpec, C64};

/// A `t`-copy cloning game on `n` qubits with challenge unitaries `U_θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CloningGame {
    n: usize,
    t: usize,
    unitaries: Vec<ComplexMatrix>,
}

impl CloningGame {
    pub fn new(n: usize, t: usize, unitaries: Vec<ComplexMatrix>) -> Result<Self> {
        if t == 0 || unitaries.is_empty() {
            return Err(domain("a cloning game needs t ≥ 1 and at least one unitary"));
        }
        for u in &unitaries {
            if u.rows() != 1 << n {
                return Err(domain("challenge unitary has the wrong dimension"));
            }
            u.ensure_unitary(1e-10)?;
        }
        Ok(Self { n, t, unitaries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `|𝒳| = 2^n`.
    pub fn answers(&self) -> usize {
        1 << self.n
    }

    pub fn unitaries(&self) -> &[ComplexMatrix] {
        &self.unitaries
    }

    /// `(U_θ|x⟩)^{⊗t}`.
    pub fn challenge(&self, theta: usize, x: usize) -> Vec<C64> {
        let col = self.unitaries[theta].col(x);
        (1..self.t).fold(col.clone(), |acc, _| vkron(&acc, &col))
    }
}

/// A cloning channel into `t + 1` player registers together with each player's
/// projective measurement `P^θ_{i,x}`, indexed `[θ][i][x]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CloningStrategy {
    pub channel: Channel,
    pub player_dims: Vec<usize>,
    pub measurements: Vec<Vec<Vec<ComplexMatrix>>>,
}

impl CloningStrategy {
    pub fn validate(&self, g: &CloningGame) -> Result<()> {
        if self.player_dims.len() != g.t + 1 {
            return Err(domain(format!("expected {} players, got {}", g.t + 1, self.player_dims.len())));
        }
        if self.channel.d_in() != 1 << (g.n * g.t) {
            return Err(domain("channel input is not t copies of the challenge register"));
        }
        if self.channel.d_out() != self.player_dims.iter().product::<usize>() {
            return Err(domain("channel output does not factor into the player registers"));
        }
        if self.measurements.len() != g.unitaries.len() {
            return Err(domain("one set of measurements per question is required"));
        }
        for per_theta in &self.measurements {
            if per_theta.len() != g.t + 1 {
                return Err(domain("every player needs a measurement"));
            }
            for (i, m) in per_theta.iter().enumerate() {
                if m.len() != g.answers() {
                    return Err(domain("a measurement must have 2^n outcomes"));
                }
                check_projective(m, self.player_dims[i], &format!("player {i}"))?;
            }
        }
        Ok(())
    }

    /// The strategy that forwards the `t` copies to the first `t` players, who
    /// measure in the challenge basis, while the last player holds `|0⟩` and
    /// reads it out.
    pub fn trivial(g: &CloningGame) -> Result<Self> {
        let d = g.answers();
        let d_in = 1 << (g.n * g.t);
        let v = ComplexMatrix::from_fn(d_in * d, d_in, |r, c| {
            if r == c * d { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
        });
        let comp: Vec<ComplexMatrix> = (0..d).map(|x| ComplexMatrix::unit(d, x, x)).collect();
        let measurements = g
            .unitaries
            .iter()
            .map(|u| {
                let in_basis: Vec<ComplexMatrix> = (0..d).map(|x| ComplexMatrix::projector(&u.col(x))).collect();
                let mut per = vec![in_basis; g.t];
                per.push(comp.clone());
                per
            })
            .collect();
        Ok(Self { channel: Channel::isometry(v)?, player_dims: vec![d; g.t + 1], measurements })
    }
}

fn all_players_accept(v: Vec<C64>, dims: &DimSpec, ops: &[&ComplexMatrix]) -> Result<f64> {
    let mut v = v;
    for (k, op) in ops.iter().enumerate() {
        v = apply_local(&v, dims, k, op)?;
    }
    Ok(Float::powi(vnorm(&v), 2))
}

/// `E_θ E_x Tr[(⊗_i P^θ_{i,x}) Φ((U_θ|x⟩⟨x|U_θ†)^{⊗t})]`, evaluated on the
/// Kraus components of the channel output.
pub fn cloning_value(g: &CloningGame, s: &CloningStrategy) -> Result<f64> {
    s.validate(g)?;
    let dims = DimSpec::new(s.player_dims.clone())?;
    let mut total = 0.0;
    for theta in 0..g.unitaries.len() {
        for x in 0..g.answers() {
            let phi = g.challenge(theta, x);
            let ops: Vec<&ComplexMatrix> = s.measurements[theta].iter().map(|m| &m[x]).collect();
            for k in s.channel.kraus() {
                total += all_players_accept(k.apply(&phi), &dims, &ops)?;
            }
        }
    }
    Ok(total / (g.unitaries.len() * g.answers()) as f64)
}

/// `|𝒳|^{t-1} E_θ Σ_x Tr[(⊗_i P^θ_{i,x} ⊗ (Ū_θ|x⟩⟨x|U_θᵀ)^{⊗t}) ρ]` with `ρ`
/// the Choi state of the strategy's channel.
pub fn monogamy_form_value(g: &CloningGame, s: &CloningStrategy) -> Result<f64> {
    s.validate(g)?;
    let d = g.answers();
    let mut factors = s.player_dims.clone();
    factors.extend(core::iter::repeat_n(d, g.t));
    let dims = DimSpec::new(factors)?;
    let psis = s.channel.choi_vectors();
    let mut total = 0.0;
    for (theta, u) in g.unitaries.iter().enumerate() {
        let ubar = u.conj();
        for x in 0..d {
            let a = ComplexMatrix::projector(&ubar.col(x));
            let mut ops: Vec<&ComplexMatrix> = s.measurements[theta].iter().map(|m| &m[x]).collect();
            ops.extend(core::iter::repeat_n(&a, g.t));
            for psi in &psis {
                total += all_players_accept(psi.clone(), &dims, &ops)?;
            }
        }
    }
    let scale = Float::powi(d as f64, g.t as i32 - 1);
    Ok(scale * total / g.unitaries.len() as f64)
}

/// The single-copy game rewritten as a monogamy game: Alice holds the
/// reference register of the Choi state and measures `{Ū_θ|x⟩⟨x|U_θᵀ}`, Bob
/// and Charlie are the two players.
pub fn single_copy_as_moe(g: &CloningGame, s: &CloningStrategy) -> Result<(MOEGame, MOEStrategy)> {
    if g.t != 1 {
        return Err(domain("the monogamy rewriting is for single-copy games"));
    }
    s.validate(g)?;
    let d = g.answers();
    let game = MOEGame::from_bases(&g.unitaries.iter().map(|u| u.conj()).collect::<Vec<_>>())?;
    let [db, dc] = [s.player_dims[0], s.player_dims[1]];
    let dims = DimSpec::new(vec![db, dc, d])?;
    let rho = super::channel::choi_state(&s.channel, 1, g.n)?;
    let (rho, _) = permute_systems(&rho, &dims, &[2, 0, 1])?;
    let bob = s.measurements.iter().map(|m| m[0].clone()).collect();
    let charlie = s.measurements.iter().map(|m| m[1].clone()).collect();
    Ok((game, MOEStrategy { rho, dims: [d, db, dc], bob, charlie }))
}

/// Standard-basis projectors `|x⟩⟨x|` on a `d`-dimensional register.
pub fn computational_measurement(d: usize) -> Vec<ComplexMatrix> {
    (0..d).map(|x| ComplexMatrix::projector(&basis(d, x))).collect()
}
