use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::designs::UnitaryEnsemble;
use crate::error::{domain, Error, Result};
use crate::games::{choi_state, Channel};
use crate::matcore::{apply_local, c64, vnorm, ComplexMatrix, DimSpec, C64};

/// Ancilla qubits an observer may add to its register.
pub const MAX_ANCILLAS: usize = 3;
/// Largest joint dimension (channel output times reference) evaluated.
pub const MAX_BH_DIM: usize = 512;

/// The black-hole cloning game on `n` qubits with `k` infalling qubits.
///
/// The scrambled register is ordered infalling qubits `B'` first (the `k` most
/// significant bits) and interior qubits `I` after them; the interior starts in
/// `|0^{n-k}⟩` and `B'` is maximally entangled with Alice's `B`. The channel
/// maps the scrambled register to `H ⊗ R`, horizon first.
#[derive(Debug, Clone, PartialEq)]
pub struct BlackHoleGame {
    n: usize,
    k: usize,
    scrambler: UnitaryEnsemble,
    channel: Channel,
    d_h: usize,
    d_r: usize,
}

impl BlackHoleGame {
    pub fn new(n: usize, k: usize, scrambler: UnitaryEnsemble, channel: Channel, d_h: usize, d_r: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(domain("need n ≥ k ≥ 1"));
        }
        if scrambler.dim() != 1 << n || channel.d_in() != 1 << n {
            return Err(domain("scrambler and channel must act on n qubits"));
        }
        if channel.d_out() != d_h * d_r {
            return Err(domain(format!("channel output {} is not H ⊗ R = {d_h} × {d_r}", channel.d_out())));
        }
        let joint = channel.d_out() << n;
        if joint > MAX_BH_DIM {
            return Err(Error::TooLarge { dim: joint, limit: MAX_BH_DIM });
        }
        Ok(Self { n, k, scrambler, channel, d_h, d_r })
    }

    /// Everything is radiated: `H` is trivial and `R` is the whole scrambled register.
    pub fn all_radiated(n: usize, k: usize, scrambler: UnitaryEnsemble) -> Result<Self> {
        Self::new(n, k, scrambler, Channel::identity(1 << n), 1, 1 << n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn scrambler(&self) -> &UnitaryEnsemble {
        &self.scrambler
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    /// `(d_H, d_R)`.
    pub fn output_dims(&self) -> (usize, usize) {
        (self.d_h, self.d_r)
    }

    /// Index of `|x 0^{n-k}⟩` on the scrambled register.
    fn padded(&self, x: usize) -> usize {
        x << (self.n - self.k)
    }
}

/// Which oracle an observer calls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleCall {
    Forward,
    Adjoint,
}

/// An observer making exactly one oracle call.
///
/// The register is the input followed by `ancillas` qubits in `|0⟩`. The
/// observer applies `v1`, the oracle on the leading `n` qubits, `v2`, and
/// reads its `k`-bit answer from the last `k` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQueryObserver {
    pub input_dim: usize,
    pub ancillas: usize,
    pub v1: ComplexMatrix,
    pub v2: ComplexMatrix,
    pub call: OracleCall,
}

impl SingleQueryObserver {
    pub fn new(input_dim: usize, ancillas: usize, v1: ComplexMatrix, v2: ComplexMatrix, call: OracleCall) -> Result<Self> {
        if ancillas > MAX_ANCILLAS {
            return Err(domain(format!("at most {MAX_ANCILLAS} ancilla qubits are supported")));
        }
        let reg = input_dim << ancillas;
        for v in [&v1, &v2] {
            if !v.is_square() || v.rows() != reg {
                return Err(domain("observer unitaries must act on input plus ancillas"));
            }
            v.ensure_unitary(1e-9)?;
        }
        Ok(Self { input_dim, ancillas, v1, v2, call })
    }

    pub fn register_dim(&self) -> usize {
        self.input_dim << self.ancillas
    }

    fn check(&self, n: usize, k: usize, input_dim: usize) -> Result<()> {
        let reg = self.register_dim();
        if self.input_dim != input_dim {
            return Err(domain("observer input does not match its register in the game"));
        }
        if reg % (1 << n) != 0 || reg % (1 << k) != 0 {
            return Err(domain("observer register cannot host the oracle call and a k-bit answer"));
        }
        Ok(())
    }

    /// `W_x = (I ⊗ ⟨x|) V2 (K ⊗ I) V1 (I ⊗ |0…0⟩)` for each answer `x`, with
    /// `K = U` or `U†`.
    pub fn branches(&self, u: &ComplexMatrix, k: usize) -> Vec<ComplexMatrix> {
        let reg = self.register_dim();
        let oracle = match self.call {
            OracleCall::Forward => u.clone(),
            OracleCall::Adjoint => u.adjoint(),
        };
        let q = oracle.kron(&ComplexMatrix::identity(reg / oracle.rows()));
        let m = &(&self.v2 * &q) * &self.v1;
        let cols: Vec<usize> = (0..self.input_dim).map(|c| c << self.ancillas).collect();
        (0..1usize << k)
            .map(|x| {
                let rows: Vec<usize> = (0..reg >> k).map(|r| (r << k) | x).collect();
                m.submatrix(&rows, &cols)
            })
            .collect()
    }

    /// The POVM element for answer `x` on the input register.
    pub fn effect(&self, u: &ComplexMatrix, k: usize, x: usize) -> ComplexMatrix {
        let w = &self.branches(u, k)[x];
        &w.adjoint() * w
    }

    /// Takes all `n` qubits, undoes the scrambler with one `U†` call, and moves
    /// the infalling qubits to the end to read them out.
    pub fn radiation_decoder(n: usize, k: usize) -> Result<Self> {
        let d = 1usize << n;
        let rest = n - k;
        let rotate = ComplexMatrix::from_fn(d, d, |r, c| {
            let moved = ((c & ((1 << rest) - 1)) << k) | (c >> rest);
            c64(if r == moved { 1.0 } else { 0.0 }, 0.0)
        });
        Self::new(d, 0, ComplexMatrix::identity(d), rotate, OracleCall::Adjoint)
    }

    /// Spends its query on ancillas and answers from a register it never
    /// touched, so its answer is independent of everything else.
    pub fn oblivious(input_dim: usize, n: usize) -> Result<Self> {
        let anc = n.max(1);
        let reg = input_dim << anc;
        Self::new(input_dim, anc, ComplexMatrix::identity(reg), ComplexMatrix::identity(reg), OracleCall::Forward)
    }

    /// Always answers `x`: the last `k` qubits are fresh ancillas outside the
    /// oracle's reach, flipped to `x` by `v2`.
    pub fn constant(input_dim: usize, n: usize, k: usize, x: usize) -> Result<Self> {
        let input_bits = input_dim.trailing_zeros() as usize;
        if !input_dim.is_power_of_two() || x >> k != 0 {
            return Err(domain("constant observers need a qubit input and x < 2^k"));
        }
        let anc = k + n.saturating_sub(input_bits);
        let reg = input_dim << anc;
        let flip = ComplexMatrix::from_fn(reg, reg, |r, c| c64(if r == c ^ x { 1.0 } else { 0.0 }, 0.0));
        Self::new(input_dim, anc, ComplexMatrix::identity(reg), flip, OracleCall::Forward)
    }
}

fn accept(mut v: Vec<C64>, dims: &DimSpec, ops: &[&ComplexMatrix]) -> Result<f64> {
    let mut shape = dims.factors().to_vec();
    for (k, op) in ops.iter().enumerate() {
        v = apply_local(&v, &DimSpec::new(shape.clone())?, k, op)?;
        shape[k] = op.rows();
    }
    Ok(Float::powi(vnorm(&v), 2))
}

fn bra(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::new(1, v.len(), v.iter().map(|z| z.conj()).collect()).expect("row vector")
}

fn check_observers(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver) -> Result<()> {
    bob.check(g.n, g.k, g.d_r)?;
    charlie.check(g.n, g.k, g.d_h)
}

/// Winning probability for one scrambler `u`: Charlie holds `H`, Bob holds `R`.
pub fn bh_member_value(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver, u: &ComplexMatrix) -> Result<f64> {
    check_observers(g, bob, charlie)?;
    let (d, db) = (1usize << g.n, 1usize << g.k);
    let amp = 1.0 / Float::sqrt(db as f64);
    let mut psi = vec![c64(0.0, 0.0); d * db];
    for b in 0..db {
        psi[g.padded(b) * db + b] = c64(amp, 0.0);
    }
    let psi = apply_local(&psi, &DimSpec::new(vec![d, db])?, 0, u)?;
    let (wc, wb) = (charlie.branches(u, g.k), bob.branches(u, g.k));
    let out = DimSpec::new(vec![g.d_h, g.d_r, db])?;
    let mut total = 0.0;
    for kr in g.channel.kraus() {
        let v = apply_local(&psi, &DimSpec::new(vec![d, db])?, 0, kr)?;
        for x in 0..db {
            total += accept(v.clone(), &out, &[&wc[x], &wb[x], &bra(&crate::matcore::basis(db, x))])?;
        }
    }
    Ok(total)
}

/// Mean and standard error of [`bh_member_value`] over the scrambler; the
/// error is zero for a listed ensemble.
pub fn bh_value_with_error(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver) -> Result<(f64, f64)> {
    let vals = (0..g.scrambler.len())
        .map(|i| bh_member_value(g, bob, charlie, &g.scrambler.member(i)))
        .collect::<Result<Vec<f64>>>()?;
    Ok(mean_and_error(&vals, g.scrambler.is_explicit()))
}

pub(crate) fn mean_and_error(vals: &[f64], exact: bool) -> (f64, f64) {
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    if exact || vals.len() < 2 {
        return (mean, 0.0);
    }
    let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, Float::sqrt(var / n))
}

/// Exact average over a listed scrambler, or the sample mean over a sampled one.
pub fn bh_value(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver) -> Result<f64> {
    Ok(bh_value_with_error(g, bob, charlie)?.0)
}

/// The game value and the four rewritings of it used in the one-query bound,
/// all averaged over the scrambler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BhChainReport {
    /// Direct evaluation from `|0^{n-k}⟩ ⊗ EPR^k`.
    pub value: f64,
    /// `2^{n-k}` times the value with `EPR^n` and the reference post-selected on `|x 0^{n-k}⟩`.
    pub epr_postselected: f64,
    /// `2^{-k} Σ_x Tr[(H_x ⊗ R_x) Φ(U|x0⟩⟨x0|U†)]`.
    pub first_ricochet: f64,
    /// `2^{n-k} Σ_x Tr[(H_x ⊗ R_x ⊗ Ū|x0⟩⟨x0|Uᵀ) (Φ ⊗ id)(EPR^n)]`.
    pub second_ricochet: f64,
    /// Value of the monogamy game on the Choi state in which Alice measures
    /// `{Ū|y⟩}` and the players answer `x 0^{n-k}`, evaluated with dense operators.
    pub moe_form: f64,
    pub n: usize,
    pub k: usize,
}

impl BhChainReport {
    /// Differences between consecutive steps.
    pub fn residuals(&self) -> [f64; 3] {
        [
            (self.value - self.epr_postselected).abs(),
            (self.epr_postselected - self.first_ricochet).abs(),
            (self.first_ricochet - self.second_ricochet).abs(),
        ]
    }

    /// Shortfall of the monogamy form below `2^{k-n} ω`; non-positive when it holds.
    pub fn moe_gap(&self) -> f64 {
        Float::powi(2.0, self.k as i32 - self.n as i32) * self.value - self.moe_form
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.residuals().iter().all(|&r| r <= tol) && self.moe_gap() <= tol
    }
}

/// Every step for a single scrambler `u`.
pub fn bh_member_chain(
    g: &BlackHoleGame,
    bob: &SingleQueryObserver,
    charlie: &SingleQueryObserver,
    u: &ComplexMatrix,
) -> Result<BhChainReport> {
    check_observers(g, bob, charlie)?;
    let (n, k) = (g.n, g.k);
    let (d, db) = (1usize << n, 1usize << k);
    let lift = Float::powi(2.0, (n - k) as i32);
    let (wc, wb) = (charlie.branches(u, k), bob.branches(u, k));
    let out = DimSpec::new(vec![g.d_h, g.d_r])?;
    let with_ref = DimSpec::new(vec![g.d_h, g.d_r, d])?;

    let amp = 1.0 / Float::sqrt(d as f64);
    let mut epr = vec![c64(0.0, 0.0); d * d];
    for y in 0..d {
        epr[y * d + y] = c64(amp, 0.0);
    }
    let epr = apply_local(&epr, &DimSpec::new(vec![d, d])?, 0, u)?;
    let mut post = 0.0;
    let mut first = 0.0;
    for kr in g.channel.kraus() {
        let v = apply_local(&epr, &DimSpec::new(vec![d, d])?, 0, kr)?;
        for x in 0..db {
            let proj = bra(&crate::matcore::basis(d, g.padded(x)));
            post += accept(v.clone(), &with_ref, &[&wc[x], &wb[x], &proj])?;
            first += accept(kr.apply(&u.col(g.padded(x))), &out, &[&wc[x], &wb[x]])?;
        }
    }

    let mut second = 0.0;
    for psi in g.channel.choi_vectors() {
        for x in 0..db {
            let alice = bra(&u.col(g.padded(x)).iter().map(|z| z.conj()).collect::<Vec<_>>());
            second += accept(psi.clone(), &with_ref, &[&wc[x], &wb[x], &alice])?;
        }
    }

    let rho = choi_state(&g.channel, 1, n)?;
    let ubar = u.conj();
    let mut moe = 0.0;
    for y in 0..d {
        // outcomes other than x 0^{n-k} carry the zero effect in the padded strategy
        if y & ((1 << (n - k)) - 1) != 0 {
            continue;
        }
        let x = y >> (n - k);
        let op = charlie.effect(u, k, x).kron(&bob.effect(u, k, x)).kron(&ComplexMatrix::projector(&ubar.col(y)));
        moe += op.trace_product(&rho).re;
    }

    Ok(BhChainReport {
        value: bh_member_value(g, bob, charlie, u)?,
        epr_postselected: lift * post,
        first_ricochet: first / db as f64,
        second_ricochet: lift * second,
        moe_form: moe,
        n,
        k,
    })
}

/// [`bh_member_chain`] averaged over the scrambler in index order.
pub fn bh_postselection_check(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver) -> Result<BhChainReport> {
    let parts = (0..g.scrambler.len())
        .map(|i| bh_member_chain(g, bob, charlie, &g.scrambler.member(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(average_reports(&parts).expect("scramblers are nonempty"))
}

/// Index-ordered mean of per-member reports.
pub fn average_reports(parts: &[BhChainReport]) -> Option<BhChainReport> {
    let first = parts.first()?;
    let m = parts.len() as f64;
    let avg = |f: fn(&BhChainReport) -> f64| parts.iter().map(f).sum::<f64>() / m;
    Some(BhChainReport {
        value: avg(|r| r.value),
        epr_postselected: avg(|r| r.epr_postselected),
        first_ricochet: avg(|r| r.first_ricochet),
        second_ricochet: avg(|r| r.second_ricochet),
        moe_form: avg(|r| r.moe_form),
        n: first.n,
        k: first.k,
    })
}
