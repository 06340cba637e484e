use anyhow::Result;
use clonelab_core::designs::{clifford_ensemble, UnitaryEnsemble};
use clonelab_core::games::Channel;
use clonelab_core::matcore::random::haar_unitary;
use clonelab_core::matcore::ComplexMatrix;
use clonelab_core::reductions::{
    average_case_value, average_reports, bh_member_chain, transform_unchecked, worst_to_average_transform,
    BhChainReport, BlackHoleGame, OracleCall, SingleQueryObserver, MAX_ANCILLAS, MAX_BH_DIM,
};
use clonelab_core::rng::{trial_seed, Rng};
use clonelab_core::typesys::PlayerLayout;
use clonelab_core::TOL_INEQ;
use rand::Rng as _;
use rayon::prelude::*;

use super::games::random_restricted;
use super::{par_trials, Ctx};
use crate::args::{BlackholeArgs, ChannelKind, Wc2acArgs};
use crate::json::{read_matrices, BlackHoleConfig, CallJson, ObserverJson, ScramblerKind};
use crate::table::{Cell, Check, Report, Table};

/// Tolerance for the worst-case/average-case equality.
const WC2AC_TOL: f64 = 1e-10;
/// The `ν = {I}` control must move the value by more than this on some trial.
const CONTROL_GAP: f64 = 1e-3;

pub fn wc2ac(args: &Wc2acArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(WC2AC_TOL);
    let n = args.n as usize;
    let nu = clifford_ensemble(n)?;
    let elements = nu.elements().expect("Clifford ensembles are listed").to_vec();
    let identity = UnitaryEnsemble::explicit(vec![ComplexMatrix::identity(1 << n)], None)?;
    let mut table = Table::new(&[
        "index",
        "n",
        "a",
        "queries",
        "omega_wst",
        "omega_avg",
        "residual",
        "control_deviation",
        "pass",
    ]);
    let rows = par_trials(ctx.trials(20), |i| {
        let mut rng = ctx.rng(i);
        let a = rng.random_range(0..=args.a_max as usize);
        let s = random_restricted(PlayerLayout { n, t: 1, a }, &mut rng)?;
        let v = haar_unitary(1 << n, &mut rng);
        let wst = worst_to_average_transform(&s, &nu)?;
        let omega_wst = wst.value(std::slice::from_ref(&v))?;
        let omega_avg = average_case_value(&s, &elements)?;
        let control = transform_unchecked(&s, &identity)?.value(std::slice::from_ref(&v))?;
        let residual = (omega_wst - omega_avg).abs();
        let same_queries = wst.query_count() == s.query_count();
        Ok(vec![
            i.into(),
            n.into(),
            a.into(),
            wst.query_count().into(),
            omega_wst.into(),
            omega_avg.into(),
            residual.into(),
            (control - omega_avg).abs().into(),
            (residual <= tol && same_queries).into(),
        ])
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    let gap = table.floats("control_deviation").into_iter().flatten().fold(0.0, f64::max);
    let checks = vec![
        Check::all_rows(&table),
        Check::new(
            "identity twirl control deviates",
            gap > CONTROL_GAP,
            format!("largest deviation {gap:.3e}, need more than {CONTROL_GAP:e}"),
        ),
    ];
    Ok(Report { subcommand: "wc2ac", seed: ctx.seed, tolerance: tol, table, checks })
}

fn scrambler(kind: ScramblerKind, n: usize, seed: u64, samples: usize) -> Result<UnitaryEnsemble> {
    Ok(match kind {
        ScramblerKind::Clifford => clifford_ensemble(n)?,
        ScramblerKind::HaarMc => UnitaryEnsemble::haar(1 << n, seed, samples)?,
    })
}

fn random_observer(input_dim: usize, n: usize, rng: &mut Rng) -> Result<SingleQueryObserver> {
    let bits = input_dim.trailing_zeros() as usize;
    let lo = n.saturating_sub(bits).max(1);
    let anc = rng.random_range(lo..=MAX_ANCILLAS.min(lo + 1));
    let reg = input_dim << anc;
    let call = if rng.random_bool(0.5) { OracleCall::Forward } else { OracleCall::Adjoint };
    Ok(SingleQueryObserver::new(input_dim, anc, haar_unitary(reg, rng), haar_unitary(reg, rng), call)?)
}

/// A random Kraus channel with a random horizon/radiation split of `n` or
/// `n + 1` output qubits, and random observers on each side.
fn random_instance(
    n: usize,
    k: usize,
    scrambler: UnitaryEnsemble,
    rng: &mut Rng,
) -> Result<(BlackHoleGame, SingleQueryObserver, SingleQueryObserver)> {
    let d = 1usize << n;
    let max_out_bits = (MAX_BH_DIM / d).trailing_zeros() as usize;
    let out_bits = rng.random_range(n..=n + 1).min(max_out_bits);
    let h_bits = rng.random_range(0..=out_bits);
    let (d_h, d_r) = (1usize << h_bits, 1usize << (out_bits - h_bits));
    let kraus = rng.random_range(1..=3).max(d.div_ceil(d_h * d_r));
    let phi = Channel::random(d, d_h * d_r, kraus, rng)?;
    let g = BlackHoleGame::new(n, k, scrambler, phi, d_h, d_r)?;
    let bob = random_observer(d_r, n, rng)?;
    let charlie = random_observer(d_h, n, rng)?;
    Ok((g, bob, charlie))
}

fn observer(spec: &ObserverJson, input_dim: usize, n: usize, k: usize) -> Result<SingleQueryObserver> {
    Ok(match spec {
        ObserverJson::RadiationDecoder => SingleQueryObserver::radiation_decoder(n, k)?,
        ObserverJson::Oblivious => SingleQueryObserver::oblivious(input_dim, n)?,
        ObserverJson::Constant { x } => SingleQueryObserver::constant(input_dim, n, k, *x)?,
        ObserverJson::Explicit { ancillas, call, v1, v2 } => {
            let call = match call {
                CallJson::Forward => OracleCall::Forward,
                CallJson::Adjoint => OracleCall::Adjoint,
            };
            SingleQueryObserver::new(input_dim, *ancillas, v1.try_into()?, v2.try_into()?, call)?
        }
    })
}

/// The chain averaged over the scrambler, members evaluated in parallel and
/// reduced in index order, with the standard error of the sampled value.
fn evaluate(g: &BlackHoleGame, bob: &SingleQueryObserver, charlie: &SingleQueryObserver) -> Result<(BhChainReport, f64)> {
    let ens = g.scrambler();
    let parts = (0..ens.len())
        .into_par_iter()
        .map(|j| Ok(bh_member_chain(g, bob, charlie, &ens.member(j))?))
        .collect::<Result<Vec<_>>>()?;
    let avg = average_reports(&parts).expect("scramblers are nonempty");
    let m = parts.len() as f64;
    let se = if ens.is_explicit() || parts.len() < 2 {
        0.0
    } else {
        let var = parts.iter().map(|r| (r.value - avg.value).powi(2)).sum::<f64>() / (m - 1.0);
        (var / m).sqrt()
    };
    Ok((avg, se))
}

struct Instance {
    game: BlackHoleGame,
    bob: SingleQueryObserver,
    charlie: SingleQueryObserver,
    kind: ScramblerKind,
    /// The value must equal `2^{-k}`, as for the all-radiated decoder.
    expect_bound: bool,
}

fn bh_row(i: usize, inst: &Instance, tol: f64) -> Result<Vec<Cell>> {
    let g = &inst.game;
    let (rep, se) = evaluate(g, &inst.bob, &inst.charlie)?;
    let bound = 0.5f64.powi(g.k() as i32);
    let max_res = rep.residuals().into_iter().fold(0.0, f64::max);
    let mut ok = rep.passed(tol);
    if inst.expect_bound {
        ok &= (rep.value - bound).abs() <= tol;
    }
    let (d_h, d_r) = g.output_dims();
    let kind = match inst.kind {
        ScramblerKind::Clifford => "clifford",
        ScramblerKind::HaarMc => "haar-mc",
    };
    Ok(vec![
        i.into(),
        g.n().into(),
        g.k().into(),
        kind.into(),
        g.scrambler().len().into(),
        d_h.into(),
        d_r.into(),
        rep.value.into(),
        se.into(),
        bound.into(),
        max_res.into(),
        rep.moe_gap().into(),
        ok.into(),
    ])
}

fn from_config(cfg: &BlackHoleConfig, ctx: Ctx) -> Result<Instance> {
    let samples = cfg.samples.unwrap_or(2000);
    let ens = scrambler(cfg.ensemble, cfg.n, trial_seed(ctx.seed, 0), samples)?;
    let game = if cfg.channel == "identity" {
        BlackHoleGame::all_radiated(cfg.n, cfg.k, ens)?
    } else {
        let kraus = read_matrices(std::path::Path::new(&cfg.channel))?;
        let (d_h, d_r) = (cfg.horizon_dim.unwrap_or(0), cfg.radiation_dim.unwrap_or(0));
        BlackHoleGame::new(cfg.n, cfg.k, ens, Channel::new(kraus)?, d_h, d_r)?
    };
    let (d_h, d_r) = game.output_dims();
    let bob = observer(&cfg.bob, d_r, cfg.n, cfg.k)?;
    let charlie = observer(&cfg.charlie, d_h, cfg.n, cfg.k)?;
    Ok(Instance { game, bob, charlie, kind: cfg.ensemble, expect_bound: false })
}

pub fn blackhole(args: &BlackholeArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let mut table = Table::new(&[
        "index",
        "n",
        "k",
        "ensemble",
        "members",
        "horizon_dim",
        "radiation_dim",
        "value",
        "std_error",
        "bound_2^-k",
        "max_residual",
        "moe_gap",
        "pass",
    ]);
    let (n, k) = (args.n as usize, args.k as usize);
    if let Some(path) = &args.config {
        let inst = from_config(&BlackHoleConfig::read(path)?, ctx)?;
        table.push(bh_row(0, &inst, tol)?);
    } else {
        if k > n {
            anyhow::bail!("need k ≤ n");
        }
        match args.channel {
            ChannelKind::Identity => {
                let ens = scrambler(args.ensemble, n, trial_seed(ctx.seed, 0), args.samples)?;
                let inst = Instance {
                    game: BlackHoleGame::all_radiated(n, k, ens)?,
                    bob: SingleQueryObserver::radiation_decoder(n, k)?,
                    charlie: SingleQueryObserver::oblivious(1, n)?,
                    kind: args.ensemble,
                    expect_bound: true,
                };
                table.push(bh_row(0, &inst, tol)?);
            }
            ChannelKind::Random => {
                // The Clifford group is built once and shared by every trial.
                let shared = match args.ensemble {
                    ScramblerKind::Clifford => Some(clifford_ensemble(n)?),
                    ScramblerKind::HaarMc => None,
                };
                let rows = par_trials(ctx.trials(20), |i| {
                    let ens = match &shared {
                        Some(c) => c.clone(),
                        None => scrambler(args.ensemble, n, trial_seed(ctx.seed, i as u64), args.samples)?,
                    };
                    let (game, bob, charlie) = random_instance(n, k, ens, &mut ctx.rng(i))?;
                    bh_row(i, &Instance { game, bob, charlie, kind: args.ensemble, expect_bound: false }, tol)
                })?;
                rows.into_iter().for_each(|r| table.push(r));
            }
        }
    }
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "blackhole", seed: ctx.seed, tolerance: tol, table, checks })
}
