use anyhow::Result;
use clonelab_core::games::{
    cloning_value, counterexample_strategy, hadamard_transform, monogamy_form_value, pairwise_overlap, parallel_repeat,
    restricted_value, salted_overlap_trial, tfkw_bound, verify_tcopy_chain, Channel, CloningGame, CloningStrategy,
    MOEGame, RestrictedStrategy, SaltedOverlapConfig,
};
use clonelab_core::matcore::random::{haar_orthogonal, haar_unitary};
use clonelab_core::matcore::ComplexMatrix;
use clonelab_core::rng::Rng;
use clonelab_core::typesys::{FunctionFamily, PlayerLayout};
use clonelab_core::{TOL_IDENT, TOL_INEQ};
use rand::Rng as _;

use super::{par_trials, Ctx};
use crate::args::{Bb84Args, ChainArgs, CounterexampleArgs, EquivArgs, SaltedArgs};
use crate::table::{Cell, Check, Report, Table};

/// Projective measurement with `outcomes` elements: the columns of a Haar
/// unitary dealt to outcomes at random, so some outcomes may be empty.
pub(crate) fn random_projective(d: usize, outcomes: usize, rng: &mut Rng) -> Vec<ComplexMatrix> {
    let v = haar_unitary(d, rng);
    let mut out = vec![ComplexMatrix::zeros(d, d); outcomes];
    for j in 0..d {
        let x = rng.random_range(0..outcomes);
        out[x] = &out[x] + &ComplexMatrix::projector(&v.col(j));
    }
    out
}

fn balanced_projective(d: usize, outcomes: usize, rng: &mut Rng) -> Vec<ComplexMatrix> {
    let v = haar_unitary(d, rng);
    let k = d / outcomes;
    (0..outcomes)
        .map(|x| (x * k..(x + 1) * k).fold(ComplexMatrix::zeros(d, d), |acc, j| &acc + &ComplexMatrix::projector(&v.col(j))))
        .collect()
}

/// Random channel into `t + 1` player registers, Haar pre-measurement
/// unitaries and random control bits.
pub(crate) fn random_restricted(layout: PlayerLayout, rng: &mut Rng) -> Result<RestrictedStrategy> {
    let d_in = 1 << (layout.n * layout.t);
    let d_out = layout.player_dim().pow(layout.t as u32 + 1);
    let kraus = rng.random_range(1..=3);
    let channel = Channel::random(d_in, d_out, kraus, rng)?;
    let qs = (0..=layout.t).map(|_| haar_unitary(layout.player_dim(), rng)).collect();
    let controls = (0..=layout.t).map(|_| rng.random_bool(0.5)).collect();
    Ok(RestrictedStrategy::new(channel, layout, qs, controls)?)
}

pub fn bb84(args: &Bb84Args, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let r = args.r as i32;
    let g = parallel_repeat(&MOEGame::bb84(), r as usize)?;
    let mut table = Table::new(&[
        "kind", "index", "questions", "answers", "dim", "tfkw_bound", "overlap", "reference", "pass",
    ]);
    let (tfkw, overlap) = (tfkw_bound(&g)?, pairwise_overlap(&g)?);
    let want_overlap = 0.5f64.powf(r as f64 / 2.0);
    let q = 0.5f64.powi(r);
    let want_tfkw = q + (1.0 - q) * want_overlap;
    let ok = (tfkw - want_tfkw).abs() <= tol && (overlap - want_overlap).abs() <= tol;
    table.push(vec![
        "bb84".into(),
        0usize.into(),
        g.questions().into(),
        g.answers().into(),
        g.dim_a().into(),
        tfkw.into(),
        overlap.into(),
        want_overlap.into(),
        ok.into(),
    ]);

    let rows = par_trials(ctx.trials(0), |i| {
        let mut rng = ctx.rng(i);
        let answers: usize = rng.random_range(2..=8);
        let d = answers * rng.random_range(1..=2);
        let questions: usize = rng.random_range(2..=3);
        let ms = (0..questions).map(|_| random_projective(d, answers, &mut rng)).collect();
        let g = MOEGame::new(d, ms)?;
        let (tfkw, overlap) = (tfkw_bound(&g)?, pairwise_overlap(&g)?);
        let floor = 1.0 / (answers as f64).sqrt();
        Ok(vec![
            Cell::from("random"),
            (i + 1).into(),
            questions.into(),
            answers.into(),
            d.into(),
            tfkw.into(),
            overlap.into(),
            floor.into(),
            (overlap >= floor - tol).into(),
        ])
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "bb84", seed: ctx.seed, tolerance: tol, table, checks })
}

fn random_cloning_instance(n: usize, t: usize, rng: &mut Rng) -> Result<(CloningGame, CloningStrategy)> {
    let d = 1 << n;
    let us = (0..3).map(|_| haar_unitary(d, rng)).collect();
    let g = CloningGame::new(n, t, us)?;
    let player_dims: Vec<usize> = (0..=t).map(|_| d * rng.random_range(1..=2)).collect();
    let d_out: usize = player_dims.iter().product();
    let channel = Channel::random(1 << (n * t), d_out, 2, rng)?;
    let measurements = (0..3)
        .map(|_| player_dims.iter().map(|&pd| balanced_projective(pd, d, rng)).collect())
        .collect();
    Ok((g, CloningStrategy { channel, player_dims, measurements }))
}

pub fn equiv_check(args: &EquivArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let shapes: Vec<(usize, usize)> =
        (1..=args.n_max as usize).flat_map(|n| (1..=args.t_max as usize).map(move |t| (n, t))).collect();
    let mut table = Table::new(&["index", "n", "t", "direct", "monogamy_form", "residual", "pass"]);
    let rows = par_trials(ctx.trials(200), |i| {
        let (n, t) = shapes[i % shapes.len()];
        let (g, s) = random_cloning_instance(n, t, &mut ctx.rng(i))?;
        let direct = cloning_value(&g, &s)?;
        let form = monogamy_form_value(&g, &s)?;
        let res = (direct - form).abs();
        Ok(vec![i.into(), n.into(), t.into(), direct.into(), form.into(), res.into(), (res <= tol).into()])
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "equiv-check", seed: ctx.seed, tolerance: tol, table, checks })
}

const HEAVY_SHAPE: (usize, usize, usize) = (2, 2, 1);

/// Shape of trial `i`: the first `heavy` trials take the costly shape when it
/// is in range, the rest cycle through the others.
fn chain_shape(args: &ChainArgs, i: usize) -> (usize, usize, usize) {
    let all: Vec<_> = (1..=args.n_max as usize)
        .flat_map(|n| (1..=args.t_max as usize).flat_map(move |t| (0..=args.a_max as usize).map(move |a| (n, t, a))))
        .collect();
    if args.value_only {
        return all[i % all.len()];
    }
    let light: Vec<_> = all.iter().copied().filter(|&s| s != HEAVY_SHAPE).collect();
    let heavy = if all.contains(&HEAVY_SHAPE) { args.heavy } else { 0 };
    if i < heavy {
        HEAVY_SHAPE
    } else {
        light[(i - heavy) % light.len()]
    }
}

pub fn tcopy_chain(args: &ChainArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let header: &[&str] = if args.value_only {
        &["index", "n", "t", "a", "direct", "typed", "residual", "pass"]
    } else {
        &[
            "index",
            "n",
            "t",
            "a",
            "direct",
            "typed",
            "subtype_norm_excess",
            "gamma_trace_excess",
            "choi_marginal_deviation",
            "diagonal_gap",
            "final_bound",
            "failures",
            "pass",
        ]
    };
    let mut table = Table::new(header);
    let rows = par_trials(ctx.trials(200), |i| {
        let (n, t, a) = chain_shape(args, i);
        let s = random_restricted(PlayerLayout { n, t, a }, &mut ctx.rng(i))?;
        let family = FunctionFamily::exhaustive(n);
        let head: Vec<Cell> = vec![i.into(), n.into(), t.into(), a.into()];
        if args.value_only {
            let v = restricted_value(&family, &s)?;
            let ok = v.family_exact && v.residual() <= tol;
            return Ok([head, vec![v.direct.into(), v.typed.into(), v.residual().into(), ok.into()]].concat());
        }
        let rep = verify_tcopy_chain(&family, &s)?;
        let failures = rep.failures(tol);
        Ok([
            head,
            vec![
                rep.direct.into(),
                rep.typed.into(),
                rep.subtype_norm_excess.into(),
                rep.gamma_trace_excess.into(),
                rep.choi_marginal_deviation.into(),
                rep.diagonal_gap.into(),
                rep.final_bound.into(),
                failures.join(";").into(),
                failures.is_empty().into(),
            ],
        ]
        .concat())
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "tcopy-chain", seed: ctx.seed, tolerance: tol, table, checks })
}

pub fn salted_overlap(args: &SaltedArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let cfg = SaltedOverlapConfig { m: args.m, n: args.n, trials: ctx.trials(200), seed: ctx.seed };
    cfg.validate()?;
    if !(0.0..=1.0).contains(&args.fraction) {
        anyhow::bail!("--fraction must lie in [0, 1]");
    }
    let bound = cfg.bound();
    let maxima = par_trials(cfg.trials, |i| Ok(salted_overlap_trial(&cfg, i as u64)))?;
    let mut table = Table::new(&["index", "max_overlap", "bound", "pass"]);
    let (mut counted, mut below) = (0usize, 0usize);
    for (i, m) in maxima.iter().enumerate() {
        let (cell, ok) = match m {
            Some(v) => {
                counted += 1;
                let ok = *v <= bound;
                below += ok as usize;
                (Cell::from(*v), ok)
            }
            None => (Cell::from("vacuous"), true),
        };
        table.push(vec![i.into(), cell, bound.into(), ok.into()]);
    }
    let frac = if counted == 0 { 1.0 } else { below as f64 / counted as f64 };
    let checks = vec![Check::new(
        "fraction of trials under the bound",
        frac >= args.fraction,
        format!("{below} of {counted} trials, need at least {}", args.fraction),
    )];
    Ok(Report { subcommand: "salted-overlap", seed: ctx.seed, tolerance: tol, table, checks })
}

/// The `2^n` products of `{I, H}` on `n` qubits.
fn hadamard_bases(n: usize) -> Vec<ComplexMatrix> {
    let h = hadamard_transform(1);
    (0..1usize << n)
        .map(|theta| {
            (0..n).fold(ComplexMatrix::identity(1), |acc, q| {
                let f = if theta >> (n - 1 - q) & 1 == 1 { h.clone() } else { ComplexMatrix::identity(2) };
                acc.kron(&f)
            })
        })
        .collect()
}

pub fn counterexample(args: &CounterexampleArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_IDENT);
    let t = args.t as usize;
    let mut table = Table::new(&[
        "kind",
        "index",
        "n",
        "t",
        "y",
        "max_trace_deviation",
        "expected_trace",
        "norm_expression",
        "norm_floor",
        "pass",
    ]);
    let push = |table: &mut Table, kind: &str, i: usize, n: usize, y: usize, bases: &[ComplexMatrix]| -> Result<()> {
        let rep = counterexample_strategy(bases, t, y)?;
        table.push(vec![
            kind.into(),
            i.into(),
            n.into(),
            t.into(),
            y.into(),
            rep.max_trace_deviation().into(),
            rep.expected_trace.into(),
            rep.norm_expression.into(),
            rep.norm_floor.into(),
            rep.passed(tol).into(),
        ]);
        Ok(())
    };
    let mut index = 0;
    for n in 1..=args.n_max as usize {
        let bases = hadamard_bases(n);
        for y in 0..1usize << n {
            push(&mut table, "hadamard", index, n, y, &bases)?;
            index += 1;
        }
    }
    let random = par_trials(ctx.trials(0), |i| {
        let mut rng = ctx.rng(i);
        let n = rng.random_range(1..=args.n_max as usize);
        let count = rng.random_range(2..=4);
        let bases: Vec<_> = (0..count).map(|_| haar_orthogonal(1 << n, &mut rng)).collect();
        Ok((n, rng.random_range(0..1usize << n), bases))
    })?;
    for (i, (n, y, bases)) in random.into_iter().enumerate() {
        push(&mut table, "random-real", index + i, n, y, &bases)?;
    }
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "counterexample", seed: ctx.seed, tolerance: tol, table, checks })
}
