use anyhow::Result;
use clonelab_core::matcore::random::{density, ginibre, psd};
use clonelab_core::typesys::{
    audit_type, enumerate_subtypes, phase_twirl, realizable_types, subtype_reduction_sides, type_block_diagonal,
    BinTypeVec, FunctionFamily, IndexSpace,
};
use clonelab_core::{TOL_IDENT, TOL_INEQ};
use rand::Rng as _;

use super::{par_trials, Ctx};
use crate::args::{AuditArgs, TwirlArgs};
use crate::table::{Cell, Check, Report, Table};

pub fn twirl_check(args: &TwirlArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_IDENT);
    let (n, r, aux) = (args.n as usize, args.r as usize, args.aux as usize);
    let space = IndexSpace::new(1 << n, r, aux)?;
    let family = FunctionFamily::exhaustive(n);
    let mut table = Table::new(&["index", "n", "r", "aux", "residual", "pass"]);
    let rows = par_trials(ctx.trials(100), |i| {
        let o = ginibre(space.dim(), space.dim(), &mut ctx.rng(i));
        let res = phase_twirl(&o, space, &family)?.max_abs_diff(&type_block_diagonal(&o, space)?);
        Ok(vec![i.into(), n.into(), r.into(), aux.into(), res.into(), (res <= tol).into()])
    })?;
    rows.into_iter().for_each(|r| table.push(r));
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "twirl-check", seed: ctx.seed, tolerance: tol, table, checks })
}

fn lambda_text(l: &BinTypeVec) -> String {
    let parts: Vec<String> = l.support().iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn subtype_audit(args: &AuditArgs, ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let mut table = Table::new(&["kind", "index", "alphabet", "r", "lambda", "value", "bound", "detail", "pass"]);

    let cases: Vec<(usize, usize, BinTypeVec)> = (1..=args.max_alphabet as usize)
        .flat_map(|alpha| {
            (1..=args.max_r as usize).flat_map(move |r| realizable_types(alpha, r).into_iter().map(move |l| (alpha, r, l)))
        })
        .collect();
    let audits = par_trials(cases.len(), |i| {
        let (alpha, r, ref lambda) = cases[i];
        let audit = audit_type(lambda, IndexSpace::new(alpha, r, 1)?)?;
        let texts: Vec<String> = enumerate_subtypes(lambda, r).iter().map(|mu| mu.to_text()).collect();
        Ok(vec![
            Cell::from("audit"),
            i.into(),
            alpha.into(),
            r.into(),
            lambda_text(lambda).into(),
            audit.subtype_count.into(),
            audit.count_bound.into(),
            texts.join(" | ").into(),
            audit.passed().into(),
        ])
    })?;
    audits.into_iter().for_each(|r| table.push(r));

    let reductions = par_trials(ctx.trials(100), |i| {
        let mut rng = ctx.rng(i);
        let r = 1 + i % 3;
        let space = IndexSpace::new(2, r, 2)?;
        let d = space.dim();
        let a = psd(d, rng.random_range(1..=d), &mut rng);
        let rho = density(d, rng.random_range(1..=d), &mut rng);
        realizable_types(2, r)
            .iter()
            .map(|lambda| {
                let (lhs, rhs) = subtype_reduction_sides(lambda, &a, &rho, space)?;
                Ok(vec![
                    Cell::from("reduction"),
                    i.into(),
                    2usize.into(),
                    r.into(),
                    lambda_text(lambda).into(),
                    lhs.into(),
                    rhs.into(),
                    "".into(),
                    (lhs <= rhs + tol).into(),
                ])
            })
            .collect::<Result<Vec<_>>>()
    })?;
    reductions.into_iter().flatten().for_each(|r| table.push(r));
    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "subtype-audit", seed: ctx.seed, tolerance: tol, table, checks })
}
