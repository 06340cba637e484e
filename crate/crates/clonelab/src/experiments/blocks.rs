use anyhow::Result;
use clonelab_core::matcore::random::ginibre;
use clonelab_core::matcore::{
    assemble_block_tensor, block_tensor_preconditions, c64, join_blocks, op_norm, BlockSpec, ComplexMatrix,
    ScalarGrid, C64,
};
use clonelab_core::rng::Rng;
use clonelab_core::TOL_INEQ;
use rand::Rng as _;

use super::{par_trials, Ctx};
use crate::table::{Cell, Check, Report, Table};

fn with_norm(rows: usize, cols: usize, norm: f64, rng: &mut Rng) -> Result<ComplexMatrix> {
    let g = ginibre(rows, cols, rng);
    Ok(g.scale_real(norm / op_norm(&g)?))
}

/// `A` contractive, every block column of `B` contractive, `|γ| ≤ 1`; up to
/// three block rows and columns, each block side at most three.
fn random_instance(rng: &mut Rng) -> Result<(ComplexMatrix, BlockSpec, ComplexMatrix, BlockSpec, ScalarGrid)> {
    let (r, c) = (rng.random_range(1..=3), rng.random_range(1..=3));
    let mut parts = |k: usize| -> Vec<usize> { (0..k).map(|_| rng.random_range(1..=3)).collect() };
    let a_spec = BlockSpec::new(parts(r), parts(c))?;
    let b_spec = BlockSpec::new(parts(r), parts(c))?;
    let a = with_norm(a_spec.total_rows(), a_spec.total_cols(), rng.random_range(0.3..=1.0), rng)?;
    let cols = b_spec
        .col_partition()
        .iter()
        .map(|&w| with_norm(b_spec.total_rows(), w, rng.random_range(0.3..=1.0), rng))
        .collect::<Result<Vec<_>>>()?;
    let b = join_blocks(&[cols])?;
    let gamma: Vec<C64> =
        (0..r * c).map(|_| C64::from_polar(rng.random_range(0.0..=1.0), rng.random_range(0.0..std::f64::consts::TAU))).collect();
    Ok((a, a_spec, b, b_spec, ScalarGrid::new(r, c, gamma)?))
}

fn row(kind: &str, i: usize, a_spec: &BlockSpec, pre: (f64, f64, f64), norm: f64, ok: bool) -> Vec<Cell> {
    vec![
        kind.into(),
        i.into(),
        a_spec.block_rows().into(),
        a_spec.block_cols().into(),
        pre.0.into(),
        pre.1.into(),
        pre.2.into(),
        norm.into(),
        ok.into(),
    ]
}

pub fn blocknorm_check(ctx: Ctx) -> Result<Report> {
    let tol = ctx.tol(TOL_INEQ);
    let mut table = Table::new(&[
        "kind", "index", "block_rows", "block_cols", "a_norm", "max_b_column_norm", "max_gamma", "op_norm", "pass",
    ]);
    let trials = ctx.trials(1000);
    let rows = par_trials(trials, |i| {
        let (a, sa, b, sb, g) = random_instance(&mut ctx.rng(i))?;
        let pre = block_tensor_preconditions(&a, &sa, &b, &sb, &g)?;
        let norm = op_norm(&assemble_block_tensor(&a, &sa, &b, &sb, &g)?)?;
        let bmax = pre.b_column_norms.iter().copied().fold(0.0, f64::max);
        Ok(row("random", i, &sa, (pre.a_norm, bmax, pre.max_gamma), norm, pre.hold(tol) && norm <= 1.0 + tol))
    })?;
    rows.into_iter().for_each(|r| table.push(r));

    // A = [1], B = (1, 1)ᵀ as a single block column of norm √2: only the
    // block-column precondition fails, and the norm is √2.
    let a = ComplexMatrix::identity(1);
    let sa = BlockSpec::new(vec![1], vec![1])?;
    let b = ComplexMatrix::from_fn(2, 1, |_, _| c64(1.0, 0.0));
    let sb = BlockSpec::new(vec![2], vec![1])?;
    let g = ScalarGrid::ones(1, 1);
    let pre = block_tensor_preconditions(&a, &sa, &b, &sb, &g)?;
    let norm = op_norm(&assemble_block_tensor(&a, &sa, &b, &sb, &g)?)?;
    let only_second = pre.a_norm <= 1.0 + tol && pre.max_gamma <= 1.0 + tol && pre.first_bad_column(tol) == Some(0);
    table.push(row("violation", trials, &sa, (pre.a_norm, pre.b_column_norms[0], pre.max_gamma), norm, only_second && norm > 1.0 + tol));

    let checks = vec![Check::all_rows(&table)];
    Ok(Report { subcommand: "blocknorm-check", seed: ctx.seed, tolerance: tol, table, checks })
}
