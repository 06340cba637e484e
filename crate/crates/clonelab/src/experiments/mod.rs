//! One function per subcommand, each returning a [`Report`].
//!
//! Trials are independent: trial `i` draws from `trial_rng(seed, i)` and the
//! results are collected in index order, so the output does not depend on how
//! rayon schedules them.

mod blocks;
mod designs;
mod games;
mod reductions;
mod typesys;

use anyhow::Result;
use clonelab_core::rng::{trial_rng, Rng};
use rayon::prelude::*;

use crate::args::Command;
use crate::table::Report;

pub use designs::schur_weyl_frame_potential;

/// Seed, trial count and tolerance overrides shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ctx {
    pub seed: u64,
    pub trials: Option<usize>,
    pub tol: Option<f64>,
}

impl Ctx {
    pub fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn rng(&self, index: usize) -> Rng {
        trial_rng(self.seed, index as u64)
    }
}

/// `f(0), …, f(count - 1)` evaluated on the rayon pool, in index order.
pub(crate) fn par_trials<T, F>(count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect()
}

pub fn dispatch(cmd: &Command, ctx: Ctx) -> Result<Report> {
    match cmd {
        Command::Bb84(a) => games::bb84(a, ctx),
        Command::TwirlCheck(a) => typesys::twirl_check(a, ctx),
        Command::BlocknormCheck => blocks::blocknorm_check(ctx),
        Command::SubtypeAudit(a) => typesys::subtype_audit(a, ctx),
        Command::EquivCheck(a) => games::equiv_check(a, ctx),
        Command::TcopyChain(a) => games::tcopy_chain(a, ctx),
        Command::DesignCheck(a) => designs::design_check(a, ctx),
        Command::Wc2ac(a) => reductions::wc2ac(a, ctx),
        Command::Blackhole(a) => reductions::blackhole(a, ctx),
        Command::SaltedOverlap(a) => games::salted_overlap(a, ctx),
        Command::Counterexample(a) => games::counterexample(a, ctx),
    }
}
