use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::RngCore;

use super::moe::MOEGame;
use super::phase::binary_phase_unitary;
use crate::error::{domain, Result};
use crate::rng::trial_rng;

/// Desk-scale limit on `m + n`.
pub const MAX_SALTED_BITS: usize = 20;

/// One run of the salted-overlap experiment: `trials` random truth tables on
/// `m + n` bits, the top `m` bits selecting the salt.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaltedOverlapConfig {
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl SaltedOverlapConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m + self.n > MAX_SALTED_BITS {
            return Err(domain("need n ≥ 1 and m + n ≤ 20"));
        }
        Ok(())
    }

    /// `2 · 2^{-n/2} · √(m+n)`.
    pub fn bound(&self) -> f64 {
        2.0 * Float::powf(2.0, -(self.n as f64) / 2.0) * Float::sqrt((self.m + self.n) as f64)
    }

    /// The truth table of trial `index`; entry `(s << n) | u` is `F(s, u)`.
    pub fn table(&self, index: u64) -> Vec<bool> {
        let mut rng = trial_rng(self.seed, index);
        let size = 1usize << (self.m + self.n);
        let mut out = Vec::with_capacity(size);
        while out.len() < size {
            let word = rng.next_u64();
            out.extend((0..64.min(size - out.len())).map(|b| word >> b & 1 == 1));
        }
        out
    }
}

fn walsh_hadamard(v: &mut [f64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// `max_{s≠s', w} |E_u (-1)^{⟨w,u⟩ + f_s(u) + f_{s'}(u)}|`, or `None` when there
/// is a single salt and hence no pair.
pub fn max_salted_overlap(table: &[bool], m: usize, n: usize) -> Option<f64> {
    let size = 1usize << n;
    assert_eq!(table.len(), size << m, "table length must be 2^(m+n)");
    let salts = 1usize << m;
    if salts < 2 {
        return None;
    }
    let mut best: f64 = 0.0;
    let mut buf = vec![0.0; size];
    for s in 0..salts {
        for s2 in s + 1..salts {
            for (u, slot) in buf.iter_mut().enumerate() {
                *slot = if table[s * size + u] ^ table[s2 * size + u] { -1.0 } else { 1.0 };
            }
            walsh_hadamard(&mut buf);
            best = buf.iter().fold(best, |acc, v| acc.max(v.abs()));
        }
    }
    Some(best / size as f64)
}

/// Per-trial maxima and the fraction of trials at or under the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SaltedOverlapStats {
    pub bound: f64,
    /// `None` entries mark vacuous trials (single salt).
    pub maxima: Vec<Option<f64>>,
}

impl SaltedOverlapStats {
    pub fn vacuous(&self) -> bool {
        self.maxima.iter().all(Option::is_none)
    }

    pub fn below(&self) -> usize {
        self.maxima.iter().flatten().filter(|&&v| v <= self.bound).count()
    }

    /// Fraction of non-vacuous trials at or under the bound (`1` if all are vacuous).
    pub fn fraction_below(&self) -> f64 {
        let counted = self.maxima.iter().flatten().count();
        if counted == 0 { 1.0 } else { self.below() as f64 / counted as f64 }
    }
}

/// One trial of the experiment, suitable for running trials independently.
pub fn salted_overlap_trial(cfg: &SaltedOverlapConfig, index: u64) -> Option<f64> {
    max_salted_overlap(&cfg.table(index), cfg.m, cfg.n)
}

/// All trials in index order.
pub fn salted_overlap_experiment(cfg: &SaltedOverlapConfig) -> Result<SaltedOverlapStats> {
    cfg.validate()?;
    let maxima = (0..cfg.trials as u64).map(|i| salted_overlap_trial(cfg, i)).collect();
    Ok(SaltedOverlapStats { bound: cfg.bound(), maxima })
}

/// The single-copy monogamy game with one question per salt: Alice measures in
/// the basis of binary phase states of `f_s = F(s, ·)`.
pub fn salted_phase_game(table: &[bool], m: usize, n: usize) -> Result<MOEGame> {
    let size = 1usize << n;
    if table.len() != size << m {
        return Err(domain("table length must be 2^(m+n)"));
    }
    let bases: Vec<_> = table.chunks(size).map(|f| binary_phase_unitary(f).conj()).collect();
    MOEGame::from_bases(&bases)
}
