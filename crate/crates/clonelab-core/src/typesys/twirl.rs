use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::RngCore;

use super::types::IndexSpace;
use crate::error::{dimension, domain, Error, Result};
use crate::matcore::{ComplexMatrix, C64};
use crate::rng::rng_from_seed;

/// How a family of Boolean functions on `n` bits is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// All `2^(2^n)` truth tables; only for `n ≤ 2`.
    Exhaustive,
    /// `count` independent uniformly random truth tables.
    Sampled { seed: u64, count: usize },
    /// Low bit of every polynomial of degree `< k` over `GF(2^n)`. The family is
    /// exactly `k`-wise uniform and is enumerated in full, so it needs
    /// `n·k ≤ 16`.
    KWise { k: usize },
}

/// A finite multiset of Boolean functions `f: {0,1}^n → {0,1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionFamily {
    pub n: usize,
    pub mode: FamilyMode,
}

const GF_MODULI: [u32; 9] = [0, 0b11, 0b111, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10000011, 0b100011011];

fn gf_mul(mut a: u32, mut b: u32, n: usize) -> u32 {
    let modulus = GF_MODULI[n];
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> n & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

impl FunctionFamily {
    pub fn exhaustive(n: usize) -> Self {
        Self { n, mode: FamilyMode::Exhaustive }
    }

    /// Whether averaging over the family reproduces the uniform average of every
    /// product of at most `degree` values `(-1)^{f(u)}`.
    pub fn is_exact_to_degree(&self, degree: usize) -> bool {
        match self.mode {
            FamilyMode::Exhaustive => true,
            FamilyMode::KWise { k } => k >= degree,
            FamilyMode::Sampled { .. } => false,
        }
    }

    /// Truth tables, each of length `2^n`, in a fixed order.
    pub fn truth_tables(&self) -> Result<Vec<Vec<bool>>> {
        let size = 1usize << self.n;
        match self.mode {
            FamilyMode::Exhaustive => {
                if self.n > 2 {
                    return Err(domain(format!("exhaustive families are limited to n ≤ 2 (got {})", self.n)));
                }
                Ok((0u32..(1u32 << size)).map(|t| (0..size).map(|u| t >> u & 1 == 1).collect()).collect())
            }
            FamilyMode::Sampled { seed, count } => {
                let mut rng = rng_from_seed(seed);
                Ok((0..count).map(|_| (0..size).map(|_| rng.next_u32() & 1 == 1).collect()).collect())
            }
            FamilyMode::KWise { k } => {
                if self.n == 0 || self.n > 8 || k == 0 || self.n * k > 16 {
                    return Err(domain("k-wise families need 1 ≤ n ≤ 8 and n·k ≤ 16"));
                }
                let q = 1u32 << self.n;
                let count = 1usize << (self.n * k);
                Ok((0..count)
                    .map(|c| {
                        let coeffs: Vec<u32> = (0..k).map(|j| ((c >> (j * self.n)) as u32) & (q - 1)).collect();
                        (0..size as u32)
                            .map(|u| {
                                let v = coeffs.iter().rev().fold(0u32, |acc, &cj| gf_mul(acc, u, self.n) ^ cj);
                                v & 1 == 1
                            })
                            .collect()
                    })
                    .collect())
            }
        }
    }
}

/// Diagonal of the phase oracle `U_f = Σ_u (-1)^{f(u)} |u⟩⟨u|`.
pub fn phase_oracle(table: &[bool]) -> ComplexMatrix {
    let d: Vec<C64> = table.iter().map(|&b| C64::new(if b { -1.0 } else { 1.0 }, 0.0)).collect();
    ComplexMatrix::diag(&d)
}

/// Exact average `E_f[(U_f^{⊗r} ⊗ I_M) O (U_f^{⊗r} ⊗ I_M)]` over the family.
pub fn phase_twirl(o: &ComplexMatrix, space: IndexSpace, family: &FunctionFamily) -> Result<ComplexMatrix> {
    if space.alphabet != 1 << family.n {
        return Err(domain("alphabet size must equal 2^n for the function family"));
    }
    if !o.is_square() || o.rows() != space.dim() {
        return Err(dimension("operator does not match the index space"));
    }
    let tables = family.truth_tables()?;
    if tables.is_empty() {
        return Err(Error::Domain("empty function family".into()));
    }
    let nq = space.queries();
    let digits: Vec<Vec<usize>> = (0..nq).map(|q| space.query_digits(q)).collect();
    let mut weight = vec![0.0f64; nq * nq];
    let mut signs = vec![0.0f64; nq];
    for table in &tables {
        for (q, x) in digits.iter().enumerate() {
            let odd = x.iter().filter(|&&u| table[u]).count() % 2 == 1;
            signs[q] = if odd { -1.0 } else { 1.0 };
        }
        for a in 0..nq {
            for b in 0..nq {
                weight[a * nq + b] += signs[a] * signs[b];
            }
        }
    }
    let norm = 1.0 / tables.len() as f64;
    let m = space.aux;
    Ok(ComplexMatrix::from_fn(o.rows(), o.cols(), |i, j| {
        let w = weight[(i / m) * nq + j / m] * norm;
        if w == 0.0 { C64::zero() } else { o.get(i, j) * w }
    }))
}
