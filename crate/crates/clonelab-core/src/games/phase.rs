use alloc::vec::Vec;

use num_traits::Float;

use super::cloning::CloningGame;
use crate::error::Result;
use crate::matcore::{ComplexMatrix, C64};
use crate::typesys::{phase_oracle, FunctionFamily};

/// `H^{⊗n}` with entries `2^{-n/2} (-1)^{⟨x,u⟩}`.
pub fn hadamard_transform(n: usize) -> ComplexMatrix {
    let d = 1usize << n;
    let s = 1.0 / Float::sqrt(d as f64);
    ComplexMatrix::from_fn(d, d, |i, j| {
        let sign = if (i & j).count_ones() % 2 == 1 { -s } else { s };
        C64::new(sign, 0.0)
    })
}

/// `U_f H^{⊗n}`: column `x` is the binary phase state `2^{-n/2} Σ_u (-1)^{f(u)+⟨x,u⟩}|u⟩`.
pub fn binary_phase_unitary(table: &[bool]) -> ComplexMatrix {
    let n = table.len().trailing_zeros() as usize;
    &phase_oracle(table) * &hadamard_transform(n)
}

/// The cloning game with one challenge unitary `U_f H^{⊗n}` per function of
/// the family, in the family's order.
pub fn binary_phase_game(family: &FunctionFamily, t: usize) -> Result<CloningGame> {
    let us: Vec<ComplexMatrix> = family.truth_tables()?.iter().map(|f| binary_phase_unitary(f)).collect();
    CloningGame::new(family.n, t, us)
}
