//! Random matrices for tests and experiments.

use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{c64, ComplexMatrix, C64};
use super::norms::{from_nalgebra, to_nalgebra};

/// Complex Ginibre matrix with independent standard complex normal entries
/// (real and imaginary parts each of variance 1/2).
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = Float::sqrt(0.5);
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c64(re * s, im * s)
    })
}

/// Haar-distributed `d × d` unitary: QR of a Ginibre matrix with the phases of
/// `R`'s diagonal pushed back into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    isometry_from_qr(&ginibre(d, d, rng))
}

/// Haar-random isometry with `cols ≤ rows`: the first `cols` columns of a Haar unitary.
pub fn haar_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    assert!(cols <= rows, "an isometry cannot widen its input");
    isometry_from_qr(&ginibre(rows, cols, rng))
}

fn isometry_from_qr(g: &ComplexMatrix) -> ComplexMatrix {
    let qr = to_nalgebra(g).qr();
    let q = from_nalgebra(&qr.q());
    let r = qr.r();
    let phases: Vec<C64> = (0..g.cols())
        .map(|j| {
            let z = r[(j, j)];
            if z.norm() == 0.0 { c64(1.0, 0.0) } else { z / z.norm() }
        })
        .collect();
    ComplexMatrix::from_fn(q.rows(), q.cols(), |i, j| q.get(i, j) * phases[j])
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Random PSD matrix `G G†` of rank at most `rank`.
pub fn psd<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, rank, rng);
    &g * &g.adjoint()
}

/// Random density matrix of rank at most `rank`.
pub fn density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let p = psd(d, rank, rng);
    let tr = p.trace().re;
    p.scale_real(1.0 / tr)
}

/// Random complex unit vector.
pub fn unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v = ginibre(d, 1, rng).into_data();
    let n = super::matrix::vnorm(&v);
    v.into_iter().map(|z| z / n).collect()
}

/// Random real orthogonal matrix (Haar on O(d)), via QR of a real Gaussian matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| c64(rng.sample(StandardNormal), 0.0));
    let q = isometry_from_qr(&g);
    // QR of a real matrix stays real up to roundoff; drop the residue.
    q.map(|z| c64(z.re, 0.0))
}
