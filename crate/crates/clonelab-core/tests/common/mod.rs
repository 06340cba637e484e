//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use clonelab_core::matcore::{c64, ComplexMatrix, C64};
use rand::Rng;

/// Singular values by one-sided Jacobi (Hestenes) rotations, descending.
///
/// Written independently of the library's SVD path to serve as an oracle.
pub fn jacobi_singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let a = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    let (rows, cols) = (a.rows(), a.cols());
    let mut colv: Vec<Vec<C64>> = (0..cols).map(|j| (0..rows).map(|i| a.get(i, j)).collect()).collect();
    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colv[p].iter().zip(&colv[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let xp = colv[p][i];
                    let xq = colv[q][i] * phase.conj();
                    colv[p][i] = xp * c - xq * s;
                    colv[q][i] = (xp * s + xq * c) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colv.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Random matrix rescaled to operator norm exactly `target`.
pub fn random_with_norm<R: Rng>(rows: usize, cols: usize, target: f64, rng: &mut R) -> ComplexMatrix {
    let m = random_matrix(rows, cols, rng);
    let n = jacobi_singular_values(&m)[0];
    m.scale_real(target / n)
}

/// Entry of `A ⊗ B` from the index formula.
pub fn kron_entry(a: &ComplexMatrix, b: &ComplexMatrix, row: usize, col: usize) -> C64 {
    a.get(row / b.rows(), col / b.cols()) * b.get(row % b.rows(), col % b.cols())
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Length of the longest strictly decreasing subsequence.
pub fn longest_decreasing(p: &[usize]) -> usize {
    let mut best = vec![1usize; p.len()];
    for i in 0..p.len() {
        for j in 0..i {
            if p[j] > p[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Haar frame potential at order `t` in dimension `d`, counted as permutations of
/// `t` letters without a decreasing subsequence longer than `d`.
pub fn frame_potential_oracle(d: usize, t: usize) -> f64 {
    permutations(t).iter().filter(|p| longest_decreasing(p) <= d).count() as f64
}

/// Dense `Ξ = Σ_{x,z} |ξ_{x,z}⟩⟨ξ_{x,z}|` in type ordering: query positions
/// `(c_1 … c_{t+1}, a'_1 … a'_t)` followed by the packed player auxiliaries.
///
/// Built entry by entry from the amplitude formula, with no shared code path
/// with the library's `B_μ` or `Ξ` builders.
pub fn xi_oracle(qs: &[ComplexMatrix], n: usize, t: usize, a: usize) -> ComplexMatrix {
    let big_n = 1usize << n;
    let dp = 1usize << (a + 1);
    let r = 2 * t + 1;
    let m = dp.pow(t as u32 + 1);
    let dim = big_n.pow(r as u32) * m;
    let split = |mut idx: usize, base: usize, len: usize| {
        let mut d = vec![0; len];
        for k in (0..len).rev() {
            d[k] = idx % base;
            idx /= base;
        }
        d
    };
    let amp = 1.0 / (big_n.pow(t as u32) as f64).sqrt();
    let mut vecs = Vec::new();
    for x in 0..big_n {
        for zi in 0..m {
            let z = split(zi, dp, t + 1);
            let mut v = vec![c64(0.0, 0.0); dim];
            for (idx, slot) in v.iter_mut().enumerate() {
                let q = split(idx / m, big_n, r);
                let w = split(idx % m, dp, t + 1);
                let mut val = c64(amp, 0.0);
                for i in 0..=t {
                    val *= qs[i].get(x * dp + z[i], q[i] * dp + w[i]).conj();
                }
                let parity: u32 = (t + 1..r).map(|j| (q[j] & x).count_ones()).sum();
                if parity % 2 == 1 {
                    val = -val;
                }
                *slot = val;
            }
            vecs.push(v);
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| vecs.iter().map(|v| v[i] * v[j].conj()).sum())
}

/// Dense diagonal 0/1 matrix from a membership test on flat indices.
pub fn diag_projector(dim: usize, member: impl Fn(usize) -> bool) -> ComplexMatrix {
    let d: Vec<C64> = (0..dim).map(|i| c64(if member(i) { 1.0 } else { 0.0 }, 0.0)).collect();
    ComplexMatrix::diag(&d)
}
