mod common;

use clonelab_core::matcore::random::{haar_unitary, hermitian, psd};
use clonelab_core::matcore::*;
use clonelab_core::rng::rng_from_seed;
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn ket(d: usize, i: usize) -> Vec<C64> {
    basis(d, i)
}

#[test]
fn op_norm_small_examples() {
    assert!((op_norm(&ComplexMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
    let m = ComplexMatrix::from_real(2, 2, &[0.0, 2.0, 0.0, 0.0]).unwrap();
    assert!((op_norm(&m).unwrap() - 2.0).abs() < 1e-12);
    assert!(op_norm(&ComplexMatrix::zeros(0, 3)).is_err());
}

#[test]
fn op_norm_matches_jacobi_oracle() {
    let mut rng = rng_from_seed(11);
    for _ in 0..50 {
        let m = random_matrix(5, 5, &mut rng);
        let want = jacobi_singular_values(&m)[0];
        assert!((op_norm(&m).unwrap() - want).abs() < 1e-9);
        let rect = random_matrix(3, 7, &mut rng);
        let sv = singular_values(&rect).unwrap();
        let oracle = jacobi_singular_values(&rect);
        for (a, b) in sv.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

#[test]
fn dense_and_power_paths_agree() {
    let mut rng = rng_from_seed(12);
    for &(r, c) in &[(8, 8), (70, 66), (65, 90), (100, 30)] {
        let m = random_matrix(r, c, &mut rng);
        let dense = op_norm_dense(&m).unwrap();
        let power = op_norm_power(&m, POWER_TOL, POWER_MAX_ITER).unwrap();
        assert!(power.converged);
        assert!((dense - power.value).abs() <= 1e-8 * dense, "{dense} vs {}", power.value);
        assert!((op_norm(&m).unwrap() - dense).abs() <= 1e-8 * dense);
    }
}

#[test]
fn frobenius_examples_and_cauchy_schwarz() {
    assert!((frobenius_norm(&ComplexMatrix::identity(5)) - 5f64.sqrt()).abs() < 1e-15);
    assert_eq!(frobenius_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
    let mut rng = rng_from_seed(13);
    for _ in 0..100 {
        let a = random_matrix(4, 3, &mut rng);
        let b = random_matrix(4, 3, &mut rng);
        let ip = a.inner(&b).norm();
        assert!(ip <= a.frobenius_norm() * b.frobenius_norm() + 1e-12);
    }
}

#[test]
fn tensor_index_oracle_and_multiplicativity() {
    assert_eq!(tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)), ComplexMatrix::identity(6));
    let d1 = ComplexMatrix::diag(&[c64(2.0, 0.0), c64(1.0, 0.0)]);
    let d2 = ComplexMatrix::diag(&[c64(3.0, 0.0), c64(1.0, 0.0)]);
    assert!((op_norm(&tensor(&d1, &d2)).unwrap() - 6.0).abs() < 1e-12);
    let mut rng = rng_from_seed(14);
    for _ in 0..20 {
        let a = random_matrix(2, 3, &mut rng);
        let b = random_matrix(3, 2, &mut rng);
        let k = tensor(&a, &b);
        for r in 0..k.rows() {
            for c in 0..k.cols() {
                assert!((k.get(r, c) - kron_entry(&a, &b, r, c)).norm() < 1e-15);
            }
        }
        let lhs = op_norm(&k).unwrap();
        let rhs = op_norm(&a).unwrap() * op_norm(&b).unwrap();
        assert!((lhs - rhs).abs() < 1e-9);
    }
}

#[test]
fn partial_trace_examples() {
    let p0 = ComplexMatrix::projector(&ket(2, 0));
    let p1 = ComplexMatrix::projector(&ket(2, 1));
    let dims = DimSpec::new(vec![2, 2]).unwrap();
    assert_eq!(partial_trace(&p0.kron(&p1), &dims, &[0]).unwrap(), p0);
    // Unnormalized Ω = |00⟩ + |11⟩.
    let omega = vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)];
    let red = partial_trace(&ComplexMatrix::projector(&omega), &dims, &[0]).unwrap();
    assert!(red.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    assert!(partial_trace(&ComplexMatrix::identity(3), &dims, &[0]).is_err());
}

#[test]
fn partial_trace_of_products_and_vector_form() {
    let mut rng = rng_from_seed(15);
    let a = random_matrix(2, 2, &mut rng);
    let b = random_matrix(3, 3, &mut rng);
    let c = random_matrix(2, 2, &mut rng);
    let dims = DimSpec::new(vec![2, 3, 2]).unwrap();
    let m = ComplexMatrix::kron_all([&a, &b, &c]);
    let got = partial_trace(&m, &dims, &[0, 2]).unwrap();
    let want = a.kron(&c).scale(b.trace());
    assert!(got.max_abs_diff(&want) < 1e-12);
    let v1: Vec<C64> = (0..12).map(|i| c64(i as f64, 1.0)).collect();
    let v2: Vec<C64> = (0..12).map(|i| c64(1.0, -(i as f64))).collect();
    let rho = &ComplexMatrix::projector(&v1) + &ComplexMatrix::projector(&v2);
    let direct = partial_trace(&rho, &dims, &[1]).unwrap();
    let via = reduced_from_vectors(&[v1, v2], &dims, &[1]).unwrap();
    assert!(direct.max_abs_diff(&via) < 1e-10);
}

#[test]
fn partial_transpose_examples() {
    let mut rng = rng_from_seed(16);
    let dims = DimSpec::new(vec![2, 3]).unwrap();
    let m = random_matrix(6, 6, &mut rng);
    assert_eq!(partial_transpose(&m, &dims, &[0, 1]).unwrap(), m.transpose());
    assert_eq!(partial_transpose(&m, &dims, &[]).unwrap(), m);
    let once = partial_transpose(&m, &dims, &[1]).unwrap();
    assert_eq!(partial_transpose(&once, &dims, &[1]).unwrap(), m);
    let a = random_matrix(2, 2, &mut rng);
    let b = random_matrix(3, 3, &mut rng);
    let pt = partial_transpose(&a.kron(&b), &dims, &[1]).unwrap();
    assert!(pt.max_abs_diff(&a.kron(&b.transpose())) < 1e-15);
}

#[test]
fn swap_examples() {
    let mut rng = rng_from_seed(17);
    let a = random_matrix(3, 3, &mut rng);
    let b = random_matrix(3, 3, &mut rng);
    let dims = DimSpec::new(vec![3, 3]).unwrap();
    assert!(swap_systems(&a.kron(&b), &dims, 0, 1).unwrap().max_abs_diff(&b.kron(&a)) < 1e-15);
    assert_eq!(swap_systems(&a.kron(&b), &dims, 1, 1).unwrap(), a.kron(&b));
    let dims4 = DimSpec::new(vec![2, 2, 2, 2]).unwrap();
    let m = random_matrix(16, 16, &mut rng);
    let twice = swap_systems(&swap_systems(&m, &dims4, 1, 3).unwrap(), &dims4, 1, 3).unwrap();
    assert_eq!(twice, m);
    // Unequal dimensions: A(2) ⊗ B(3) becomes B ⊗ A.
    let a2 = random_matrix(2, 2, &mut rng);
    let dims23 = DimSpec::new(vec![2, 3]).unwrap();
    assert!(swap_systems(&a2.kron(&b), &dims23, 0, 1).unwrap().max_abs_diff(&b.kron(&a2)) < 1e-15);
}

#[test]
fn vectorization_examples() {
    let v = vectorize(&ComplexMatrix::identity(2));
    assert_eq!(v, vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0)]);
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(vectorize(&ComplexMatrix::unit(3, i, j)), vkron(&ket(3, i), &ket(3, j)));
        }
    }
    let mut rng = rng_from_seed(18);
    for _ in 0..100 {
        let d = rng.random_range(1..=4);
        let (a, b, c) = (random_matrix(d, d, &mut rng), random_matrix(d, d, &mut rng), random_matrix(d, d, &mut rng));
        let lhs = vectorize(&(&(&a * &b) * &c));
        let rhs = abc_apply(&a, &b, &c).unwrap();
        let err = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
    assert!(abc_apply(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3), &ComplexMatrix::identity(2)).is_err());
}

fn random_block_instance(
    rng: &mut impl rand::Rng,
) -> (ComplexMatrix, BlockSpec, ComplexMatrix, BlockSpec, ScalarGrid) {
    let r = rng.random_range(1..=3);
    let c = rng.random_range(1..=3);
    let parts = |n: usize, rng: &mut dyn rand::RngCore| -> Vec<usize> {
        (0..n).map(|_| (rng.next_u32() % 3 + 1) as usize).collect()
    };
    let a_spec = BlockSpec::new(parts(r, rng), parts(c, rng)).unwrap();
    let b_spec = BlockSpec::new(parts(r, rng), parts(c, rng)).unwrap();
    let scale_a = rng.random_range(0.3..=1.0);
    let a = random_with_norm(a_spec.total_rows(), a_spec.total_cols(), scale_a, rng);
    let mut cols = Vec::new();
    for &w in b_spec.col_partition() {
        let s = rng.random_range(0.3..=1.0);
        cols.push(random_with_norm(b_spec.total_rows(), w, s, rng));
    }
    let b = join_blocks(&[cols]).unwrap();
    let gamma = ScalarGrid::new(
        r,
        c,
        (0..r * c)
            .map(|_| C64::from_polar(rng.random_range(0.0..=1.0), rng.random_range(0.0..6.3)))
            .collect(),
    )
    .unwrap();
    (a, a_spec, b, b_spec, gamma)
}

#[test]
fn block_tensor_examples() {
    let mut rng = rng_from_seed(19);
    let u = haar_unitary(2, &mut rng);
    let v = haar_unitary(3, &mut rng);
    let s1 = BlockSpec::new(vec![2], vec![2]).unwrap();
    let s2 = BlockSpec::new(vec![3], vec![3]).unwrap();
    let m = assemble_block_tensor(&u, &s1, &v, &s2, &ScalarGrid::ones(1, 1)).unwrap();
    assert!((op_norm(&m).unwrap() - 1.0).abs() < 1e-12);

    for _ in 0..200 {
        let (a, sa, b, sb, g) = random_block_instance(&mut rng);
        let pre = block_tensor_preconditions(&a, &sa, &b, &sb, &g).unwrap();
        assert!(pre.hold(1e-9));
        let m = assemble_block_tensor(&a, &sa, &b, &sb, &g).unwrap();
        assert!(op_norm(&m).unwrap() <= 1.0 + 1e-9);
        // Doubling one block column of B breaks the second precondition.
        let k = 0;
        let co = sb.col_offsets();
        let scaled = ComplexMatrix::from_fn(b.rows(), b.cols(), |i, j| {
            if j >= co[k] && j < co[k] + sb.col_partition()[k] { b.get(i, j) * 2.0 } else { b.get(i, j) }
        });
        let bad = block_tensor_preconditions(&a, &sa, &scaled, &sb, &g).unwrap();
        if bad.b_column_norms[k] > 1.0 + 1e-9 {
            assert!(!bad.hold(1e-9));
            assert_eq!(bad.first_bad_column(1e-9), Some(k));
        }
    }
    // Ragged block grid.
    assert!(join_blocks(&[vec![ComplexMatrix::zeros(1, 1), ComplexMatrix::zeros(2, 1)]]).is_err());
}

#[test]
fn colwise_tensor_examples() {
    let mut rng = rng_from_seed(20);
    let a = random_matrix(3, 4, &mut rng);
    assert_eq!(block_colwise_tensor(&[a.clone()], &[vec![1, 3]]).unwrap(), a);

    for _ in 0..100 {
        let d = rng.random_range(1..=3);
        let k = rng.random_range(2..=3);
        let mut factors = Vec::new();
        let mut parts = Vec::new();
        for t in 0..k {
            let p: Vec<usize> = (0..d).map(|_| rng.random_range(1..=2)).collect();
            let rows = rng.random_range(1..=3);
            // The first factor is globally contractive; the others only blockwise.
            let f = if t == 0 {
                random_with_norm(rows, p.iter().sum(), 1.0, &mut rng)
            } else {
                let blocks: Vec<ComplexMatrix> = p.iter().map(|&w| random_with_norm(rows, w, 1.0, &mut rng)).collect();
                join_blocks(&[blocks]).unwrap()
            };
            factors.push(f);
            parts.push(p);
        }
        assert!(colwise_preconditions(&factors, &parts).unwrap().hold(1e-9));
        let m = block_colwise_tensor(&factors, &parts).unwrap();
        assert!(op_norm(&m).unwrap() <= 1.0 + 1e-9);
    }

    // All blocks contractive but no factor globally contractive: each block column is
    // the normalized all-ones column, and the product grows like sqrt(n).
    for n in 2..=5 {
        let col = ComplexMatrix::from_fn(n, n, |_, _| c64(1.0 / (n as f64).sqrt(), 0.0));
        let parts = vec![vec![1; n], vec![1; n]];
        let factors = vec![col.clone(), col];
        let pre = colwise_preconditions(&factors, &parts).unwrap();
        assert!((pre.max_block_norm - 1.0).abs() < 1e-12);
        assert!(!pre.hold(1e-9));
        let m = block_colwise_tensor(&factors, &parts).unwrap();
        assert!((op_norm(&m).unwrap() - (n as f64).sqrt()).abs() < 1e-9);
    }
    assert!(block_colwise_tensor(&[ComplexMatrix::zeros(1, 2), ComplexMatrix::zeros(1, 3)], &[vec![2], vec![1, 2]]).is_err());
}

#[test]
fn multi_block_tensor_examples() {
    let mut rng = rng_from_seed(21);
    let spec = BlockSpec::new(vec![1, 2], vec![2, 1]).unwrap();
    let g = ScalarGrid::new(2, 2, (0..4).map(|i| C64::from_polar(0.9, i as f64)).collect()).unwrap();
    let a1 = random_with_norm(3, 3, 1.0, &mut rng);
    let a2 = random_with_norm(3, 3, 1.0, &mut rng);
    // d = 2 coincides with the two-factor assembly.
    let two = multi_block_tensor(&[a1.clone(), a2.clone()], &spec, &g).unwrap();
    let direct = assemble_block_tensor(&a1, &spec, &a2, &spec, &g).unwrap();
    assert!(two.max_abs_diff(&direct) < 1e-15);

    for _ in 0..50 {
        let us: Vec<ComplexMatrix> = (0..3).map(|_| haar_unitary(3, &mut rng)).collect();
        let phases = ScalarGrid::new(2, 2, (0..4).map(|_| C64::from_polar(1.0, rng.random_range(0.0..6.3))).collect()).unwrap();
        let m = multi_block_tensor(&us, &spec, &phases).unwrap();
        assert!(op_norm(&m).unwrap() <= 1.0 + 1e-9);
    }

    let ids = vec![ComplexMatrix::identity(3); 3];
    let m = multi_block_tensor(&ids, &spec, &ScalarGrid::ones(2, 2)).unwrap();
    assert!(m.data().iter().all(|z| z.im == 0.0 && (z.re == 0.0 || z.re == 1.0)));
    for j in 0..m.cols() {
        assert!(m.col(j).iter().filter(|z| z.re == 1.0).count() <= 1);
    }
    for i in 0..m.rows() {
        assert!(m.row(i).iter().filter(|z| z.re == 1.0).count() <= 1);
    }
    assert!((op_norm(&m).unwrap() - 1.0).abs() < 1e-12);
    let wrong = BlockSpec::new(vec![3], vec![3]).unwrap();
    assert!(multi_block_tensor(&ids, &wrong, &ScalarGrid::ones(2, 2)).is_err());
}

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), r * c)
            .prop_map(move |v| ComplexMatrix::new(r, c, v.into_iter().map(|(a, b)| c64(a, b)).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn submatrix_norm_is_monotone(m in matrix_strategy(6), rmask in any::<u8>(), cmask in any::<u8>()) {
        let rows: Vec<usize> = (0..m.rows()).filter(|i| rmask >> i & 1 == 1).collect();
        let cols: Vec<usize> = (0..m.cols()).filter(|j| cmask >> j & 1 == 1).collect();
        prop_assume!(!rows.is_empty() && !cols.is_empty());
        let sub = m.submatrix(&rows, &cols);
        prop_assert!(op_norm(&sub).unwrap() <= op_norm(&m).unwrap() + 1e-12);
    }

    #[test]
    fn l1_row_column_bound(m in matrix_strategy(6)) {
        let bound = (m.max_row_l1() * m.max_col_l1()).sqrt();
        prop_assert!(op_norm(&m).unwrap() <= bound + 1e-12);
    }

    #[test]
    fn hadamard_of_unitaries_has_small_l1(seed in any::<u64>(), d in 1usize..6, k in 2usize..5) {
        let mut rng = rng_from_seed(seed);
        let mut c = haar_unitary(d, &mut rng);
        for _ in 1..k {
            c = c.hadamard(&haar_unitary(d, &mut rng)).unwrap();
        }
        prop_assert!(c.max_row_l1() <= 1.0 + 1e-12);
        prop_assert!(c.max_col_l1() <= 1.0 + 1e-12);
    }

    #[test]
    fn hermitian_psd_inner_product(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = rng_from_seed(seed);
        let a = hermitian(d, &mut rng);
        let b = psd(d, d, &mut rng);
        prop_assert!(a.inner(&b).norm() <= op_norm(&a).unwrap() * b.trace().re + 1e-12);
    }

    #[test]
    fn partial_transpose_is_involutive(seed in any::<u64>()) {
        let mut rng = rng_from_seed(seed);
        let dims = DimSpec::new(vec![2, 3, 2]).unwrap();
        let x = random_matrix(12, 12, &mut rng);
        let which: Vec<usize> = (0..3).filter(|k| seed >> k & 1 == 1).collect();
        let back = partial_transpose(&partial_transpose(&x, &dims, &which).unwrap(), &dims, &which).unwrap();
        prop_assert_eq!(back, x);
    }
}
