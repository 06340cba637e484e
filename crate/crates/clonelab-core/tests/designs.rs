mod common;

use clonelab_core::designs::*;
use clonelab_core::matcore::random::{ginibre, haar_unitary};
use clonelab_core::matcore::{c64, ComplexMatrix};
use clonelab_core::rng::{rng_from_seed, Rng};
use clonelab_core::Error;
use common::*;
use proptest::prelude::*;
use rand::Rng as _;

fn random_ensemble(d: usize, size: usize, rng: &mut Rng) -> UnitaryEnsemble {
    UnitaryEnsemble::explicit((0..size).map(|_| haar_unitary(d, rng)).collect(), None).unwrap()
}

/// `E[U^{⊗p} ⊗ (U†)^{⊗q} ⊗ Ū^{⊗p} ⊗ (Uᵀ)^{⊗q}]`, entry by entry from the
/// matrix elements of each `U` with no Kronecker helper involved.
fn mixed_tensor_oracle(us: &[ComplexMatrix], p: usize, q: usize) -> ComplexMatrix {
    let d = us[0].rows();
    let k = 2 * (p + q);
    let side = d.pow(k as u32);
    let digits = |mut v: usize| {
        let mut out = vec![0; k];
        for s in out.iter_mut().rev() {
            *s = v % d;
            v /= d;
        }
        out
    };
    let mut acc = ComplexMatrix::zeros(side, side);
    for u in us {
        let m = ComplexMatrix::from_fn(side, side, |r, c| {
            let (rd, cd) = (digits(r), digits(c));
            let mut z = c64(1.0, 0.0);
            for f in 0..k {
                let (i, j) = (rd[f], cd[f]);
                let half = f % (p + q);
                let conj_half = f >= p + q;
                // forward copies read U[i][j]; adjoint copies read conj(U[j][i]).
                let e = if half < p { u.get(i, j) } else { u.get(j, i).conj() };
                z *= if conj_half { e.conj() } else { e };
            }
            z
        });
        acc = &acc + &m;
    }
    acc.scale_real(1.0 / us.len() as f64)
}

#[test]
fn group_orders() {
    assert_eq!(clifford_ensemble(1).unwrap().len(), 24);
    assert_eq!(pauli_ensemble(1).unwrap().len(), 4);
    assert_eq!(pauli_ensemble(2).unwrap().len(), 16);
    assert_eq!(clifford_ensemble(2).unwrap().len(), 11520);
    assert!(matches!(clifford_ensemble(3), Err(Error::Domain(_))));
}

#[test]
fn clifford_elements_are_canonical_and_distinct() {
    let c = clifford_ensemble(1).unwrap();
    for u in c.elements().unwrap() {
        assert!(u.unitarity_defect() < 1e-12);
        let z = u.data().iter().find(|z| z.norm() > 1e-9).unwrap();
        assert!(z.im.abs() < 1e-12 && z.re > 0.0);
    }
    // re-listing the same elements must not be flagged as duplicates, doubling them must
    let elems = c.elements().unwrap().to_vec();
    assert!(UnitaryEnsemble::explicit(elems.clone(), Some(3)).is_ok());
    let mut twice = elems.clone();
    twice.push(elems[5].scale(c64(0.0, 1.0)));
    assert!(UnitaryEnsemble::explicit(twice, None).is_err());
}

#[test]
fn frame_potentials_match_schur_weyl_count() {
    for n in [1, 2] {
        let c = clifford_ensemble(n).unwrap();
        for t in 1..=3 {
            let fp = frame_potential(&c, t).unwrap();
            assert!((fp.value - frame_potential_oracle(1 << n, t)).abs() < 1e-9, "n={n} t={t}: {}", fp.value);
            assert_eq!(fp.std_error, 0.0);
        }
    }
    assert_eq!(frame_potential_oracle(2, 1), 1.0);
    assert_eq!(frame_potential_oracle(2, 2), 2.0);
    assert_eq!(frame_potential_oracle(2, 3), 5.0);
}

#[test]
fn group_shortcut_agrees_with_double_sum() {
    let c = clifford_ensemble(1).unwrap();
    for t in 1..=3 {
        let pairs = frame_potential_of(c.elements().unwrap(), t);
        assert!((pairs - frame_potential(&c, t).unwrap().value).abs() < 1e-12);
    }
}

#[test]
fn pauli_is_a_one_design_only() {
    for n in [1, 2] {
        let p = pauli_ensemble(n).unwrap();
        let d = 1 << n;
        assert!((frame_potential(&p, 1).unwrap().value - 1.0).abs() < 1e-12);
        assert!(frame_potential(&p, 2).unwrap().value > frame_potential_oracle(d, 2) + 0.5);
    }
    // 16-pair sum by hand: |Tr(P†Q)|^4 is 16 on the diagonal, 0 elsewhere
    assert!((frame_potential(&pauli_ensemble(1).unwrap(), 2).unwrap().value - 4.0).abs() < 1e-12);
}

#[test]
fn singleton_frame_potential() {
    let id = UnitaryEnsemble::explicit(vec![ComplexMatrix::identity(2)], None).unwrap();
    assert!((frame_potential(&id, 1).unwrap().value - 4.0).abs() < 1e-12);
    assert!(frame_potential(&id, 4).is_err());
}

#[test]
fn haar_samples_are_unitary_and_seeded() {
    for seed in 0..20 {
        let u = haar_sample(5, seed).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        assert_eq!(u, haar_sample(5, seed).unwrap());
    }
    assert!(haar_sample(65, 0).is_err());
}

#[test]
fn haar_twirl_of_an_operator_is_its_trace_monte_carlo() {
    let mut rng = rng_from_seed(7);
    let x = ginibre(2, 2, &mut rng);
    let samples = 100_000;
    let target = ComplexMatrix::identity(2).scale(x.trace() / 2.0);
    let (mut sum, mut sum_sq) = (vec![[0.0f64; 2]; 4], vec![[0.0f64; 2]; 4]);
    for i in 0..samples {
        let u = haar_sample(2, 1_000 + i).unwrap();
        let y = &(&u * &x) * &u.adjoint();
        for (k, z) in y.data().iter().enumerate() {
            for (part, v) in [z.re, z.im].into_iter().enumerate() {
                sum[k][part] += v;
                sum_sq[k][part] += v * v;
            }
        }
    }
    let n = samples as f64;
    for (k, z) in target.data().iter().enumerate() {
        for (part, want) in [z.re, z.im].into_iter().enumerate() {
            let mean = sum[k][part] / n;
            let sigma = ((sum_sq[k][part] / n - mean * mean) / n).sqrt();
            assert!((mean - want).abs() <= 3.0 * sigma + 1e-12, "entry {k}.{part}: {mean} vs {want} (σ {sigma})");
        }
    }
}

#[test]
fn sampled_frame_potential_is_near_one() {
    let h = UnitaryEnsemble::haar(2, 11, 40_000).unwrap();
    let fp = frame_potential(&h, 1).unwrap();
    assert!(fp.std_error > 0.0);
    assert!((fp.value - 1.0).abs() <= 3.0 * fp.std_error, "{fp:?}");
}

#[test]
fn moment_operator_examples() {
    let mut rng = rng_from_seed(3);
    let o = ginibre(4, 4, &mut rng);
    let id = UnitaryEnsemble::explicit(vec![ComplexMatrix::identity(2)], None).unwrap();
    let spec = MomentSpec::new(1, 1).unwrap();
    assert!(moment_operator(&id, &o, spec).unwrap().max_abs_diff(&o) < 1e-15);

    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
    let c = clifford_ensemble(1).unwrap();
    let twirled = moment_operator(&c, &x, MomentSpec::new(1, 0).unwrap()).unwrap();
    assert!(twirled.max_abs() < 1e-12);

    assert!(MomentSpec::new(0, 0).is_err());
    assert!(moment_operator(&c, &x, spec).is_err());
}

#[test]
fn mixed_tensor_of_identity_is_identity() {
    let id = UnitaryEnsemble::explicit(vec![ComplexMatrix::identity(2)], None).unwrap();
    for (p, q) in [(1, 0), (1, 1), (2, 1)] {
        let spec = MomentSpec::new(p, q).unwrap();
        let t = mixed_moment_tensor(&id, spec).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(t.rows())) < 1e-15);
        assert!(verify_mixed_design_identity(&id, spec).unwrap().passed(1e-15));
    }
}

#[test]
fn mixed_tensor_matches_entrywise_oracle_with_arbitrary_phases() {
    let mut rng = rng_from_seed(5);
    let ens = random_ensemble(2, 3, &mut rng);
    let phased: Vec<ComplexMatrix> = ens
        .elements()
        .unwrap()
        .iter()
        .map(|u| u.scale(c64(0.0, rng.random::<f64>() * 6.283).exp()))
        .collect();
    for (p, q) in [(1, 1), (2, 1), (0, 2)] {
        let spec = MomentSpec::new(p, q).unwrap();
        let lib = mixed_moment_tensor(&ens, spec).unwrap();
        assert!(lib.max_abs_diff(&mixed_tensor_oracle(&phased, p, q)) < 1e-12);
    }
    for t in 1..=3 {
        let a = frame_potential_of(ens.elements().unwrap(), t);
        assert!((a - frame_potential_of(&phased, t)).abs() < 1e-12);
    }
}

#[test]
fn mixed_identity_holds_for_arbitrary_and_design_ensembles() {
    let mut rng = rng_from_seed(9);
    let spec11 = MomentSpec::new(1, 1).unwrap();
    let spec21 = MomentSpec::new(2, 1).unwrap();
    assert!(verify_mixed_design_identity(&random_ensemble(2, 3, &mut rng), spec11).unwrap().passed(1e-12));
    assert!(verify_mixed_design_identity(&clifford_ensemble(1).unwrap(), spec21).unwrap().passed(1e-12));
    assert!(verify_mixed_design_identity(&random_ensemble(3, 2, &mut rng), spec11).unwrap().passed(1e-12));
    let sampled = UnitaryEnsemble::haar(2, 0, 4).unwrap();
    assert!(verify_mixed_design_identity(&sampled, spec11).is_err());
}

#[test]
fn equal_mixed_tensors_give_equal_moment_operators() {
    let mut rng = rng_from_seed(13);
    let c = clifford_ensemble(1).unwrap();
    // conjugating a 3-design by a fixed unitary gives another 3-design with new elements
    let w = haar_unitary(2, &mut rng);
    let rotated =
        UnitaryEnsemble::explicit(c.elements().unwrap().iter().map(|u| &(&w * u) * &w.adjoint()).collect(), Some(3))
            .unwrap();
    for (p, q) in [(1, 1), (2, 1), (1, 2)] {
        let spec = MomentSpec::new(p, q).unwrap();
        let (ta, tb) = (mixed_moment_tensor(&c, spec).unwrap(), mixed_moment_tensor(&rotated, spec).unwrap());
        assert!(ta.max_abs_diff(&tb) < 1e-11);
        let side = 1 << (p + q);
        for _ in 0..50 {
            let o = ginibre(side, side, &mut rng);
            let (ma, mb) = (moment_operator(&c, &o, spec).unwrap(), moment_operator(&rotated, &o, spec).unwrap());
            assert!(ma.max_abs_diff(&mb) < 1e-11);
        }
    }
}

#[test]
fn clifford_mixed_moment_matches_monte_carlo_haar() {
    let spec = MomentSpec::new(2, 1).unwrap();
    let exact = mixed_moment_tensor(&clifford_ensemble(1).unwrap(), spec).unwrap();
    let samples = 100_000u64;
    let side = exact.rows();
    let mut sum = vec![[0.0f64; 2]; side * side];
    let mut sum_sq = vec![[0.0f64; 2]; side * side];
    let mut rng = rng_from_seed(21);
    for _ in 0..samples {
        let u = haar_unitary(2, &mut rng);
        let single = UnitaryEnsemble::explicit(vec![u], None).unwrap();
        let m = mixed_moment_tensor(&single, spec).unwrap();
        for (k, z) in m.data().iter().enumerate() {
            sum[k][0] += z.re;
            sum[k][1] += z.im;
            sum_sq[k][0] += z.re * z.re;
            sum_sq[k][1] += z.im * z.im;
        }
    }
    let n = samples as f64;
    // 8192 real components are compared, so the per-component band is widened
    // from 3σ to 5σ to keep the family-wise false alarm rate below 1%.
    let mut worst: f64 = 0.0;
    for (k, z) in exact.data().iter().enumerate() {
        for (part, want) in [z.re, z.im].into_iter().enumerate() {
            let mean = sum[k][part] / n;
            let sigma = ((sum_sq[k][part] / n - mean * mean).max(0.0) / n).sqrt();
            let dev = (mean - want).abs();
            if sigma < 1e-12 {
                assert!(dev < 1e-9, "deterministic component {k}.{part} differs by {dev}");
            } else {
                worst = worst.max(dev / sigma);
            }
        }
    }
    assert!(worst <= 5.0, "largest z-score {worst}");
}

#[test]
fn right_translation_by_a_clifford_leaves_moments_unchanged() {
    let mut rng = rng_from_seed(17);
    let c = clifford_ensemble(1).unwrap();
    let v = c.member(rng.random_range(1..c.len()));
    let shifted = c.right_translate(&v).unwrap();
    for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1), (1, 2), (3, 0), (0, 3)] {
        let spec = MomentSpec::new(p, q).unwrap();
        let side = 1 << (p + q);
        let o = ginibre(side, side, &mut rng);
        let (a, b) = (moment_operator(&c, &o, spec).unwrap(), moment_operator(&shifted, &o, spec).unwrap());
        assert!(a.max_abs_diff(&b) < 1e-11, "(p,q)=({p},{q})");
    }
}

#[test]
fn oversized_moments_are_refused() {
    let c = clifford_ensemble(1).unwrap();
    let spec = MomentSpec::new(4, 3).unwrap();
    assert!(matches!(mixed_moment_tensor(&c, spec), Err(Error::TooLarge { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn frame_potential_never_beats_haar(seed in any::<u64>(), size in 1usize..6, t in 1usize..4) {
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(2, size, &mut rng);
        let fp = frame_potential(&ens, t).unwrap().value;
        prop_assert!(fp >= frame_potential_oracle(2, t) - 1e-9);
    }

    #[test]
    fn moment_operator_is_linear(seed in any::<u64>(), p in 0usize..3, q in 0usize..2) {
        prop_assume!(p + q >= 1);
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(2, 3, &mut rng);
        let spec = MomentSpec::new(p, q).unwrap();
        let side = 1 << (p + q);
        let (a, b) = (ginibre(side, side, &mut rng), ginibre(side, side, &mut rng));
        let z = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
        let lhs = moment_operator(&ens, &(&a + &b.scale(z)), spec).unwrap();
        let rhs = &moment_operator(&ens, &a, spec).unwrap() + &moment_operator(&ens, &b, spec).unwrap().scale(z);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn mixed_identity_for_random_ensembles(seed in any::<u64>(), size in 1usize..5, p in 0usize..3, q in 0usize..3) {
        prop_assume!(p + q >= 1 && p + q <= 3);
        let mut rng = rng_from_seed(seed);
        let ens = random_ensemble(2, size, &mut rng);
        let spec = MomentSpec::new(p, q).unwrap();
        prop_assert!(verify_mixed_design_identity(&ens, spec).unwrap().passed(1e-12));
    }
}
