//! Property-based invariants across the linear algebra and the detection
//! stack. Random inputs are drawn through seeded ChaCha8 streams so every
//! failure shrinks to a reproducible seed.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use qee_core::criterion::{
    cross_block_elements, minor_value, ppt_negativity, verdict, MinorSearch,
};
use qee_core::evolution::{conditional_evolution, joint_state, Frame};
use qee_core::linalg::{
    determinant, hermitian_eig, partial_trace, partial_transpose_qubit, unitary_exp,
    ComplexMatrix, Subsystem,
};
use qee_core::model::{analyze_environment, build_random_model, ModelClass, QubitState};
use qee_core::oracle::minor_direct;
use qee_core::Tolerances;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    ComplexMatrix::from_fn(n, |i, j| (g.get(i, j) + g.get(j, i).conj()) * C64::new(0.5, 0.0))
}

fn random_density(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n);
    let ggdag = g.matmul(&g.adjoint());
    let tr = ggdag.trace().re;
    ggdag.scale(C64::new(1.0 / tr, 0.0))
}

fn spectrum(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eig(m, 1e-8).unwrap().eigenvalues().to_vec()
}

proptest! {
    /// unitary_exp(h, t) · unitary_exp(h, −t) = 1.
    #[test]
    fn exp_inverse_pairs(seed in any::<u64>(), t in -5.0f64..5.0, n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, n);
        let u = unitary_exp(&h, t).unwrap();
        let v = unitary_exp(&h, -t).unwrap();
        let defect = (&u.matmul(&v) - &ComplexMatrix::identity(n)).frobenius_norm();
        prop_assert!(defect <= 1e-10 * n as f64, "defect {defect}");
    }

    /// The qubit-side partial transpose preserves trace and Hermiticity,
    /// and its spectrum equals that of the environment-side transpose.
    #[test]
    fn partial_transpose_spectrum_matches_env_side(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 3;
        let s = random_density(&mut rng, 2 * n);
        let pt_qubit = partial_transpose_qubit(&s, n).unwrap();
        prop_assert!((pt_qubit.trace() - s.trace()).norm() < 1e-12);
        prop_assert!(pt_qubit.hermiticity_defect() < 1e-12);

        // Environment-side transpose: transpose inside each qubit block.
        let mut pt_env = ComplexMatrix::zeros(2 * n);
        for qi in 0..2 {
            for qj in 0..2 {
                for k in 0..n {
                    for l in 0..n {
                        pt_env.set(qi * n + k, qj * n + l, s.get(qi * n + l, qj * n + k));
                    }
                }
            }
        }
        let spec_q = spectrum(&pt_qubit);
        let spec_e = spectrum(&pt_env);
        for (a, b) in spec_q.iter().zip(spec_e.iter()) {
            prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    /// The reduced qubit state of any density matrix has unit trace.
    #[test]
    fn reduced_qubit_trace_is_one(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_density(&mut rng, 2 * n);
        let q = partial_trace(&s, n, Subsystem::Qubit).unwrap();
        prop_assert!((q.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(q.trace().im.abs() <= 1e-12);
    }

    /// det(AB) = det(A)·det(B) on random 4×4 pairs.
    #[test]
    fn determinant_is_multiplicative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        let lhs = determinant(&a.matmul(&b));
        let rhs = determinant(&a) * determinant(&b);
        let scale = lhs.norm().max(rhs.norm()).max(1e-30);
        prop_assert!((lhs - rhs).norm() <= 1e-9 * scale, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The full verdict never reports an internal inconsistency, over all
    /// model classes, dimensions and times.
    #[test]
    fn verdict_is_internally_consistent(
        seed in any::<u64>(),
        class_pick in 0usize..3,
        n in 2usize..6,
        t in 0.0f64..4.0,
    ) {
        let class = ModelClass::ALL[class_pick];
        let (model, rho) = build_random_model(n, class, seed).unwrap();
        let tols = Tolerances::default();
        let env = analyze_environment(&rho, tols.grouping, tols.zero).unwrap();
        let v = verdict(&model, &QubitState::plus(), &env, t, &tols).unwrap();
        if v.separable {
            prop_assert!(v.decomposition.is_some());
        } else {
            prop_assert!(v.negative_minor.is_some());
            prop_assert!(v.negativity > tols.decision);
        }
    }

    /// Negativity does not depend on the frame (local unitaries).
    #[test]
    fn negativity_is_frame_invariant(seed in any::<u64>(), n in 2usize..5, t in 0.0f64..3.0) {
        let (model, rho) = build_random_model(n, ModelClass::Generic, seed).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        let qubit = QubitState::plus();
        let rotated = joint_state(&model, &qubit, &env, t, Frame::Rotated).unwrap();
        let lab = joint_state(&model, &qubit, &env, t, Frame::Lab).unwrap();
        let (neg_rot, min_rot) = ppt_negativity(&rotated).unwrap();
        let (neg_lab, min_lab) = ppt_negativity(&lab).unwrap();
        prop_assert!((neg_rot - neg_lab).abs() <= 1e-9, "{neg_rot} vs {neg_lab}");
        prop_assert!((min_rot - min_lab).abs() <= 1e-9, "{min_rot} vs {min_lab}");
    }

    /// Block-preserving models never develop cross-block elements at any
    /// sampled time (the construction is closed under the evolution).
    #[test]
    fn block_preserving_gate_is_monotone(seed in any::<u64>(), n in 2usize..6) {
        let (model, rho) = build_random_model(n, ModelClass::BlockPreserving, seed).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        for &t in &[0.1, 0.5, 1.0, 3.0, 7.0] {
            let cond = conditional_evolution(&model, &env, t).unwrap();
            let cross = cross_block_elements(&env, &cond, 1e-9).unwrap();
            prop_assert!(cross.is_empty(), "t {t}: {cross:?}");
        }
    }

    /// The closed-form minors match explicit bordered determinants.
    #[test]
    fn minor_closed_form_matches_determinant(
        seed in any::<u64>(),
        n in 2usize..5,
        t in 0.0f64..3.0,
    ) {
        let (model, rho) = build_random_model(n, ModelClass::Generic, seed).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        let cond = conditional_evolution(&model, &env, t).unwrap();
        let qubit = QubitState::plus();
        for i in 0..n {
            let fast = minor_value(i, &env, &cond, &qubit, None).unwrap();
            let direct = minor_direct(&env, &cond, &qubit, i, &[]).unwrap();
            let scale = fast.value().abs().max(fast.log_prefactor.exp());
            prop_assert!(
                (fast.value() - direct.re).abs() <= 1e-10 * scale,
                "i {i}: {:e} vs {:e}", fast.value(), direct.re
            );
            prop_assert!(direct.im.abs() <= 1e-12 * scale.max(1.0));
        }
    }

    /// The negative-minor search agrees with the commutator criterion.
    #[test]
    fn minor_search_matches_commutator(
        seed in any::<u64>(),
        class_pick in 0usize..3,
        n in 2usize..5,
        t in 0.0f64..3.0,
    ) {
        let class = ModelClass::ALL[class_pick];
        let (model, rho) = build_random_model(n, class, seed).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        let cond = conditional_evolution(&model, &env, t).unwrap();
        let search = find_negative_minor_wrapper(&env, &cond);
        let (separable, _) =
            qee_core::criterion::commutator_criterion(&env, &cond, 1e-9).unwrap();
        match search {
            MinorSearch::Negative(_) => prop_assert!(!separable),
            MinorSearch::Exhausted => prop_assert!(separable),
            MinorSearch::NoSuperposition => prop_assert!(false, "plus state was gated"),
        }
    }
}

fn find_negative_minor_wrapper(
    env: &qee_core::model::EnvironmentState,
    cond: &qee_core::evolution::ConditionalEvolution,
) -> MinorSearch {
    qee_core::criterion::find_negative_minor(env, cond, &QubitState::plus(), 1e-9).unwrap()
}
