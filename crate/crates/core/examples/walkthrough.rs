//! Minimal tour: build a model, evolve, decide separability three ways,
//! and watch the environment as a witness.

use num_complex::Complex64 as C64;
use qee_core::criterion::verdict;
use qee_core::evolution::qubit_coherence;
use qee_core::model::{analyze_environment, build_thermal, demo_three_level, QubitState};
use qee_core::witness::env_change_witness;
use qee_core::Tolerances;

fn main() -> qee_core::Result<()> {
    let tols = Tolerances::default();
    let model = demo_three_level();
    let qubit = QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8))?;

    // Environment thermalized under H_E = H0 (V0 vanishes for this model),
    // which licenses the environment-only witness.
    let rho = build_thermal(model.h_env(), 1.0)?;
    let env = analyze_environment(&rho, tols.grouping, tols.zero)?;
    println!(
        "populations: {:?} in {} subspaces",
        env.populations(),
        env.partition().len()
    );

    for &t in &[0.0, 0.5, 1.0, 2.0] {
        let v = verdict(&model, &qubit, &env, t, &tols)?;
        let w = env_change_witness(&model, &qubit, &env, t, tols.decision)?;
        let coherence = qubit_coherence(&model, &qubit, &env, t)?;
        println!(
            "t = {t:.1}: separable = {:<5} commutator = {:.3e}  negativity = {:.3e}  \
             env change (lab) = {:.3e}  witnessed = {:?}  |coherence| = {:.4}",
            v.separable,
            v.commutator_norm,
            v.negativity,
            w.env_change_lab,
            w.witnessed_entangled,
            coherence.norm()
        );
    }
    Ok(())
}
