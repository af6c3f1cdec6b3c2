//! Independent brute-force verifiers for the fast detection paths.
//!
//! Everything here deliberately avoids the closed forms and block
//! assemblies it is meant to check: joint states are produced by
//! conjugating with an explicitly built propagator, and minors are plain
//! determinants of explicitly deleted rows and columns. Shared code is
//! limited to the [`ComplexMatrix`] primitives.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criterion::verdict;
use crate::error::{Error, Result};
use crate::evolution::{
    conditional_evolution, joint_state_rotated, reduced_env, ConditionalEvolution, Frame,
    JointState,
};
use crate::linalg::{
    determinant, hermitian_eig, partial_transpose_qubit, trace_distance, ComplexMatrix,
};
use crate::model::{
    analyze_environment, build_random_model, EnvironmentState, ModelClass, PureDephasingModel,
    QubitState,
};
use crate::Tolerances;

/// Principal minor of the partially transposed joint state, evaluated the
/// slow way: assemble the state by conjugation, rotate to the ρ_E(0)
/// eigenbasis, partially transpose, symmetrically delete rows and columns,
/// take the determinant.
///
/// The kept index set is all environment rows of the |a|² block except
/// `crossed_out`, plus the single |b|²-block row selected by `i`.
pub fn minor_direct(
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    qubit: &QubitState,
    i: usize,
    crossed_out: &[usize],
) -> Result<C64> {
    let n = env.env_dim();
    if i >= n {
        return Err(Error::Dimension(format!(
            "row index {i} out of range for dimension {n}"
        )));
    }
    if let Some(&bad) = crossed_out.iter().find(|&&k| k >= n) {
        return Err(Error::Dimension(format!(
            "crossed-out index {bad} out of range for dimension {n}"
        )));
    }

    // σ̃(t) by conjugation with the branch propagator.
    let joint = conjugate_initial_state(qubit, env.rho(), cond.w())?;

    // Rotate the environment factor to the eigenbasis of ρ_E(0).
    let basis = ComplexMatrix::identity(2).kron(env.eigenvectors())?;
    let in_eigenbasis = basis.adjoint().matmul(&joint).matmul(&basis);

    let pt = partial_transpose_qubit(&in_eigenbasis, n)?;
    let keep: Vec<usize> = (0..n)
        .filter(|k| !crossed_out.contains(k))
        .chain(std::iter::once(n + i))
        .collect();
    Ok(determinant(&pt.submatrix(&keep)))
}

fn conjugate_initial_state(
    qubit: &QubitState,
    rho_env: &ComplexMatrix,
    w: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let n = rho_env.dim();
    let mut propagator = ComplexMatrix::zeros(2 * n);
    for k in 0..n {
        propagator.set(k, k, C64::new(1.0, 0.0));
        for l in 0..n {
            propagator.set(n + k, n + l, w.get(k, l));
        }
    }
    let initial = qubit.density_matrix().kron(rho_env)?;
    Ok(propagator.matmul(&initial).matmul(&propagator.adjoint()))
}

/// Rotated-frame joint state built by explicit conjugation with
/// |0⟩⟨0| ⊗ 1 + |1⟩⟨1| ⊗ w(t), as an independent cross-check of the block
/// assembly in [`crate::evolution::joint_state`].
pub fn conjugation_path_joint(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
) -> Result<JointState> {
    let cond = conditional_evolution(model, env, t)?;
    let matrix = conjugate_initial_state(qubit, env.rho(), cond.w())?;
    JointState::new(matrix, Frame::Rotated, t)
}

/// The canned two-qubit example: a joint unitary that entangles a pure
/// qubit with a maximally mixed two-level environment, something no pure
/// dephasing evolution can do.
#[derive(Debug, Clone)]
pub struct EntanglingGateFixture {
    /// The 4×4 joint unitary.
    pub unitary: ComplexMatrix,
    /// The state it produces from |0⟩⟨0| ⊗ 1/2.
    pub state: ComplexMatrix,
    /// Known concurrence of that state.
    pub expected_concurrence: f64,
}

/// Build the fixture: the unitary maps |00⟩ → |01⟩,
/// |01⟩ → (|00⟩+|11⟩)/√2, |10⟩ → (|00⟩−|11⟩)/√2, |11⟩ → |10⟩
/// (qubit index first). Applied to |0⟩⟨0| ⊗ 1/2 it yields a state with
/// diagonal (1/4, 1/2, 0, 1/4) and corner elements 1/4, whose concurrence
/// is exactly 1/2.
pub fn entangling_gate_fixture() -> EntanglingGateFixture {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let s = C64::new(h, 0.0);
    // Columns are the images of |00⟩, |01⟩, |10⟩, |11⟩.
    let unitary = ComplexMatrix::from_rows(&[
        vec![z, s, s, z],
        vec![o, z, z, z],
        vec![z, z, z, o],
        vec![z, s, -s, z],
    ])
    .expect("static 4x4");

    let initial = ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]);
    let state = unitary.matmul(&initial).matmul(&unitary.adjoint());
    EntanglingGateFixture {
        unitary,
        state,
        expected_concurrence: 0.5,
    }
}

/// Bloch-sphere transfer matrix of the qubit-reduced channel
/// X ↦ Tr_E[U (X ⊗ 1/N) U†] of a joint unitary on qubit ⊗ environment.
pub fn qubit_channel_bloch_map(u: &ComplexMatrix) -> Result<[[f64; 3]; 3]> {
    if !u.dim().is_multiple_of(2) || u.dim() < 4 {
        return Err(Error::Dimension(format!(
            "joint unitary must act on 2N >= 4 levels, got {}",
            u.dim()
        )));
    }
    let n = u.dim() / 2;
    let paulis = [
        crate::linalg::pauli_x(),
        crate::linalg::pauli_y(),
        crate::linalg::pauli_z(),
    ];
    let mixed_env = ComplexMatrix::identity(n).scale(C64::new(1.0 / n as f64, 0.0));
    let mut map = [[0.0; 3]; 3];
    for (l, sigma_in) in paulis.iter().enumerate() {
        let input = sigma_in.kron(&mixed_env)?;
        let evolved = u.matmul(&input).matmul(&u.adjoint());
        let reduced =
            crate::linalg::partial_trace(&evolved, n, crate::linalg::Subsystem::Qubit)?;
        for (k, sigma_out) in paulis.iter().enumerate() {
            map[k][l] = sigma_out.matmul(&reduced).trace().re / 2.0;
        }
    }
    Ok(map)
}

/// Necessary-condition test for a branch-diagonal (dephasing) form of a
/// joint unitary: such a form fixes both poles of some qubit axis, so the
/// Bloch transfer matrix must have operator norm ≥ 1. Returns true when
/// the norm falls short and the form is therefore ruled out.
pub fn dephasing_form_ruled_out(u: &ComplexMatrix) -> Result<bool> {
    let map = qubit_channel_bloch_map(u)?;
    // Largest singular value via the 3×3 Gram matrix.
    let gram = ComplexMatrix::from_fn(3, |i, j| {
        C64::new((0..3).map(|k| map[k][i] * map[k][j]).sum(), 0.0)
    });
    let eig = hermitian_eig(&gram, 1e-10)?;
    let sigma_max = eig.eigenvalues()[2].max(0.0).sqrt();
    Ok(sigma_max < 1.0 - 1e-9)
}

/// Exhaustive grid search for a qubit basis in which the joint unitary is
/// branch-diagonal: returns the (θ, φ) Bloch angles of such a basis if
/// one exists at the given resolution, or None.
pub fn dephasing_form_search(u: &ComplexMatrix, step_deg: f64) -> Result<Option<(f64, f64)>> {
    if !u.dim().is_multiple_of(2) || u.dim() < 4 {
        return Err(Error::Dimension("joint unitary must act on 2N levels".to_string()));
    }
    let n = u.dim() / 2;
    let step = step_deg.to_radians();
    let theta_steps = (std::f64::consts::PI / step).ceil() as usize;
    let phi_steps = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    for ti in 0..=theta_steps {
        let theta = ti as f64 * step;
        for pi in 0..phi_steps {
            let phi = pi as f64 * step;
            let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let e = (C64::i() * phi).exp();
            let v = [C64::new(c, 0.0), e * s];
            let vperp = [-e.conj() * s, C64::new(c, 0.0)];
            let mut off = 0.0f64;
            for k in 0..n {
                for l in 0..n {
                    let mut upper = C64::new(0.0, 0.0);
                    let mut lower = C64::new(0.0, 0.0);
                    for q in 0..2 {
                        for q2 in 0..2 {
                            let el = u.get(q * n + k, q2 * n + l);
                            upper += vperp[q].conj() * el * v[q2];
                            lower += v[q].conj() * el * vperp[q2];
                        }
                    }
                    off = off.max(upper.norm()).max(lower.norm());
                }
            }
            if off < 1e-9 {
                return Ok(Some((theta, phi)));
            }
        }
    }
    Ok(None)
}

/// Aggregate result of the randomized equivalence battery.
#[derive(Debug, Clone, Default)]
pub struct BatterySummary {
    pub trials: usize,
    pub verdicts: usize,
    pub separable: usize,
    pub entangled: usize,
    pub inconsistent: usize,
    /// Separable verdicts whose decomposition reconstructed the joint
    /// state within 1e-8 trace norm with valid factors.
    pub decompositions_verified: usize,
    /// One reproduction line per failed check.
    pub failures: Vec<String>,
}

const BATTERY_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 3.0];

/// Randomized cross-validation of the whole detection stack.
///
/// For `count` seeded models cycling through all classes and the given
/// dimensions, run the full verdict at four times each and additionally
/// check that (a) every separable verdict carries a decomposition that
/// reconstructs the joint state to 1e-8 in trace norm with valid factors,
/// and (b) the rotated-frame environment change agrees with the verdict
/// for two distinct superpositions. Every violated check increments
/// `inconsistent` and appends a reproduction line.
pub fn equivalence_battery(count: usize, seed: u64, dims: &[usize]) -> Result<BatterySummary> {
    if count == 0 {
        return Err(Error::Contract("battery needs at least one trial".to_string()));
    }
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::Dimension(
            "battery dimensions must be >= 2 and nonempty".to_string(),
        ));
    }
    let tols = Tolerances::default();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let trial_seeds: Vec<u64> = (0..count).map(|_| master.random()).collect();

    let qubits = [
        QubitState::plus(),
        QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).expect("normalized"),
    ];

    let mut summary = BatterySummary {
        trials: count,
        ..Default::default()
    };
    for (trial, &model_seed) in trial_seeds.iter().enumerate() {
        let class = ModelClass::ALL[trial % ModelClass::ALL.len()];
        let dim = dims[(trial / ModelClass::ALL.len()) % dims.len()];
        let context = |t: f64| {
            format!(
                "trial {trial} (class {}, dim {dim}, model seed {model_seed}, t {t})",
                class.name()
            )
        };
        let (model, rho) = build_random_model(dim, class, model_seed)?;
        let env = match analyze_environment(&rho, tols.grouping, tols.zero) {
            Ok(env) => env,
            Err(e) => {
                summary.inconsistent += 1;
                summary.failures.push(format!("{}: {e}", context(0.0)));
                continue;
            }
        };
        for &t in &BATTERY_TIMES {
            summary.verdicts += 1;
            let v = match verdict(&model, &qubits[0], &env, t, &tols) {
                Ok(v) => v,
                Err(e) => {
                    summary.inconsistent += 1;
                    summary.failures.push(format!("{}: {e}", context(t)));
                    continue;
                }
            };
            if v.separable {
                summary.separable += 1;
            } else {
                summary.entangled += 1;
            }

            let mut problems: Vec<String> = Vec::new();
            if v.separable {
                match &v.decomposition {
                    None => problems.push("separable verdict without decomposition".to_string()),
                    Some(dec) => match check_decomposition(dec, &model, &qubits[0], &env, t) {
                        Ok(None) => summary.decompositions_verified += 1,
                        Ok(Some(msg)) => problems.push(msg),
                        Err(e) => problems.push(e.to_string()),
                    },
                }
            }

            for (qi, q) in qubits.iter().enumerate() {
                let change = reduced_env(&model, q, &env, t, Frame::Rotated)
                    .and_then(|reduced| trace_distance(&reduced, env.rho()));
                match change {
                    Ok(change) => {
                        if (change > tols.decision) != !v.separable {
                            problems.push(format!(
                                "rotated env change {change:.3e} disagrees with verdict \
                                 (separable: {}) for qubit state {qi}",
                                v.separable
                            ));
                        }
                    }
                    Err(e) => problems.push(e.to_string()),
                }
            }

            summary.inconsistent += problems.len();
            summary
                .failures
                .extend(problems.into_iter().map(|msg| format!("{}: {msg}", context(t))));
        }
    }
    Ok(summary)
}

fn check_decomposition(
    dec: &crate::criterion::SeparableDecomposition,
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
) -> Result<Option<String>> {
    let cond = conditional_evolution(model, env, t)?;
    let target = joint_state_rotated(qubit, env, &cond)?;
    let rebuilt = dec.reconstruct()?;
    let dist = trace_distance(&rebuilt, target.matrix())?;
    if dist > 1e-8 {
        return Ok(Some(format!("reconstruction distance {dist:.3e}")));
    }
    let mut weight_sum = 0.0;
    for (k, term) in dec.terms().iter().enumerate() {
        weight_sum += term.weight;
        if term.weight <= 0.0 {
            return Ok(Some(format!("term {k} has nonpositive weight")));
        }
        for (name, factor) in [("qubit", &term.qubit_factor), ("env", &term.env_factor)] {
            let defect = factor.hermiticity_defect();
            let tr = factor.trace();
            let min_eig = hermitian_eig(factor, 1e-8)?.eigenvalues()[0];
            if defect > 1e-9 || (tr.re - 1.0).abs() > 1e-9 || min_eig < -1e-9 {
                return Ok(Some(format!(
                    "term {k} {name} factor invalid: defect {defect:.2e}, trace {tr}, min \
                     eigenvalue {min_eig:.2e}"
                )));
            }
        }
    }
    if (weight_sum - 1.0).abs() > 1e-10 {
        return Ok(Some(format!("weights sum to {weight_sum}")));
    }
    Ok(None)
}
