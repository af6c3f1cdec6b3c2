//! Time evolution of the joint qubit-environment state.
//!
//! Pure dephasing conditions the environment dynamics on the qubit branch:
//! up to local unitaries the joint propagator is
//! |0⟩⟨0| ⊗ 1 + |1⟩⟨1| ⊗ w(t) with the conditional propagator
//!
//! ```text
//!     w(t) = exp(+i H₀ t) · exp(−i H₁ t),      H_i = H_E + V_i.
//! ```
//!
//! In this rotated frame the joint state has the closed block form
//!
//! ```text
//!     σ̃(t) = ┌ |a|² ρ_E(0)        a b* ρ_E(0) w†(t) ┐
//!            └ a* b w(t) ρ_E(0)   |b|² w(t) ρ_E(0) w†(t) ┘ ,
//! ```
//!
//! which is what [`joint_state`] assembles; the lab frame conjugates the
//! initial product state with the exponential of the full Hamiltonian.
//! All evolutions are exact exponentials in a free time parameter — there
//! is no integrator.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{
    partial_trace, unitary_exp, ComplexMatrix, Subsystem,
};
use crate::model::{EnvironmentState, PureDephasingModel, QubitState};

/// Reference frame of a joint state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Interaction picture of the branch-conditioned evolution; the |0⟩
    /// branch of the environment is frozen.
    Rotated,
    /// Laboratory frame, full Hamiltonian evolution.
    Lab,
}

/// A 2N×2N joint density matrix tagged with its frame and time.
#[derive(Debug, Clone)]
pub struct JointState {
    matrix: ComplexMatrix,
    frame: Frame,
    time: f64,
}

impl JointState {
    pub(crate) fn new(matrix: ComplexMatrix, frame: Frame, time: f64) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > 1e-10 * matrix.frobenius_norm().max(1.0) {
            return Err(Error::Contract(format!(
                "joint state is not Hermitian: defect {defect:.3e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::Contract(format!(
                "joint state trace is {tr}, expected 1"
            )));
        }
        Ok(Self {
            matrix,
            frame,
            time,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn env_dim(&self) -> usize {
        self.matrix.dim() / 2
    }
}

/// The conditional propagator w(t) together with its matrix elements in
/// the eigenbasis of ρ_E(0): `overlaps[n][i] = ⟨n| w†(t) |i⟩`.
#[derive(Debug, Clone)]
pub struct ConditionalEvolution {
    w: ComplexMatrix,
    overlaps: ComplexMatrix,
    time: f64,
}

impl ConditionalEvolution {
    /// w(t) in the computational basis.
    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }

    /// Unitary matrix of ⟨n|w†(t)|i⟩ over the ρ_E(0) eigenbasis.
    pub fn overlaps(&self) -> &ComplexMatrix {
        &self.overlaps
    }

    /// ⟨n|w†(t)|i⟩ for sorted eigenbasis indices n, i.
    pub fn overlap(&self, n: usize, i: usize) -> C64 {
        self.overlaps.get(n, i)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn env_dim(&self) -> usize {
        self.w.dim()
    }
}

/// Compute w(t) = e^{+iH₀t} e^{−iH₁t} and its eigenbasis overlaps.
pub fn conditional_evolution(
    model: &PureDephasingModel,
    env: &EnvironmentState,
    t: f64,
) -> Result<ConditionalEvolution> {
    if model.env_dim() != env.env_dim() {
        return Err(Error::Dimension(format!(
            "model dimension {} does not match environment dimension {}",
            model.env_dim(),
            env.env_dim()
        )));
    }
    if !t.is_finite() {
        return Err(Error::Contract(format!("non-finite time {t}")));
    }
    let forward = unitary_exp(&model.h0(), -t)?; // e^{+i H0 t}
    let backward = unitary_exp(&model.h1(), t)?; // e^{-i H1 t}
    let w = forward.matmul(&backward);
    let v = env.eigenvectors();
    let overlaps = v.adjoint().matmul(&w.adjoint()).matmul(v);
    Ok(ConditionalEvolution {
        w,
        overlaps,
        time: t,
    })
}

/// The joint density matrix at time `t` in the requested frame.
pub fn joint_state(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
    frame: Frame,
) -> Result<JointState> {
    let n = model.env_dim();
    if n != env.env_dim() {
        return Err(Error::Dimension(format!(
            "model dimension {n} does not match environment dimension {}",
            env.env_dim()
        )));
    }
    match frame {
        Frame::Rotated => {
            let cond = conditional_evolution(model, env, t)?;
            joint_state_rotated(qubit, env, &cond)
        }
        Frame::Lab => {
            let full_h = assemble_full_hamiltonian(model)?;
            let u = unitary_exp(&full_h, t)?;
            let initial = qubit.density_matrix().kron(env.rho())?;
            let matrix = u.matmul(&initial).matmul(&u.adjoint());
            JointState::new(matrix, Frame::Lab, t)
        }
    }
}

/// Block assembly of the rotated-frame joint state from a precomputed
/// conditional propagator.
pub fn joint_state_rotated(
    qubit: &QubitState,
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
) -> Result<JointState> {
    let n = env.env_dim();
    if cond.env_dim() != n {
        return Err(Error::Dimension(format!(
            "propagator dimension {} does not match environment dimension {n}",
            cond.env_dim()
        )));
    }
    let (a, b) = (qubit.a(), qubit.b());
    let rho = env.rho();
    let w = cond.w();
    let w_rho = w.matmul(rho);
    let rho_wdag = w_rho.adjoint(); // (w ρ)† = ρ w† for Hermitian ρ
    let w_rho_wdag = w_rho.matmul(&w.adjoint());

    let mut m = ComplexMatrix::zeros(2 * n);
    let aa = C64::new(a.norm_sqr(), 0.0);
    let bb = C64::new(b.norm_sqr(), 0.0);
    let ab = a * b.conj();
    let ba = a.conj() * b;
    for k in 0..n {
        for l in 0..n {
            m.set(k, l, aa * rho.get(k, l));
            m.set(k, n + l, ab * rho_wdag.get(k, l));
            m.set(n + k, l, ba * w_rho.get(k, l));
            m.set(n + k, n + l, bb * w_rho_wdag.get(k, l));
        }
    }
    JointState::new(m, Frame::Rotated, cond.time())
}

/// H = diag(ε₀, ε₁) ⊗ 1 + 1 ⊗ H_E + |0⟩⟨0| ⊗ V₀ + |1⟩⟨1| ⊗ V₁ as one
/// 2N×2N Hermitian matrix.
pub fn assemble_full_hamiltonian(model: &PureDephasingModel) -> Result<ComplexMatrix> {
    let n = model.env_dim();
    let id_env = ComplexMatrix::identity(n);
    let h_q = ComplexMatrix::diag_real(&[model.eps0(), model.eps1()]);
    let proj0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
    let proj1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
    let mut h = h_q.kron(&id_env)?;
    h = h.add(&ComplexMatrix::identity(2).kron(model.h_env())?);
    h = h.add(&proj0.kron(model.v0())?);
    h = h.add(&proj1.kron(model.v1())?);
    Ok(h)
}

/// Reduced state of the environment, as the partial trace of the joint
/// state in the requested frame.
pub fn reduced_env(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
    frame: Frame,
) -> Result<ComplexMatrix> {
    let joint = joint_state(model, qubit, env, t, frame)?;
    partial_trace(joint.matrix(), joint.env_dim(), Subsystem::Environment)
}

/// Rotated-frame qubit coherence ⟨0|Tr_E σ̃(t)|1⟩ = a b* Tr[ρ_E(0) w†(t)].
pub fn qubit_coherence(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
) -> Result<C64> {
    let joint = joint_state(model, qubit, env, t, Frame::Rotated)?;
    let reduced = partial_trace(joint.matrix(), joint.env_dim(), Subsystem::Qubit)?;
    Ok(reduced.get(0, 1))
}
