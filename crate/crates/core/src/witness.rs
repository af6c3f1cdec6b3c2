//! Entanglement detection through the environment alone.
//!
//! In the rotated frame the reduced environment state
//! ρ̃_E(t) = |a|²ρ_E(0) + |b|² w(t)ρ_E(0)w†(t) stays constant for every
//! superposition (a, b) exactly when the joint state is separable. In the
//! laboratory frame the same equivalence holds provided the initial
//! environment state commutes with one of the conditioned Hamiltonians
//! H₀ or H₁ — for instance when the environment thermalized under it.
//! When that precondition holds, *any* observed change of the environment
//! certifies entanglement without touching the qubit.
//!
//! The change is reported as a trace-norm distance: it upper-bounds the
//! shift of every expectation value, so "no observable moved" becomes a
//! single scalar statement.

use crate::error::Result;
use crate::evolution::{reduced_env, Frame};
use crate::linalg::{commutator, trace_distance};
use crate::model::{EnvironmentState, PureDephasingModel, QubitState};

/// Which commutation precondition the (model, initial state) pair
/// satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precondition {
    H0Commutes,
    H1Commutes,
    Both,
    Neither,
}

impl Precondition {
    pub fn holds(&self) -> bool {
        !matches!(self, Precondition::Neither)
    }
}

/// Classify [H₀, ρ_E(0)] and [H₁, ρ_E(0)] against `tol` (relative to the
/// Hamiltonian norm).
pub fn witness_precondition(
    model: &PureDephasingModel,
    env: &EnvironmentState,
    tol: f64,
) -> Precondition {
    let commutes = |h: &crate::linalg::ComplexMatrix| {
        commutator(h, env.rho()).frobenius_norm() <= tol * h.frobenius_norm().max(1.0)
    };
    match (commutes(&model.h0()), commutes(&model.h1())) {
        (true, true) => Precondition::Both,
        (true, false) => Precondition::H0Commutes,
        (false, true) => Precondition::H1Commutes,
        (false, false) => Precondition::Neither,
    }
}

/// Witness report at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub precondition: Precondition,
    /// ‖ρ̃_E(t) − ρ_E(0)‖_tr in the rotated frame.
    pub env_change_rotated: f64,
    /// ‖ρ_E(t) − ρ_E(0)‖_tr in the laboratory frame.
    pub env_change_lab: f64,
    /// The witness verdict; present only when a precondition holds.
    pub witnessed_entangled: Option<bool>,
}

/// Measure the environment's motion in both frames and, when the
/// precondition licenses it, turn the lab-frame change into an
/// entanglement verdict.
pub fn env_change_witness(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
    tol: f64,
) -> Result<WitnessReport> {
    let rotated = reduced_env(model, qubit, env, t, Frame::Rotated)?;
    let lab = reduced_env(model, qubit, env, t, Frame::Lab)?;
    let env_change_rotated = trace_distance(&rotated, env.rho())?;
    let env_change_lab = trace_distance(&lab, env.rho())?;
    let precondition = witness_precondition(model, env, tol);
    let witnessed_entangled = precondition.holds().then_some(env_change_lab > tol);
    Ok(WitnessReport {
        precondition,
        env_change_rotated,
        env_change_lab,
        witnessed_entangled,
    })
}
