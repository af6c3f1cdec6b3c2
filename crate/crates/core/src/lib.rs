//! Decide, certify, and measure the entanglement a qubit builds up with
//! its environment while undergoing pure dephasing.
//!
//! A qubit coupled to an N-level environment through a dephasing
//! Hamiltonian (one that commutes with the qubit's own energy) loses
//! coherence, but whether it actually *entangles* with the environment
//! depends only on the initial environment state ρ_E(0) and the
//! conditional propagator w(t) = e^{+iH₀t}e^{−iH₁t}: the joint state at
//! time t is separable exactly when [ρ_E(0), w(t)] = 0. This crate
//! implements that criterion along with three independent cross-checks —
//! closed-form principal minors of the partial transpose, PPT negativity,
//! and explicit separable decompositions — plus an environment-only
//! entanglement witness for initial states that commute with one of the
//! conditioned Hamiltonians.
//!
//! Module map:
//!
//! - [`linalg`] — dense complex matrices, Hermitian eigensolver, unitary
//!   exponentials, partial transpose/trace over the qubit factor.
//! - [`model`] — the dephasing Hamiltonian data, initial states, spectral
//!   analysis of ρ_E(0), and seeded model generators.
//! - [`evolution`] — w(t), the joint state in rotated and lab frames,
//!   reduced states, qubit coherence.
//! - [`criterion`] — the separability decision stack and decompositions.
//! - [`witness`] — entanglement detection by watching the environment.
//! - [`oracle`] — slow independent verifiers and the randomized
//!   equivalence battery.

pub mod criterion;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod witness;

pub use error::{Error, Result};

/// The three tolerance knobs shared across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Single decision epsilon for "entangled": applied to the relative
    /// commutator norm, to scaled minor values, and to negativity.
    pub decision: f64,
    /// Gap threshold for clustering sorted populations of ρ_E(0) into
    /// equal-population subspaces.
    pub grouping: f64,
    /// Populations at or below this count as zero for rank decisions.
    pub zero: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            decision: 1e-9,
            grouping: 1e-8,
            zero: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn with_decision(mut self, decision: f64) -> Self {
        self.decision = decision;
        self
    }

    pub fn with_grouping(mut self, grouping: f64) -> Self {
        self.grouping = grouping;
        self
    }

    pub fn with_zero(mut self, zero: f64) -> Self {
        self.zero = zero;
        self
    }
}
