//! Separability decisions for the dephasing joint state.
//!
//! Three routes answer the same question and must agree:
//!
//! 1. **Commutator test** — the joint state at time t is separable iff
//!    `[ρ_E(0), w(t)] = 0`, equivalently iff w(t) has no matrix elements
//!    between eigenstates of ρ_E(0) with different populations.
//! 2. **Principal minors** — closed-form minors of the partial transpose,
//!    scanned in order of decreasing population; a negative one certifies
//!    free entanglement. Separate closed forms cover the full-rank case
//!    and environments with one or several zero populations.
//! 3. **PPT negativity** — eigenvalues of the partially transposed joint
//!    state; no bound entanglement arises in pure dephasing, so a positive
//!    partial transpose here really does mean separable.
//!
//! When the state is separable, [`separable_decomposition`] exhibits an
//! explicit product-state mixture as a constructive certificate.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::evolution::{
    conditional_evolution, joint_state_rotated, ConditionalEvolution, JointState,
};
use crate::linalg::{
    commutator, hermitian_eig, partial_transpose_qubit, pauli_y, unitary_eig, ComplexMatrix,
};
use crate::model::{EnvironmentState, PureDephasingModel, QubitState};
use crate::Tolerances;

/// Frobenius-norm commutator test: separable ⟺ ‖[ρ_E(0), w(t)]‖_F ≤
/// tol·‖w(t)‖_F.
pub fn commutator_criterion(
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    tol: f64,
) -> Result<(bool, f64)> {
    if env.env_dim() != cond.env_dim() {
        return Err(Error::Dimension(format!(
            "environment dimension {} does not match propagator dimension {}",
            env.env_dim(),
            cond.env_dim()
        )));
    }
    let norm = commutator(env.rho(), cond.w()).frobenius_norm();
    Ok((norm <= tol * cond.w().frobenius_norm(), norm))
}

/// One matrix element of w(t) connecting different-population subspaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossBlockElement {
    /// Source eigenstate index i (descending-population order).
    pub source: usize,
    /// Target eigenstate index n.
    pub target: usize,
    /// |⟨n| w(t) |i⟩|.
    pub magnitude: f64,
}

/// All pairs (i, n) lying in different subspaces of the population
/// partition with |⟨n|w(t)|i⟩| > tol, sorted by descending magnitude.
/// An empty list is equivalent to the commutator test reporting separable.
pub fn cross_block_elements(
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    tol: f64,
) -> Result<Vec<CrossBlockElement>> {
    if env.env_dim() != cond.env_dim() {
        return Err(Error::Dimension(
            "environment/propagator dimension mismatch".to_string(),
        ));
    }
    let n = env.env_dim();
    let group: Vec<usize> = (0..n).map(|i| env.subspace_of(i)).collect();
    let mut out = Vec::new();
    for i in 0..n {
        for target in 0..n {
            if group[i] == group[target] {
                continue;
            }
            // ⟨n|w|i⟩ is the conjugate of the (i, n) overlap of w†.
            let magnitude = cond.overlap(i, target).norm();
            if magnitude > tol {
                out.push(CrossBlockElement {
                    source: i,
                    target,
                    magnitude,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        b.magnitude
            .partial_cmp(&a.magnitude)
            .expect("finite magnitudes")
            .then(a.source.cmp(&b.source))
            .then(a.target.cmp(&b.target))
    });
    Ok(out)
}

/// A principal minor of the partially transposed joint state, kept in
/// scaled form: the sign-carrying sum and the logarithm of the positive
/// prefactor are stored separately because the prefactor
/// |a|^(2N)|b|²·Πc_k underflows already for moderate environment sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minor {
    /// Sign-carrying factor; for the full-rank form this is
    /// Σ_n (c_n|y_ni|² − (c_i²/c_n)|y_in|²).
    pub scaled: f64,
    /// Natural logarithm of the positive prefactor.
    pub log_prefactor: f64,
}

impl Minor {
    /// The actual minor value (may underflow to ±0 for large systems;
    /// sign decisions should use `scaled`).
    pub fn value(&self) -> f64 {
        if self.scaled == 0.0 {
            0.0
        } else {
            self.scaled.signum() * (self.log_prefactor + self.scaled.abs().ln()).exp()
        }
    }
}

fn log_abs_amplitude_prefactor(qubit: &QubitState, n_exponent: usize) -> f64 {
    2.0 * (n_exponent as f64) * qubit.a().norm().ln() + 2.0 * qubit.b().norm().ln()
}

/// Closed-form value of the minor singled out by eigenstate index `i`.
///
/// Dispatch follows the rank of ρ_E(0): with all populations nonzero the
/// full-rank sum applies; with exactly one zero population the bordered
/// determinant collapses to −|a|^(2N)|b|²(Π_{k≠p}c_k)·c_i²|y_ip|²; with
/// K ≥ 2 zero populations the caller must designate which zero index `r`
/// stays in the matrix, and the minor family becomes
/// −|a|^(2(N−K+1))|b|²(Π_{c_k>0}c_k)·c_i²|y_ir|².
pub fn minor_value(
    i: usize,
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    qubit: &QubitState,
    designated_zero: Option<usize>,
) -> Result<Minor> {
    let n = env.env_dim();
    if i >= n {
        return Err(Error::Dimension(format!(
            "minor index {i} out of range for dimension {n}"
        )));
    }
    if env.env_dim() != cond.env_dim() {
        return Err(Error::Dimension(
            "environment/propagator dimension mismatch".to_string(),
        ));
    }
    let c = env.populations();
    let k_zero = env.num_zero();
    match k_zero {
        0 => {
            if designated_zero.is_some() {
                return Err(Error::Contract(
                    "designated zero index given for a full-rank environment".to_string(),
                ));
            }
            Ok(full_rank_minor(i, c, cond.overlaps(), qubit))
        }
        1 => {
            if designated_zero.is_some() {
                return Err(Error::Contract(
                    "designated zero index is only meaningful with two or more zero populations"
                        .to_string(),
                ));
            }
            let p = env.rank();
            if i == p {
                return Ok(Minor {
                    scaled: 0.0,
                    log_prefactor: 0.0,
                });
            }
            let log_prefactor = log_abs_amplitude_prefactor(qubit, n)
                + (0..n).filter(|&k| k != p).map(|k| c[k].ln()).sum::<f64>();
            Ok(Minor {
                scaled: -c[i] * c[i] * cond.overlap(i, p).norm_sqr(),
                log_prefactor,
            })
        }
        _ => {
            let r = designated_zero.ok_or_else(|| {
                Error::Contract(format!(
                    "{k_zero} zero populations: a designated zero index is required"
                ))
            })?;
            if r < env.rank() || r >= n {
                return Err(Error::Contract(format!(
                    "designated index {r} is not a zero-population index"
                )));
            }
            let log_prefactor = log_abs_amplitude_prefactor(qubit, n - k_zero + 1)
                + (0..env.rank()).map(|k| c[k].ln()).sum::<f64>();
            Ok(Minor {
                scaled: -c[i] * c[i] * cond.overlap(i, r).norm_sqr(),
                log_prefactor,
            })
        }
    }
}

fn full_rank_minor(i: usize, c: &[f64], overlaps: &ComplexMatrix, qubit: &QubitState) -> Minor {
    let n = c.len();
    let ci2 = c[i] * c[i];
    let mut sum = 0.0;
    for (k, &ck) in c.iter().enumerate() {
        sum += ck * overlaps.get(k, i).norm_sqr();
        sum -= ci2 / ck * overlaps.get(i, k).norm_sqr();
    }
    let log_prefactor =
        log_abs_amplitude_prefactor(qubit, n) + c.iter().map(|v| v.ln()).sum::<f64>();
    Minor {
        scaled: sum,
        log_prefactor,
    }
}

/// A negative minor located by the iterative search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativeMinor {
    /// Eigenstate index (descending-population order) whose minor is
    /// negative.
    pub index: usize,
    pub minor: Minor,
}

/// Outcome of the negative-minor search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinorSearch {
    /// A certifying negative minor was found: the state is entangled.
    Negative(NegativeMinor),
    /// The scan exhausted all candidates: the state is separable.
    Exhausted,
    /// |a| or |b| vanishes; no dephasing superposition exists and the
    /// minor analysis does not apply (the state is a trivial product).
    NoSuperposition,
}

impl MinorSearch {
    pub fn found(&self) -> Option<NegativeMinor> {
        match self {
            MinorSearch::Negative(m) => Some(*m),
            _ => None,
        }
    }
}

/// Iterative negative-minor search, scanning indices by decreasing
/// population.
///
/// Zero populations are handled first: if the zero subspace is coupled to
/// the support by w(t) the corresponding rank-deficient minor is returned
/// directly; if it is decoupled the environment is reduced to its support
/// and the full-rank scan runs there, exactly as the closed forms demand.
pub fn find_negative_minor(
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    qubit: &QubitState,
    tol: f64,
) -> Result<MinorSearch> {
    if env.env_dim() != cond.env_dim() {
        return Err(Error::Dimension(
            "environment/propagator dimension mismatch".to_string(),
        ));
    }
    if qubit.a().norm() <= tol || qubit.b().norm() <= tol {
        return Ok(MinorSearch::NoSuperposition);
    }
    let n = env.env_dim();
    let rank = env.rank();
    let c = env.populations();

    if rank < n {
        // Coupling between the support and the zero subspace, probed by
        // the same matrix elements the rank-deficient minors use.
        for i in 0..rank {
            for r in rank..n {
                if cond.overlap(i, r).norm() > tol {
                    let minor = if n - rank == 1 {
                        minor_value(i, env, cond, qubit, None)?
                    } else {
                        minor_value(i, env, cond, qubit, Some(r))?
                    };
                    return Ok(MinorSearch::Negative(NegativeMinor { index: i, minor }));
                }
            }
        }
        // Decoupled zero subspace: drop it and rerun the full-rank scan on
        // the supported part.
        let keep: Vec<usize> = (0..rank).collect();
        let reduced = cond.overlaps().submatrix(&keep);
        return Ok(scan_full_rank(&c[..rank], &reduced, qubit, tol));
    }

    Ok(scan_full_rank(c, cond.overlaps(), qubit, tol))
}

fn scan_full_rank(
    c: &[f64],
    overlaps: &ComplexMatrix,
    qubit: &QubitState,
    tol: f64,
) -> MinorSearch {
    for i in 0..c.len() {
        let minor = full_rank_minor(i, c, overlaps, qubit);
        if minor.scaled < -tol {
            return MinorSearch::Negative(NegativeMinor { index: i, minor });
        }
    }
    MinorSearch::Exhausted
}

/// Negativity and minimum eigenvalue of the partial transpose of an
/// arbitrary 2N×2N Hermitian state.
pub fn ppt_negativity_of(matrix: &ComplexMatrix, env_dim: usize) -> Result<(f64, f64)> {
    let pt = partial_transpose_qubit(matrix, env_dim)?;
    let eig = hermitian_eig(&pt, 1e-10)?;
    let negativity = eig
        .eigenvalues()
        .iter()
        .map(|&l| (-l).max(0.0))
        .sum::<f64>();
    let min_eigenvalue = eig.eigenvalues()[0];
    Ok((negativity, min_eigenvalue))
}

/// Negativity of the partial transpose of a joint state: Σ|negative
/// eigenvalues| together with the minimum eigenvalue.
pub fn ppt_negativity(joint: &JointState) -> Result<(f64, f64)> {
    ppt_negativity_of(joint.matrix(), joint.env_dim())
}

/// One product term of a separable decomposition.
#[derive(Debug, Clone)]
pub struct DecompositionTerm {
    pub weight: f64,
    /// 2×2 pure qubit state.
    pub qubit_factor: ComplexMatrix,
    /// N×N environment state.
    pub env_factor: ComplexMatrix,
}

/// An explicit mixture Σ_k p_k ρ_k ⊗ R_k certifying separability.
#[derive(Debug, Clone)]
pub struct SeparableDecomposition {
    terms: Vec<DecompositionTerm>,
}

impl SeparableDecomposition {
    pub fn terms(&self) -> &[DecompositionTerm] {
        &self.terms
    }

    /// Assemble Σ_k p_k ρ_k ⊗ R_k as a 2N×2N matrix.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let first = self
            .terms
            .first()
            .ok_or_else(|| Error::Contract("empty decomposition".to_string()))?;
        let dim = 2 * first.env_factor.dim();
        let mut out = ComplexMatrix::zeros(dim);
        for term in &self.terms {
            let product = term.qubit_factor.kron(&term.env_factor)?;
            out = out.add(&product.scale(C64::new(term.weight, 0.0)));
        }
        Ok(out)
    }
}

/// Constructive separable decomposition of the rotated-frame joint state.
///
/// For each equal-population subspace s the restriction of w(t) is unitary
/// (that is exactly the separability condition); diagonalizing it as
/// exp(−i h_s) with phases χ_k and vectors |k⟩ yields one term per
/// subspace dimension: weight c_s, qubit factor the projector onto
/// a|0⟩ + b e^{−iχ_k}|1⟩, environment factor |k⟩⟨k| embedded in the full
/// space. Calling this on an entangled state is a contract error.
pub fn separable_decomposition(
    env: &EnvironmentState,
    cond: &ConditionalEvolution,
    qubit: &QubitState,
    tols: &Tolerances,
) -> Result<SeparableDecomposition> {
    let (separable, norm) = commutator_criterion(env, cond, tols.decision)?;
    if !separable {
        return Err(Error::Contract(format!(
            "separable decomposition requested for an entangled state (commutator norm {norm:.3e})"
        )));
    }
    let n = env.env_dim();
    let eigvecs = env.eigenvectors();
    let mut terms = Vec::new();
    for (s, indices) in env.partition().iter().enumerate() {
        let weight = env.populations()[indices[0]];
        let is_zero_group = env.num_zero() > 0 && s == env.partition().len() - 1;
        if is_zero_group {
            continue; // zero-weight terms contribute nothing
        }
        // Restriction of w to the subspace, from the w† overlaps.
        let block = cond.overlaps().submatrix(indices).adjoint();
        let defect = (&block.adjoint().matmul(&block)
            - &ComplexMatrix::identity(indices.len()))
            .frobenius_norm();
        if defect > 1e-6 * indices.len() as f64 {
            return Err(Error::Contract(format!(
                "subspace restriction of w is not unitary (defect {defect:.3e}): state is entangled"
            )));
        }
        let ue = unitary_eig(&block, 1e-6)?;
        for (k, &chi) in ue.phases().iter().enumerate() {
            // Embed the block eigenvector into the full environment space.
            let coeffs = ue.eigenvectors().column(k);
            let mut vec = vec![C64::new(0.0, 0.0); n];
            for (l, &idx) in indices.iter().enumerate() {
                let col = eigvecs.column(idx);
                for (row, v) in vec.iter_mut().enumerate() {
                    *v += col[row] * coeffs[l];
                }
            }
            let env_factor = ComplexMatrix::from_fn(n, |i, j| vec[i] * vec[j].conj());
            let phase = (-C64::i() * chi).exp();
            let qb = QubitState::new(qubit.a(), qubit.b() * phase)
                .expect("phase preserves normalization");
            terms.push(DecompositionTerm {
                weight,
                qubit_factor: qb.density_matrix(),
                env_factor,
            });
        }
    }
    Ok(SeparableDecomposition { terms })
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence_two_qubit(state: &ComplexMatrix) -> Result<f64> {
    if state.dim() != 4 {
        return Err(Error::Dimension(format!(
            "concurrence needs a 4x4 state, got dim {}",
            state.dim()
        )));
    }
    let defect = state.hermiticity_defect();
    if defect > 1e-10 * state.frobenius_norm().max(1.0) {
        return Err(Error::Contract(format!(
            "state is not Hermitian: defect {defect:.3e}"
        )));
    }
    let yy = pauli_y().kron(&pauli_y())?;
    let conj = ComplexMatrix::from_fn(4, |i, j| state.get(i, j).conj());
    let flipped = yy.matmul(&conj).matmul(&yy);

    // Eigenvalues of ρ·ρ̃ equal those of √ρ·ρ̃·√ρ, which is Hermitian PSD.
    let eig = hermitian_eig(state, 1e-10)?;
    let sqrt_rho = eig.map(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let m = sqrt_rho.matmul(&flipped).matmul(&sqrt_rho);
    let meig = hermitian_eig(&m, 1e-8)?;
    let mut lambdas: Vec<f64> = meig
        .eigenvalues()
        .iter()
        .map(|&l| l.max(0.0).sqrt())
        .collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Complete verdict on the joint state at one time, with all evidence.
#[derive(Debug, Clone)]
pub struct EntanglementVerdict {
    pub separable: bool,
    /// True when |a| or |b| vanishes: the joint state is a trivial
    /// product, the commutator criterion does not apply, and `separable`
    /// is true by construction.
    pub no_superposition: bool,
    /// ‖[ρ_E(0), w(t)]‖_F.
    pub commutator_norm: f64,
    pub cross_block: Vec<CrossBlockElement>,
    pub negative_minor: Option<NegativeMinor>,
    /// Σ|negative eigenvalues| of the partial transpose.
    pub negativity: f64,
    pub min_pt_eigenvalue: f64,
    pub decomposition: Option<SeparableDecomposition>,
}

/// Run every detector, cross-check them, and assemble the verdict.
///
/// If the three routes disagree on any input, an inconsistency error
/// carrying all raw values is returned; that error firing is a bug.
pub fn verdict(
    model: &PureDephasingModel,
    qubit: &QubitState,
    env: &EnvironmentState,
    t: f64,
    tols: &Tolerances,
) -> Result<EntanglementVerdict> {
    let cond = conditional_evolution(model, env, t)?;
    let (comm_separable, commutator_norm) = commutator_criterion(env, &cond, tols.decision)?;
    let cross_block = cross_block_elements(env, &cond, tols.decision)?;
    let search = find_negative_minor(env, &cond, qubit, tols.decision)?;
    let joint = joint_state_rotated(qubit, env, &cond)?;
    let (negativity, min_pt_eigenvalue) = ppt_negativity(&joint)?;

    if matches!(search, MinorSearch::NoSuperposition) {
        // Trivial product state: |ψ⟩ is a pole of the Bloch sphere.
        let env_factor = if qubit.b().norm() <= tols.decision {
            env.rho().clone()
        } else {
            cond.w().matmul(env.rho()).matmul(&cond.w().adjoint())
        };
        let decomposition = SeparableDecomposition {
            terms: vec![DecompositionTerm {
                weight: 1.0,
                qubit_factor: qubit.density_matrix(),
                env_factor,
            }],
        };
        if negativity > tols.decision {
            return Err(Error::Inconsistency(format!(
                "product state shows negativity {negativity:.3e} at t = {t}"
            )));
        }
        return Ok(EntanglementVerdict {
            separable: true,
            no_superposition: true,
            commutator_norm,
            cross_block,
            negative_minor: None,
            negativity,
            min_pt_eigenvalue,
            decomposition: Some(decomposition),
        });
    }

    let minor_entangled = search.found().is_some();
    let ppt_entangled = negativity > tols.decision;
    let cross_entangled = !cross_block.is_empty();
    let comm_entangled = !comm_separable;
    if comm_entangled != minor_entangled
        || comm_entangled != ppt_entangled
        || comm_entangled != cross_entangled
    {
        return Err(Error::Inconsistency(format!(
            "detectors disagree at t = {t}: commutator norm {commutator_norm:.6e} (entangled: \
             {comm_entangled}), negative minor {:?} (entangled: {minor_entangled}), negativity \
             {negativity:.6e} (entangled: {ppt_entangled}), {} cross-block elements (entangled: \
             {cross_entangled})",
            search.found(),
            cross_block.len(),
        )));
    }

    let decomposition = if comm_separable {
        Some(separable_decomposition(env, &cond, qubit, tols)?)
    } else {
        None
    };

    Ok(EntanglementVerdict {
        separable: comm_separable,
        no_superposition: false,
        commutator_norm,
        cross_block,
        negative_minor: search.found(),
        negativity,
        min_pt_eigenvalue,
        decomposition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_distance;
    use crate::model::{analyze_environment, build_random_model, ModelClass};
    use approx::assert_abs_diff_eq;

    fn env_of(rho: &ComplexMatrix) -> EnvironmentState {
        analyze_environment(rho, 1e-8, 1e-12).unwrap()
    }

    fn mixed(n: usize) -> ComplexMatrix {
        ComplexMatrix::identity(n).scale(C64::new(1.0 / n as f64, 0.0))
    }

    #[test]
    fn maximally_mixed_environment_always_commutes() {
        let (model, _) = build_random_model(4, ModelClass::Generic, 21).unwrap();
        let env = env_of(&mixed(4));
        for &t in &[0.3, 1.0, 2.5] {
            let cond = conditional_evolution(&model, &env, t).unwrap();
            let (separable, norm) = commutator_criterion(&env, &cond, 1e-9).unwrap();
            assert!(separable, "norm {norm}");
            assert!(norm <= 1e-12);
            assert!(cross_block_elements(&env, &cond, 1e-9).unwrap().is_empty());
        }
    }

    #[test]
    fn random_unitary_class_is_separable_at_all_times() {
        let (model, rho) = build_random_model(4, ModelClass::RandomUnitary, 22).unwrap();
        let env = env_of(&rho);
        for &t in &[0.1, 0.7, 3.0] {
            let cond = conditional_evolution(&model, &env, t).unwrap();
            let (separable, norm) = commutator_criterion(&env, &cond, 1e-9).unwrap();
            assert!(separable, "t {t} norm {norm}");
            assert!(norm <= 1e-10, "t {t} norm {norm}");
        }
    }

    #[test]
    fn block_preserving_class_has_no_cross_block_elements() {
        let (model, rho) = build_random_model(5, ModelClass::BlockPreserving, 23).unwrap();
        let env = env_of(&rho);
        for &t in &[0.2, 0.9, 2.0] {
            let cond = conditional_evolution(&model, &env, t).unwrap();
            let cross = cross_block_elements(&env, &cond, 1e-9).unwrap();
            assert!(cross.is_empty(), "t {t}: {cross:?}");
        }
    }

    #[test]
    fn generic_model_shows_cross_block_elements_and_negative_minor() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 24).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 1.0).unwrap();
        let cross = cross_block_elements(&env, &cond, 1e-9).unwrap();
        assert!(!cross.is_empty());
        // Sorted by descending magnitude.
        for pair in cross.windows(2) {
            assert!(pair[0].magnitude >= pair[1].magnitude);
        }
        let search = find_negative_minor(&env, &cond, &QubitState::plus(), 1e-9).unwrap();
        assert!(search.found().is_some());
    }

    #[test]
    fn generic_seed_42_commutator_norm_anchor() {
        // Regression anchor recorded from the first run of the generator.
        let (model, rho) = build_random_model(3, ModelClass::Generic, 42).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 1.0).unwrap();
        let (separable, norm) = commutator_criterion(&env, &cond, 1e-9).unwrap();
        assert!(!separable);
        assert!(norm > 1e-6);
        assert_abs_diff_eq!(norm, 6.341129388439444e-1, epsilon = 1e-12);
    }

    #[test]
    fn minors_vanish_for_equal_populations() {
        let (model, _) = build_random_model(4, ModelClass::Generic, 25).unwrap();
        let env = env_of(&mixed(4));
        let cond = conditional_evolution(&model, &env, 1.3).unwrap();
        for i in 0..4 {
            let m = minor_value(i, &env, &cond, &QubitState::plus(), None).unwrap();
            assert!(m.scaled.abs() <= 1e-12, "index {i}: {}", m.scaled);
        }
    }

    #[test]
    fn largest_population_minor_is_negative_when_coupled_downward() {
        // Two-level environment, w = σ_x at "time" π/2 couples the two
        // eigenstates; the larger population must yield a negative minor.
        let rho = ComplexMatrix::diag_real(&[0.7, 0.3]);
        let env = env_of(&rho);
        let model = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(2),
            ComplexMatrix::zeros(2),
            crate::linalg::pauli_x(),
        )
        .unwrap();
        let cond = conditional_evolution(&model, &env, std::f64::consts::FRAC_PI_2).unwrap();
        let m0 = minor_value(0, &env, &cond, &QubitState::plus(), None).unwrap();
        assert!(m0.scaled < -1e-3, "scaled {}", m0.scaled);
        // Closed form: the swap gives S_0 = c_1 − c_0²/c_1.
        assert_abs_diff_eq!(m0.scaled, 0.3 - 0.49 / 0.3, epsilon = 1e-10);
    }

    #[test]
    fn minor_dispatch_errors() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 26).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 0.5).unwrap();
        let q = QubitState::plus();
        assert!(minor_value(7, &env, &cond, &q, None).is_err());
        assert!(minor_value(0, &env, &cond, &q, Some(1)).is_err());
    }

    #[test]
    fn coupled_zero_population_yields_the_rank_deficient_minor() {
        // Environment diag(0.6, 0.4, 0) with w swapping the zero state
        // into the support: the search must return the closed-form value
        // for the coupled pair.
        let rho = ComplexMatrix::diag_real(&[0.6, 0.4, 0.0]);
        let env = env_of(&rho);
        assert_eq!(env.num_zero(), 1);
        // V1 generates a rotation between states 1 and 2 at t = π/2.
        let mut v1 = ComplexMatrix::zeros(3);
        v1.set(1, 2, C64::new(1.0, 0.0));
        v1.set(2, 1, C64::new(1.0, 0.0));
        let model = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
            v1,
        )
        .unwrap();
        let cond = conditional_evolution(&model, &env, std::f64::consts::FRAC_PI_2).unwrap();
        let qubit = QubitState::plus();
        let search = find_negative_minor(&env, &cond, &qubit, 1e-9).unwrap();
        let found = search.found().expect("zero state is coupled");
        assert_eq!(found.index, 1, "population 0.4 couples to the zero state");
        // Closed form: scaled = −c_i²|y_ip|² with |y_ip| = 1 for the swap.
        assert_abs_diff_eq!(found.minor.scaled, -0.16, epsilon = 1e-10);
        // Oracle agreement for the same minor.
        let direct = crate::oracle::minor_direct(&env, &cond, &qubit, 1, &[]).unwrap();
        assert_abs_diff_eq!(found.minor.value(), direct.re, epsilon = 1e-12);
    }

    #[test]
    fn decoupled_zero_subspace_reduces_to_the_support_scan() {
        // Zero population decoupled from the support: the verdict comes
        // from the reduced two-level scan, which sees a swap between
        // populations 0.6 and 0.4 and flags entanglement at index 0.
        let rho = ComplexMatrix::diag_real(&[0.6, 0.4, 0.0]);
        let env = env_of(&rho);
        let mut v1 = ComplexMatrix::zeros(3);
        v1.set(0, 1, C64::new(1.0, 0.0));
        v1.set(1, 0, C64::new(1.0, 0.0));
        let model = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
            v1,
        )
        .unwrap();
        let cond = conditional_evolution(&model, &env, std::f64::consts::FRAC_PI_2).unwrap();
        let search = find_negative_minor(&env, &cond, &QubitState::plus(), 1e-9).unwrap();
        let found = search.found().expect("support states are coupled");
        assert_eq!(found.index, 0);
        // Reduced two-level closed form: c_1 − c_0²/c_1.
        assert_abs_diff_eq!(found.minor.scaled, 0.4 - 0.36 / 0.4, epsilon = 1e-10);

        // With no coupling at all the scan must exhaust.
        let idle = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
        )
        .unwrap();
        let cond = conditional_evolution(&idle, &env, 1.0).unwrap();
        assert_eq!(
            find_negative_minor(&env, &cond, &QubitState::plus(), 1e-9).unwrap(),
            MinorSearch::Exhausted
        );
    }

    #[test]
    fn no_superposition_is_flagged() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 27).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 1.0).unwrap();
        let pole = QubitState::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        assert_eq!(
            find_negative_minor(&env, &cond, &pole, 1e-9).unwrap(),
            MinorSearch::NoSuperposition
        );
    }

    #[test]
    fn product_states_have_zero_negativity() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 28).unwrap();
        let env = env_of(&rho);
        let qubit = QubitState::plus();
        let joint =
            crate::evolution::joint_state(&model, &qubit, &env, 0.0, crate::evolution::Frame::Rotated)
                .unwrap();
        let (neg, min_eig) = ppt_negativity(&joint).unwrap();
        assert!(neg <= 1e-12, "negativity {neg}");
        assert!(min_eig >= -1e-12);
    }

    #[test]
    fn decomposition_of_mixed_environment_has_n_terms_and_reconstructs() {
        let (model, _) = build_random_model(4, ModelClass::Generic, 29).unwrap();
        let env = env_of(&mixed(4));
        let t = 1.1;
        let cond = conditional_evolution(&model, &env, t).unwrap();
        let qubit = QubitState::plus();
        let dec = separable_decomposition(&env, &cond, &qubit, &Tolerances::default()).unwrap();
        assert_eq!(dec.terms().len(), 4);
        let weight_sum: f64 = dec.terms().iter().map(|t| t.weight).sum();
        assert_abs_diff_eq!(weight_sum, 1.0, epsilon = 1e-10);

        let target = joint_state_rotated(&qubit, &env, &cond).unwrap();
        let dist = trace_distance(&dec.reconstruct().unwrap(), target.matrix()).unwrap();
        assert!(dist <= 1e-8, "reconstruction distance {dist}");
    }

    #[test]
    fn decomposition_at_zero_time_is_the_exact_product() {
        let (model, rho) = build_random_model(3, ModelClass::BlockPreserving, 30).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 0.0).unwrap();
        let qubit = QubitState::plus();
        let dec = separable_decomposition(&env, &cond, &qubit, &Tolerances::default()).unwrap();
        let psi = qubit.density_matrix();
        for term in dec.terms() {
            assert!(term.qubit_factor.max_abs_diff(&psi) < 1e-10);
        }
        let rebuilt = dec.reconstruct().unwrap();
        let product = psi.kron(&rho).unwrap();
        assert!(rebuilt.max_abs_diff(&product) < 1e-10);
    }

    #[test]
    fn decomposition_rejects_entangled_states() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 31).unwrap();
        let env = env_of(&rho);
        let cond = conditional_evolution(&model, &env, 1.0).unwrap();
        let err = separable_decomposition(&env, &cond, &QubitState::plus(), &Tolerances::default())
            .unwrap_err();
        assert!(matches!(err, Error::Contract(_)));
    }

    #[test]
    fn concurrence_of_reference_states() {
        // Bell state (|00⟩ + |11⟩)/√2.
        let mut bell = ComplexMatrix::zeros(4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            bell.set(i, j, C64::new(0.5, 0.0));
        }
        assert_abs_diff_eq!(concurrence_two_qubit(&bell).unwrap(), 1.0, epsilon = 1e-10);

        // Product states have zero concurrence.
        let q = QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let product = q
            .density_matrix()
            .kron(&ComplexMatrix::diag_real(&[0.2, 0.8]))
            .unwrap();
        assert_abs_diff_eq!(
            concurrence_two_qubit(&product).unwrap(),
            0.0,
            epsilon = 1e-10
        );

        assert!(concurrence_two_qubit(&ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn verdict_on_mixed_environment_is_separable_with_decomposition() {
        let (model, _) = build_random_model(3, ModelClass::Generic, 32).unwrap();
        let env = env_of(&mixed(3));
        let v = verdict(&model, &QubitState::plus(), &env, 1.0, &Tolerances::default()).unwrap();
        assert!(v.separable);
        assert!(!v.no_superposition);
        assert_eq!(v.decomposition.as_ref().unwrap().terms().len(), 3);
        assert!(v.negativity <= 1e-10);
    }

    #[test]
    fn verdict_on_generic_thermal_model_is_entangled_at_the_top_population() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 33).unwrap();
        let env = env_of(&rho);
        let v = verdict(&model, &QubitState::plus(), &env, 1.0, &Tolerances::default()).unwrap();
        assert!(!v.separable);
        let minor = v.negative_minor.expect("negative minor present");
        assert_eq!(minor.index, 0, "largest population couples downward");
        assert!(v.negativity > 1e-9);
        assert!(v.min_pt_eigenvalue < 0.0);
        assert!(v.decomposition.is_none());
    }

    #[test]
    fn verdict_handles_rank_deficient_environments() {
        let tols = Tolerances::default();
        let qubit = QubitState::plus();
        let rho = ComplexMatrix::diag_real(&[0.6, 0.4, 0.0]);
        let env = env_of(&rho);

        // Coupling into the zero state: entangled, consistent across all
        // detectors.
        let mut v1 = ComplexMatrix::zeros(3);
        v1.set(1, 2, C64::new(1.0, 0.0));
        v1.set(2, 1, C64::new(1.0, 0.0));
        let coupled = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
            v1,
        )
        .unwrap();
        let v = verdict(&coupled, &qubit, &env, 1.0, &tols).unwrap();
        assert!(!v.separable);
        assert!(v.negativity > 1e-9);

        // Decoupled zero subspace with dynamics confined to one support
        // state: separable, and the decomposition still reconstructs.
        let phase_only = crate::model::PureDephasingModel::new(
            0.0,
            0.0,
            ComplexMatrix::zeros(3),
            ComplexMatrix::zeros(3),
            ComplexMatrix::diag_real(&[0.7, -0.3, 0.2]),
        )
        .unwrap();
        let v = verdict(&phase_only, &qubit, &env, 1.0, &tols).unwrap();
        assert!(v.separable);
        let dec = v.decomposition.unwrap();
        // One term per nonzero population; the zero subspace carries no
        // weight.
        assert_eq!(dec.terms().len(), 2);
        let cond = conditional_evolution(&phase_only, &env, 1.0).unwrap();
        let target = joint_state_rotated(&qubit, &env, &cond).unwrap();
        let dist = trace_distance(&dec.reconstruct().unwrap(), target.matrix()).unwrap();
        assert!(dist <= 1e-8, "distance {dist}");
    }

    #[test]
    fn verdict_flags_poles_as_trivially_separable() {
        let (model, rho) = build_random_model(3, ModelClass::Generic, 34).unwrap();
        let env = env_of(&rho);
        let pole = QubitState::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        let v = verdict(&model, &pole, &env, 1.0, &Tolerances::default()).unwrap();
        assert!(v.separable);
        assert!(v.no_superposition);
        assert!(v.negativity <= 1e-10);
        let dec = v.decomposition.unwrap();
        assert_eq!(dec.terms().len(), 1);
        let target = crate::evolution::joint_state(
            &model,
            &pole,
            &env,
            1.0,
            crate::evolution::Frame::Rotated,
        )
        .unwrap();
        let dist = trace_distance(&dec.reconstruct().unwrap(), target.matrix()).unwrap();
        assert!(dist <= 1e-10, "distance {dist}");
    }
}
