//! The pure-dephasing system: a qubit with splittings ε₀, ε₁ coupled to an
//! N-dimensional environment through state-conditioned operators,
//!
//! ```text
//!     H = H_Q + H_E + |0⟩⟨0| ⊗ V₀ + |1⟩⟨1| ⊗ V₁,
//! ```
//!
//! together with the initial states of both parties and generators for the
//! model families used by the test batteries.
//!
//! Seeded generation uses the ChaCha8 stream cipher (`rand_chacha`,
//! seeded through `SeedableRng::seed_from_u64`, i.e. SplitMix64 key
//! expansion) with standard-normal variates from `rand_distr`, so a given
//! `(class, dim, seed)` triple always yields bit-identical matrices.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, pauli_x, pauli_z, ComplexMatrix, DEFAULT_DIM_LIMIT};

const HERM_TOL: f64 = 1e-10;

/// Qubit energy splittings and the conditioned environment operators.
#[derive(Debug, Clone)]
pub struct PureDephasingModel {
    eps0: f64,
    eps1: f64,
    h_env: ComplexMatrix,
    v0: ComplexMatrix,
    v1: ComplexMatrix,
}

impl PureDephasingModel {
    /// Validates Hermiticity (1e-10 relative) and matching dimensions of
    /// all three environment operators.
    pub fn new(
        eps0: f64,
        eps1: f64,
        h_env: ComplexMatrix,
        v0: ComplexMatrix,
        v1: ComplexMatrix,
    ) -> Result<Self> {
        let n = h_env.dim();
        if n == 0 || n > DEFAULT_DIM_LIMIT / 2 {
            return Err(Error::Dimension(format!(
                "environment dimension {n} outside 1..={}",
                DEFAULT_DIM_LIMIT / 2
            )));
        }
        for (name, m) in [("h_env", &h_env), ("v0", &v0), ("v1", &v1)] {
            if m.dim() != n {
                return Err(Error::Dimension(format!(
                    "{name} has dim {}, expected {n}",
                    m.dim()
                )));
            }
            let defect = m.hermiticity_defect();
            if defect > HERM_TOL * m.frobenius_norm().max(1.0) {
                return Err(Error::Contract(format!(
                    "{name} is not Hermitian: defect {defect:.3e}"
                )));
            }
        }
        if !eps0.is_finite() || !eps1.is_finite() {
            return Err(Error::Contract("non-finite qubit splitting".to_string()));
        }
        Ok(Self {
            eps0,
            eps1,
            h_env,
            v0,
            v1,
        })
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn h_env(&self) -> &ComplexMatrix {
        &self.h_env
    }

    pub fn v0(&self) -> &ComplexMatrix {
        &self.v0
    }

    pub fn v1(&self) -> &ComplexMatrix {
        &self.v1
    }

    pub fn env_dim(&self) -> usize {
        self.h_env.dim()
    }

    /// Conditioned environment Hamiltonian H₀ = H_E + V₀.
    pub fn h0(&self) -> ComplexMatrix {
        self.h_env.add(&self.v0)
    }

    /// Conditioned environment Hamiltonian H₁ = H_E + V₁.
    pub fn h1(&self) -> ComplexMatrix {
        self.h_env.add(&self.v1)
    }
}

/// Pure initial qubit state a|0⟩ + b|1⟩ with |a|² + |b|² = 1.
///
/// Zero amplitudes are allowed here; operations that need a genuine
/// superposition gate on them explicitly.
#[derive(Debug, Clone, Copy)]
pub struct QubitState {
    a: C64,
    b: C64,
}

impl QubitState {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "qubit amplitudes not normalized: |a|^2 + |b|^2 = {norm}"
            )));
        }
        Ok(Self { a, b })
    }

    /// The balanced superposition (|0⟩ + |1⟩)/√2.
    pub fn plus() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: C64::new(r, 0.0),
            b: C64::new(r, 0.0),
        }
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    /// Density matrix |ψ⟩⟨ψ|.
    pub fn density_matrix(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, self.a * self.a.conj());
        m.set(0, 1, self.a * self.b.conj());
        m.set(1, 0, self.b * self.a.conj());
        m.set(1, 1, self.b * self.b.conj());
        m
    }
}

/// Spectral form of the initial environment state: populations c_n in
/// descending order, their eigenvectors, and the partition of indices into
/// equal-population subspaces (a trailing subspace collects populations
/// below the zero tolerance).
#[derive(Debug, Clone)]
pub struct EnvironmentState {
    rho: ComplexMatrix,
    populations: Vec<f64>,
    eigenvectors: ComplexMatrix,
    partition: Vec<Vec<usize>>,
    rank: usize,
}

impl EnvironmentState {
    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    /// Eigenvalues c_n of ρ_E(0), descending.
    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    /// Columns are the eigenvectors |n⟩, ordered like [`populations`].
    ///
    /// [`populations`]: Self::populations
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Groups of indices with equal population; when zero populations
    /// exist they form the final group.
    pub fn partition(&self) -> &[Vec<usize>] {
        &self.partition
    }

    /// Number of populations above the zero tolerance.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn env_dim(&self) -> usize {
        self.populations.len()
    }

    /// Count of (numerically) zero populations.
    pub fn num_zero(&self) -> usize {
        self.env_dim() - self.rank
    }

    /// Which partition group the given index belongs to.
    pub fn subspace_of(&self, index: usize) -> usize {
        self.partition
            .iter()
            .position(|g| g.contains(&index))
            .expect("index within environment dimension")
    }
}

/// Spectral analysis of an initial environment density matrix.
///
/// Eigenvalues are sorted descending and clustered greedily: walking down
/// the sorted list, a gap larger than `grouping_tol` starts a new
/// subspace. Populations at or below `zero_tol` form a designated final
/// subspace and do not count toward the rank.
pub fn analyze_environment(
    rho: &ComplexMatrix,
    grouping_tol: f64,
    zero_tol: f64,
) -> Result<EnvironmentState> {
    let defect = rho.hermiticity_defect();
    if defect > 1e-10 * rho.frobenius_norm().max(1.0) {
        return Err(Error::Contract(format!(
            "density matrix is not Hermitian: defect {defect:.3e}"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
        return Err(Error::Contract(format!(
            "density matrix trace is {tr}, expected 1"
        )));
    }
    let eig = hermitian_eig(rho, HERM_TOL)?;
    if let Some(&min) = eig.eigenvalues().first() {
        if min < -1e-12 {
            return Err(Error::Contract(format!(
                "density matrix is not positive semidefinite: min eigenvalue {min:.3e}"
            )));
        }
    }

    let n = rho.dim();
    // Flip to descending order.
    let populations: Vec<f64> = eig.eigenvalues().iter().rev().copied().collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| eig.eigenvectors().get(i, n - 1 - k));

    let rank = populations.iter().filter(|&&c| c > zero_tol).count();
    let mut partition: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for i in 0..rank {
        if !current.is_empty() && populations[i - 1] - populations[i] > grouping_tol {
            partition.push(std::mem::take(&mut current));
        }
        current.push(i);
    }
    if !current.is_empty() {
        partition.push(current);
    }
    if rank < n {
        partition.push((rank..n).collect());
    }

    Ok(EnvironmentState {
        rho: rho.clone(),
        populations,
        eigenvectors,
        partition,
        rank,
    })
}

/// Gibbs state exp(−β h)/Tr exp(−β h), computed spectrally.
pub fn build_thermal(h: &ComplexMatrix, beta: f64) -> Result<ComplexMatrix> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Contract(format!(
            "inverse temperature must be finite and nonnegative, got {beta}"
        )));
    }
    let eig = hermitian_eig(h, HERM_TOL)?;
    let ground = eig
        .eigenvalues()
        .first()
        .copied()
        .ok_or_else(|| Error::Dimension("empty Hamiltonian".to_string()))?;
    // Shift by the ground energy so the exponentials never overflow.
    let z: f64 = eig
        .eigenvalues()
        .iter()
        .map(|&l| (-beta * (l - ground)).exp())
        .sum();
    Ok(eig.map(|l| C64::new((-beta * (l - ground)).exp() / z, 0.0)))
}

/// Families of randomly generated models.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    /// Unstructured Hermitian operators with a thermal initial state.
    Generic,
    /// H_E, V₀, V₁ share one eigenbasis and ρ_E(0) is a function of H_E:
    /// the environment acts as a source of quasi-static classical fields
    /// and never entangles with the qubit.
    RandomUnitary,
    /// The conditioned Hamiltonians are block-diagonal with respect to the
    /// equal-population subspaces of ρ_E(0): dynamics inside each block
    /// can be nontrivial, yet no entanglement is generated.
    BlockPreserving,
}

impl ModelClass {
    pub const ALL: [ModelClass; 3] = [
        ModelClass::Generic,
        ModelClass::RandomUnitary,
        ModelClass::BlockPreserving,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ModelClass::Generic => "generic",
            ModelClass::RandomUnitary => "random_unitary",
            ModelClass::BlockPreserving => "block_preserving",
        }
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    ComplexMatrix::from_fn(n, |i, j| (g.get(i, j) + g.get(j, i).conj()) * C64::new(0.5, 0.0))
}

/// A random unitary as the eigenbasis of a random Hermitian matrix.
fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Result<ComplexMatrix> {
    let h = random_hermitian(rng, n);
    Ok(hermitian_eig(&h, HERM_TOL)?.eigenvectors().clone())
}

fn random_reals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Seeded model generator. Returns the model together with an initial
/// environment state matched to the class. Identical `(env_dim, class,
/// seed)` triples produce bit-identical output.
pub fn build_random_model(
    env_dim: usize,
    class: ModelClass,
    seed: u64,
) -> Result<(PureDephasingModel, ComplexMatrix)> {
    if env_dim < 2 {
        return Err(Error::Dimension(format!(
            "environment dimension must be at least 2, got {env_dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = env_dim;
    let eps0: f64 = rng.sample(StandardNormal);
    let eps1: f64 = rng.sample(StandardNormal);

    match class {
        ModelClass::Generic => {
            let h_env = random_hermitian(&mut rng, n);
            let v0 = random_hermitian(&mut rng, n);
            let v1 = random_hermitian(&mut rng, n);
            let beta = rng.random_range(0.1..=2.0);
            let rho = build_thermal(&h_env, beta)?;
            Ok((PureDephasingModel::new(eps0, eps1, h_env, v0, v1)?, rho))
        }
        ModelClass::RandomUnitary => {
            let basis = random_basis(&mut rng, n)?;
            let in_basis = |d: Vec<f64>| -> ComplexMatrix {
                let mut m = ComplexMatrix::zeros(n);
                for (k, &val) in d.iter().enumerate() {
                    let col = basis.column(k);
                    for i in 0..n {
                        for j in 0..n {
                            let add = col[i] * col[j].conj() * val;
                            m.set(i, j, m.get(i, j) + add);
                        }
                    }
                }
                m
            };
            let h_env = in_basis(random_reals(&mut rng, n));
            let v0 = in_basis(random_reals(&mut rng, n));
            let v1 = in_basis(random_reals(&mut rng, n));
            let beta = rng.random_range(0.1..=2.0);
            let rho = build_thermal(&h_env, beta)?;
            Ok((PureDephasingModel::new(eps0, eps1, h_env, v0, v1)?, rho))
        }
        ModelClass::BlockPreserving => {
            // Partition the levels into at least two groups.
            let groups = rng.random_range(2..=n.min(3));
            let mut sizes = vec![1usize; groups];
            for _ in groups..n {
                let k = rng.random_range(0..groups);
                sizes[k] += 1;
            }
            // Block-diagonal conditioned Hamiltonians in the unrotated
            // basis.
            let mut h0 = ComplexMatrix::zeros(n);
            let mut h1 = ComplexMatrix::zeros(n);
            let mut offset = 0;
            for &size in &sizes {
                let b0 = random_hermitian(&mut rng, size);
                let b1 = random_hermitian(&mut rng, size);
                for i in 0..size {
                    for j in 0..size {
                        h0.set(offset + i, offset + j, b0.get(i, j));
                        h1.set(offset + i, offset + j, b1.get(i, j));
                    }
                }
                offset += size;
            }
            // Populations constant inside each group, well separated
            // across groups.
            let mut raw: Vec<f64> = (0..groups)
                .map(|s| (s + 1) as f64 + rng.random_range(0.0..0.5))
                .collect();
            let total: f64 = raw
                .iter()
                .zip(sizes.iter())
                .map(|(q, &d)| q * d as f64)
                .sum();
            for q in &mut raw {
                *q /= total;
            }
            let mut diag = Vec::with_capacity(n);
            for (s, &size) in sizes.iter().enumerate() {
                diag.extend(std::iter::repeat_n(raw[s], size));
            }
            let rho_diag = ComplexMatrix::diag_real(&diag);

            // Hide the structure behind one random basis change; the
            // entanglement verdicts are invariant under it.
            let q = random_basis(&mut rng, n)?;
            let conj = |m: &ComplexMatrix| q.matmul(m).matmul(&q.adjoint());
            let h_env = conj(&h0);
            let v1 = &conj(&h1) - &h_env;
            let rho = conj(&rho_diag);
            Ok((
                PureDephasingModel::new(eps0, eps1, h_env, ComplexMatrix::zeros(n), v1)?,
                rho,
            ))
        }
    }
}

/// Qubit dephased by an Ising-type spin bath: V₁ = Σ_k g_k σ_z^{(k)},
/// V₀ = 0, H_E = field · Σ_k σ_x^{(k)}.
pub fn build_ising_bath(
    n_spins: usize,
    couplings: &[f64],
    field: f64,
) -> Result<PureDephasingModel> {
    if !(1..=8).contains(&n_spins) {
        return Err(Error::Dimension(format!(
            "spin count {n_spins} outside 1..=8"
        )));
    }
    if couplings.len() != n_spins {
        return Err(Error::Dimension(format!(
            "{} couplings for {} spins",
            couplings.len(),
            n_spins
        )));
    }
    let dim = 1usize << n_spins;
    let mut v1 = ComplexMatrix::zeros(dim);
    let mut h_env = ComplexMatrix::zeros(dim);
    for (k, &g) in couplings.iter().enumerate() {
        v1 = v1.add(&embed_single_spin(&pauli_z(), k, n_spins)?.scale(C64::new(g, 0.0)));
        h_env = h_env.add(&embed_single_spin(&pauli_x(), k, n_spins)?.scale(C64::new(field, 0.0)));
    }
    PureDephasingModel::new(0.0, 0.0, h_env, ComplexMatrix::zeros(dim), v1)
}

/// The three-level reference model shipped with the command-line tool
/// (`examples/three_level.json` there mirrors these matrices exactly).
///
/// V₀ = 0, so an environment thermalized under H_E satisfies the
/// environment-witness precondition; V₁ does not commute with H_E, so a
/// thermal state at any β > 0 entangles with the qubit while β = 0 (the
/// maximally mixed state) never does.
pub fn demo_three_level() -> PureDephasingModel {
    let re = |x: f64| C64::new(x, 0.0);
    let h_env = ComplexMatrix::from_rows(&[
        vec![re(1.0), re(0.5), re(0.0)],
        vec![re(0.5), re(0.0), re(0.25)],
        vec![re(0.0), re(0.25), re(-1.0)],
    ])
    .expect("static 3x3");
    let v1 = ComplexMatrix::from_rows(&[
        vec![re(0.5), C64::new(0.0, 0.25), re(0.0)],
        vec![C64::new(0.0, -0.25), re(-0.25), re(0.5)],
        vec![re(0.0), re(0.5), re(0.75)],
    ])
    .expect("static 3x3");
    PureDephasingModel::new(0.0, 1.0, h_env, ComplexMatrix::zeros(3), v1)
        .expect("fixture matrices are Hermitian")
}

fn embed_single_spin(op: &ComplexMatrix, site: usize, n_spins: usize) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::identity(1);
    for k in 0..n_spins {
        let factor = if k == site {
            op.clone()
        } else {
            ComplexMatrix::identity(2)
        };
        out = out.kron(&factor)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::commutator;
    use approx::assert_abs_diff_eq;

    #[test]
    fn completely_mixed_state_is_one_subspace() {
        let rho = ComplexMatrix::identity(4).scale(C64::new(0.25, 0.0));
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        assert_eq!(env.partition().len(), 1);
        assert_eq!(env.partition()[0], vec![0, 1, 2, 3]);
        assert_eq!(env.rank(), 4);
    }

    #[test]
    fn distinct_populations_are_singleton_subspaces() {
        let rho = ComplexMatrix::diag_real(&[0.5, 0.3, 0.2]);
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        assert_eq!(env.rank(), 3);
        assert_eq!(env.partition().len(), 3);
        assert_eq!(env.populations(), &[0.5, 0.3, 0.2]);
    }

    #[test]
    fn exact_degeneracy_and_zeros_partition_correctly() {
        let rho = ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]);
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        assert_eq!(env.partition().len(), 2);
        assert_eq!(env.partition()[0], vec![0, 1]);
        assert_eq!(env.partition()[1], vec![2, 3]);
        assert_eq!(env.num_zero(), 2);
    }

    #[test]
    fn invalid_density_matrices_are_rejected_by_name() {
        let unnormalized = ComplexMatrix::identity(3);
        let err = analyze_environment(&unnormalized, 1e-8, 1e-12).unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");

        let negative = ComplexMatrix::diag_real(&[1.2, -0.2]);
        let err = analyze_environment(&negative, 1e-8, 1e-12).unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"), "{err}");

        let mut skew = ComplexMatrix::diag_real(&[0.5, 0.5]);
        skew.set(0, 1, C64::new(0.3, 0.0));
        let err = analyze_environment(&skew, 1e-8, 1e-12).unwrap_err();
        assert!(err.to_string().contains("Hermitian"), "{err}");
    }

    #[test]
    fn spectral_reassembly_reproduces_rho() {
        let (_, rho) = build_random_model(4, ModelClass::Generic, 11).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        let n = env.env_dim();
        let mut rebuilt = ComplexMatrix::zeros(n);
        for k in 0..n {
            let col = env.eigenvectors().column(k);
            for i in 0..n {
                for j in 0..n {
                    let add = col[i] * col[j].conj() * env.populations()[k];
                    rebuilt.set(i, j, rebuilt.get(i, j) + add);
                }
            }
        }
        let dist = crate::linalg::trace_distance(&rebuilt, &rho).unwrap();
        assert!(dist <= 1e-9, "trace distance {dist}");
    }

    #[test]
    fn thermal_at_zero_beta_is_maximally_mixed() {
        let h = ComplexMatrix::diag_real(&[0.0, 1.0, 2.0]);
        let rho = build_thermal(&h, 0.0).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::identity(3).scale(C64::new(1.0 / 3.0, 0.0))) < 1e-14);
    }

    #[test]
    fn thermal_at_large_beta_approaches_the_ground_state() {
        let h = ComplexMatrix::diag_real(&[0.0, 3.0]);
        let rho = build_thermal(&h, 50.0).unwrap();
        assert!((rho.get(0, 0).re - 1.0).abs() < (-50.0f64 * 3.0).exp() * 2.0);
        assert!(rho.get(1, 1).re < (-50.0f64 * 3.0).exp() * 2.0);
    }

    #[test]
    fn two_level_gibbs_closed_form() {
        // exp(−β σ_z)/Z with σ_z = diag(1, −1) puts weight e^{−β} on |0⟩
        // and e^{+β} on |1⟩.
        let rho = build_thermal(&pauli_z(), 1.0).unwrap();
        let z = 1.0f64.exp() + (-1.0f64).exp();
        assert_abs_diff_eq!(rho.get(0, 0).re, (-1.0f64).exp() / z, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.get(1, 1).re, 1.0f64.exp() / z, epsilon = 1e-14);
    }

    #[test]
    fn thermal_state_commutes_with_its_hamiltonian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(&mut rng, 5);
        let rho = build_thermal(&h, 0.7).unwrap();
        let norm = commutator(&rho, &h).frobenius_norm();
        assert!(norm <= 1e-10 * h.frobenius_norm(), "commutator norm {norm}");
    }

    #[test]
    fn generators_are_deterministic() {
        for class in ModelClass::ALL {
            let (m1, r1) = build_random_model(3, class, 42).unwrap();
            let (m2, r2) = build_random_model(3, class, 42).unwrap();
            assert_eq!(m1.h_env(), m2.h_env());
            assert_eq!(m1.v0(), m2.v0());
            assert_eq!(m1.v1(), m2.v1());
            assert_eq!(r1, r2);
        }
    }

    #[test]
    fn random_unitary_class_commutes_everywhere() {
        let (model, rho) = build_random_model(4, ModelClass::RandomUnitary, 9).unwrap();
        assert!(commutator(model.h_env(), model.v0()).frobenius_norm() <= 1e-10);
        assert!(commutator(model.h_env(), model.v1()).frobenius_norm() <= 1e-10);
        assert!(commutator(&rho, model.h_env()).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn block_preserving_class_has_distinct_populations_and_valid_rho() {
        let (model, rho) = build_random_model(5, ModelClass::BlockPreserving, 3).unwrap();
        let env = analyze_environment(&rho, 1e-8, 1e-12).unwrap();
        assert!(env.partition().len() >= 2);
        assert_eq!(env.rank(), 5);
        assert_eq!(model.env_dim(), 5);
    }

    #[test]
    fn dimension_guard_on_generators() {
        assert!(build_random_model(1, ModelClass::Generic, 0).is_err());
        assert!(build_ising_bath(0, &[], 0.0).is_err());
        assert!(build_ising_bath(9, &[0.0; 9], 0.0).is_err());
        assert!(build_ising_bath(2, &[1.0], 0.0).is_err());
    }

    #[test]
    fn ising_bath_dimensions_and_trivial_cases() {
        let model = build_ising_bath(2, &[0.4, 0.7], 0.3).unwrap();
        assert_eq!(model.env_dim(), 4);

        // All-zero couplings make both conditioned Hamiltonians equal.
        let model = build_ising_bath(2, &[0.0, 0.0], 0.5).unwrap();
        assert!(model.h0().max_abs_diff(&model.h1()) < 1e-15);
    }

    #[test]
    fn qubit_state_normalization_is_enforced() {
        assert!(QubitState::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0)).is_err());
        let q = QubitState::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let rho = q.density_matrix();
        assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-15);
    }
}
