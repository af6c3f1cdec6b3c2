//! Dense complex linear algebra for Hermitian and unitary operators on
//! small bipartite (qubit ⊗ environment) systems.
//!
//! Everything here works on [`ComplexMatrix`], a square, row-major,
//! heap-allocated matrix of `Complex64`. The joint-system index convention
//! is fixed globally: the joint index is `qubit_index * env_dim + env_index`
//! (qubit is the slow index), so a 2N×2N joint operator decomposes into
//! four N×N blocks
//!
//! ```text
//!     ┌       ┐
//!     │ A   B │     A = ⟨0|·|0⟩ block,  B = ⟨0|·|1⟩ block,
//!     │ C   D │     C = ⟨1|·|0⟩ block,  D = ⟨1|·|1⟩ block.
//!     └       ┘
//! ```
//!
//! All routines are deterministic: no randomized pivoting, no
//! parallelism, so identical inputs give bit-identical outputs on one
//! platform.

use num_complex::Complex64;

use crate::error::{Error, Result};

mod eig;

pub use eig::{hermitian_eig, unitary_eig, unitary_exp, HermitianEig, UnitaryEig};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Default cap on matrix dimension, guarding accidental quadratic-memory
/// blowups (joint dimension 4096 ⇒ environment dimension 2048).
pub const DEFAULT_DIM_LIMIT: usize = 4096;

/// Which tensor factor of a qubit ⊗ environment operator to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Qubit,
    Environment,
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.4e}{:+.4e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    /// Build a matrix by evaluating `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major entries; errors unless the count is a perfect
    /// square matching `dim²` and every entry is finite.
    pub fn from_data(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "expected {}x{} = {} entries, got {}",
                dim,
                dim,
                dim * dim,
                data.len()
            )));
        }
        let m = Self { dim, data };
        if !m.all_finite() {
            return Err(Error::Contract(
                "matrix has non-finite entries".to_string(),
            ));
        }
        Ok(m)
    }

    /// Build from nested rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {}-dimensional matrix",
                    row.len(),
                    dim
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_data(dim, data)
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, C64::new(v, 0.0));
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Plain transpose.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ‖A − A†‖_F, the distance from the Hermitian cone.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.get(i, j) - self.get(j, i).conj();
                s += d.norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Largest entry-wise absolute difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Matrix product.
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j] * v[j]).sum())
            .collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    /// Principal submatrix keeping the given rows and columns (in order).
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let k = keep.len();
        let mut out = Self::zeros(k);
        for (r, &i) in keep.iter().enumerate() {
            for (c, &j) in keep.iter().enumerate() {
                out.set(r, c, self.get(i, j));
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`, bounded by `limit` on the result
    /// dimension.
    pub fn kron_bounded(&self, other: &Self, limit: usize) -> Result<Self> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .filter(|&d| d <= limit)
            .ok_or_else(|| {
                Error::Dimension(format!(
                    "kron dimension {}x{} exceeds limit {}",
                    self.dim, other.dim, limit
                ))
            })?;
        let (na, nb) = (self.dim, other.dim);
        let mut out = Self::zeros(dim);
        for i in 0..na {
            for j in 0..na {
                let a = self.get(i, j);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..nb {
                    for l in 0..nb {
                        out.set(i * nb + k, j * nb + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product with the default dimension cap.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_bounded(other, DEFAULT_DIM_LIMIT)
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl std::ops::Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale(C64::new(rhs, 0.0))
    }
}

/// Commutator `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    &a.matmul(b) - &b.matmul(a)
}

/// Pauli σ_x.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    ])
    .expect("static 2x2")
}

/// Pauli σ_y.
pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
    .expect("static 2x2")
}

/// Pauli σ_z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

fn check_joint_dim(s: &ComplexMatrix, env_dim: usize) -> Result<()> {
    if env_dim == 0 || s.dim() != 2 * env_dim {
        return Err(Error::Dimension(format!(
            "joint operator has dim {}, expected 2x{} = {}",
            s.dim(),
            env_dim,
            2 * env_dim
        )));
    }
    Ok(())
}

/// Partial transpose over the qubit factor of a 2N×2N operator: in block
/// form [[A,B],[C,D]] the result is [[A,C],[B,D]]. Applying it twice is the
/// identity, and for Hermitian input the spectrum equals that of the
/// environment-side partial transpose.
pub fn partial_transpose_qubit(s: &ComplexMatrix, env_dim: usize) -> Result<ComplexMatrix> {
    check_joint_dim(s, env_dim)?;
    let n = env_dim;
    let mut out = ComplexMatrix::zeros(2 * n);
    for k in 0..n {
        for l in 0..n {
            out.set(k, l, s.get(k, l)); // A
            out.set(k, n + l, s.get(n + k, l)); // C -> upper right
            out.set(n + k, l, s.get(k, n + l)); // B -> lower left
            out.set(n + k, n + l, s.get(n + k, n + l)); // D
        }
    }
    Ok(out)
}

/// Partial trace of a 2N×2N operator over one factor.
///
/// `keep = Environment` returns the N×N matrix A + D; `keep = Qubit`
/// returns the 2×2 matrix of block traces.
pub fn partial_trace(
    s: &ComplexMatrix,
    env_dim: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    check_joint_dim(s, env_dim)?;
    let n = env_dim;
    match keep {
        Subsystem::Environment => {
            let mut out = ComplexMatrix::zeros(n);
            for k in 0..n {
                for l in 0..n {
                    out.set(k, l, s.get(k, l) + s.get(n + k, n + l));
                }
            }
            Ok(out)
        }
        Subsystem::Qubit => {
            let mut out = ComplexMatrix::zeros(2);
            for qi in 0..2 {
                for qj in 0..2 {
                    let mut t = C64::new(0.0, 0.0);
                    for k in 0..n {
                        t += s.get(qi * n + k, qj * n + k);
                    }
                    out.set(qi, qj, t);
                }
            }
            Ok(out)
        }
    }
}

/// Determinant via LU decomposition with partial pivoting. Singular input
/// returns a value near zero rather than an error.
pub fn determinant(s: &ComplexMatrix) -> C64 {
    let n = s.dim();
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut a = s.clone();
    let mut det = C64::new(1.0, 0.0);
    for col in 0..n {
        // Pick the largest pivot in this column.
        let mut pivot = col;
        let mut best = a.get(col, col).norm();
        for row in (col + 1)..n {
            let v = a.get(row, col).norm();
            if v > best {
                best = v;
                pivot = row;
            }
        }
        if best == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a.get(col, j);
                a.set(col, j, a.get(pivot, j));
                a.set(pivot, j, tmp);
            }
            det = -det;
        }
        let p = a.get(col, col);
        det *= p;
        for row in (col + 1)..n {
            let factor = a.get(row, col) / p;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = a.get(row, j) - factor * a.get(col, j);
                a.set(row, j, v);
            }
        }
    }
    det
}

/// Norms and spectral summary of a Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub frobenius: f64,
    /// Σ|λ_i| over the spectrum.
    pub trace_norm: f64,
    pub min_eigenvalue: f64,
}

/// Frobenius norm, trace norm and minimum eigenvalue of a Hermitian matrix.
/// The spectral quantities require Hermitian input.
pub fn norms_and_psd(s: &ComplexMatrix) -> Result<NormReport> {
    let eig = hermitian_eig(s, eig::HERMITICITY_TOL)?;
    let trace_norm = eig.eigenvalues().iter().map(|l| l.abs()).sum();
    let min_eigenvalue = eig.eigenvalues().first().copied().unwrap_or(0.0);
    Ok(NormReport {
        frobenius: s.frobenius_norm(),
        trace_norm,
        min_eigenvalue,
    })
}

/// Trace-norm distance ‖a − b‖_tr between two Hermitian operators.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    Ok(norms_and_psd(&(a - b))?.trace_norm)
}
