//! Eigendecomposition of complex Hermitian matrices and the unitary
//! operations built on top of it.
//!
//! The solver is a cyclic Jacobi iteration with complex Givens rotations.
//! For the small dense operators this crate deals in, Jacobi gives
//! near-machine-precision orthogonality of the eigenvectors and is fully
//! deterministic (fixed sweep order, no pivot randomization), which keeps
//! runs reproducible bit-for-bit on a given platform.

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Relative Hermiticity tolerance used by internal callers.
pub(crate) const HERMITICITY_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

/// Spectral decomposition of a Hermitian matrix: `H = V diag(λ) V†` with
/// eigenvalues ascending and eigenvectors as orthonormal columns of `V`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose column `k` is the eigenvector of
    /// `eigenvalues()[k]`.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Reassemble `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| C64::new(l, 0.0))
    }

    /// Assemble `V diag(f(λ)) V†` for a scalar function of the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk.norm_sqr() == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v.get(i, k) * fk;
                for j in 0..n {
                    let add = vik * v.get(j, k).conj();
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy ‖h − h†‖_F ≤ `tol`·‖h‖_F; otherwise a contract
/// error naming the violated symmetry norm is returned.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    let n = h.dim();
    let defect = h.hermiticity_defect();
    let scale = h.frobenius_norm();
    // Relative test with an absolute round-off floor so that numerically
    // zero matrices (e.g. differences of nearly equal states) pass.
    if defect > (tol * scale).max(1e-12) {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian: ||h - h_adjoint||_F = {:.3e} exceeds {:.1e} * ||h||_F = {:.3e}",
            defect,
            tol,
            tol * scale
        )));
    }
    if n == 0 {
        return Err(Error::Dimension("empty matrix".to_string()));
    }

    // Work on the Hermitian part; this removes round-off asymmetry without
    // changing exactly-Hermitian inputs beyond the last bit.
    let mut a = ComplexMatrix::from_fn(n, |i, j| {
        (h.get(i, j) + h.get(j, i).conj()) * C64::new(0.5, 0.0)
    });
    let mut v = ComplexMatrix::identity(n);

    let off_target = n as f64 * f64::EPSILON * scale;
    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= off_target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::Contract(format!(
            "Jacobi eigensolver failed to converge in {} sweeps (dim {})",
            MAX_SWEEPS, n
        )));
    }

    // Sort ascending, carrying columns of V along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(i, i)
            .re
            .partial_cmp(&a.get(j, j).re)
            .expect("finite eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v.get(i, order[k]));

    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating the (p, q) entry of `a`,
/// accumulated into `v`.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = a.dim();
    let g = a.get(p, q);
    let gn = g.norm();
    if gn == 0.0 {
        return;
    }
    let u = g / gn; // phase of the off-diagonal entry
    let alpha = a.get(p, p).re;
    let beta = a.get(q, q).re;
    let tau = (beta - alpha) / (2.0 * gn);
    // Smaller-magnitude root of t² − 2τt − 1 = 0.
    let t = if tau >= 0.0 {
        -1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let su = u * s;

    // Columns: A <- A·J with J[p,p]=c, J[p,q]=−s·u, J[q,p]=s·u*, J[q,q]=c.
    for i in 0..n {
        let ap = a.get(i, p);
        let aq = a.get(i, q);
        a.set(i, p, ap * c + aq * su.conj());
        a.set(i, q, aq * c - ap * su);
    }
    // Rows: A <- J†·A.
    for j in 0..n {
        let rp = a.get(p, j);
        let rq = a.get(q, j);
        a.set(p, j, rp * c + rq * su);
        a.set(q, j, rq * c - rp * su.conj());
    }
    // Clean the rotated pair: the (p,q) entry is zero by construction and
    // the diagonal stays real.
    a.set(p, q, C64::new(0.0, 0.0));
    a.set(q, p, C64::new(0.0, 0.0));
    a.set(p, p, C64::new(a.get(p, p).re, 0.0));
    a.set(q, q, C64::new(a.get(q, q).re, 0.0));

    for i in 0..n {
        let vp = v.get(i, p);
        let vq = v.get(i, q);
        v.set(i, p, vp * c + vq * su.conj());
        v.set(i, q, vq * c - vp * su);
    }
}

/// Unitary `exp(−i·h·t)` of a Hermitian generator, computed spectrally.
pub fn unitary_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h, HERMITICITY_TOL)?;
    Ok(eig.map(|l| (-C64::i() * (l * t)).exp()))
}

/// Spectral decomposition of a unitary matrix: `U = Σ_k e^{−iχ_k} |k⟩⟨k|`
/// with phases in the principal branch (−π, π].
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    phases: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl UnitaryEig {
    /// Phases χ_k, one per eigenvector column, each in (−π, π].
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }
}

/// Diagonalize a unitary matrix by splitting it into its commuting
/// Hermitian parts.
///
/// `(U + U†)/2` and `(U − U†)/2i` commute for normal `U`, so the plan is:
/// eigendecompose the first, then within each (nearly) degenerate
/// eigenspace diagonalize the restriction of the second. Afterwards every
/// combined vector is an eigenvector of `U` itself; the phase comes from
/// the Rayleigh quotient.
pub fn unitary_eig(u: &ComplexMatrix, tol: f64) -> Result<UnitaryEig> {
    let n = u.dim();
    let defect = (&u.adjoint().matmul(u) - &ComplexMatrix::identity(n)).frobenius_norm();
    if defect > tol * (n as f64) {
        return Err(Error::Contract(format!(
            "matrix is not unitary: ||u_adjoint u - 1||_F = {:.3e} exceeds {:.1e} * dim",
            defect, tol
        )));
    }

    let half = C64::new(0.5, 0.0);
    let real_part = ComplexMatrix::from_fn(n, |i, j| (u.get(i, j) + u.get(j, i).conj()) * half);
    let imag_part = ComplexMatrix::from_fn(n, |i, j| {
        (u.get(i, j) - u.get(j, i).conj()) * half * (-C64::i())
    });

    let cos_eig = hermitian_eig(&real_part, HERMITICITY_TOL)?;
    let cos_vals = cos_eig.eigenvalues();
    let basis = cos_eig.eigenvectors();

    // Group near-degenerate cosine eigenvalues: members of one group can
    // still differ in the sign of the sine.
    const GROUP_GAP: f64 = 1e-8;
    let mut vectors = ComplexMatrix::zeros(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (cos_vals[end] - cos_vals[end - 1]).abs() <= GROUP_GAP {
            end += 1;
        }
        let g = end - start;
        // Restriction of the sine part to the group span.
        let cols: Vec<Vec<C64>> = (start..end).map(|k| basis.column(k)).collect();
        let mut restricted = ComplexMatrix::zeros(g);
        for (r, cr) in cols.iter().enumerate() {
            let applied = imag_part.apply(cr);
            for (c2, cc) in cols.iter().enumerate() {
                let val: C64 = cc
                    .iter()
                    .zip(applied.iter())
                    .map(|(b, x)| b.conj() * x)
                    .sum();
                restricted.set(c2, r, val);
            }
        }
        let sub = hermitian_eig(&restricted, 1e-8)?;
        for k in 0..g {
            for i in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (l, cl) in cols.iter().enumerate() {
                    acc += cl[i] * sub.eigenvectors().get(l, k);
                }
                vectors.set(i, start + k, acc);
            }
        }
        start = end;
    }

    // Phase per column from the Rayleigh quotient ⟨v|U|v⟩ = e^{−iχ}.
    let mut phases = Vec::with_capacity(n);
    for k in 0..n {
        let col = vectors.column(k);
        let uv = u.apply(&col);
        let quotient: C64 = col.iter().zip(uv.iter()).map(|(v, x)| v.conj() * x).sum();
        let mut chi = -quotient.arg();
        if chi <= -std::f64::consts::PI {
            chi = std::f64::consts::PI;
        }
        phases.push(chi);
    }

    Ok(UnitaryEig {
        phases,
        eigenvectors: vectors,
    })
}
