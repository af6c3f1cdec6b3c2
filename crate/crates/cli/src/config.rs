//! JSON model configuration.
//!
//! Schema (all matrices are row-major nested arrays of `[re, im]` pairs):
//!
//! ```json
//! {
//!   "env_dim": 3,
//!   "eps0": 0.0,
//!   "eps1": 1.0,
//!   "h_env": [[[1.0,0.0],[0.5,0.0],[0.0,0.0]], ...],
//!   "v0":    [[...], ...],
//!   "v1":    [[...], ...],
//!   "qubit": { "a": [0.6,0.0], "b": [0.0,0.8] },
//!   "initial_env": { "type": "thermal", "hamiltonian": "h_env", "beta": 1.0 }
//! }
//! ```
//!
//! `initial_env` variants:
//! - `{ "type": "matrix", "data": [[...], ...] }` — explicit density matrix
//! - `{ "type": "thermal", "hamiltonian": "h_env" | "h0" | "h1", "beta": x }`
//! - `{ "type": "mixed" }` — the maximally mixed state 1/N

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Deserialize;

use qee_core::linalg::ComplexMatrix;
use qee_core::model::{build_thermal, PureDephasingModel, QubitState};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub env_dim: usize,
    pub eps0: f64,
    pub eps1: f64,
    pub h_env: MatrixData,
    pub v0: MatrixData,
    pub v1: MatrixData,
    pub qubit: QubitConfig,
    pub initial_env: InitialEnv,
}

pub type MatrixData = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub a: [f64; 2],
    pub b: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialEnv {
    Matrix { data: MatrixData },
    Thermal { hamiltonian: HamiltonianRef, beta: f64 },
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum HamiltonianRef {
    #[serde(rename = "h_env")]
    HEnv,
    #[serde(rename = "h0")]
    H0,
    #[serde(rename = "h1")]
    H1,
}

/// A fully validated scenario: the model, the initial qubit state, and
/// the initial environment state.
pub struct Scenario {
    pub model: PureDephasingModel,
    pub qubit: QubitState,
    pub rho_env: ComplexMatrix,
    /// Retained so beta sweeps can rebuild thermal states.
    pub thermal_source: Option<(HamiltonianRef, f64)>,
}

fn matrix_from(name: &str, data: &MatrixData, dim: usize) -> Result<ComplexMatrix, String> {
    if data.len() != dim {
        return Err(format!(
            "field '{name}': expected {dim} rows, found {}",
            data.len()
        ));
    }
    let mut rows = Vec::with_capacity(dim);
    for (i, row) in data.iter().enumerate() {
        if row.len() != dim {
            return Err(format!(
                "field '{name}' row {i}: expected {dim} entries, found {}",
                row.len()
            ));
        }
        rows.push(row.iter().map(|&[re, im]| C64::new(re, im)).collect());
    }
    ComplexMatrix::from_rows(&rows).map_err(|e| format!("field '{name}': {e}"))
}

impl ModelConfig {
    pub fn load(path: &Path) -> Result<ModelConfig, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Validate and assemble the scenario this config describes.
    pub fn build(&self) -> Result<Scenario, String> {
        let n = self.env_dim;
        if n == 0 {
            return Err("field 'env_dim': must be positive".to_string());
        }
        let h_env = matrix_from("h_env", &self.h_env, n)?;
        let v0 = matrix_from("v0", &self.v0, n)?;
        let v1 = matrix_from("v1", &self.v1, n)?;
        let model = PureDephasingModel::new(self.eps0, self.eps1, h_env, v0, v1)
            .map_err(|e| format!("model: {e}"))?;
        let qubit = QubitState::new(
            C64::new(self.qubit.a[0], self.qubit.a[1]),
            C64::new(self.qubit.b[0], self.qubit.b[1]),
        )
        .map_err(|e| format!("field 'qubit': {e}"))?;
        let (rho_env, thermal_source) = match &self.initial_env {
            InitialEnv::Matrix { data } => (matrix_from("initial_env.data", data, n)?, None),
            InitialEnv::Thermal { hamiltonian, beta } => {
                let rho = thermal_state(&model, *hamiltonian, *beta)?;
                (rho, Some((*hamiltonian, *beta)))
            }
            InitialEnv::Mixed => (
                ComplexMatrix::identity(n).scale(C64::new(1.0 / n as f64, 0.0)),
                None,
            ),
        };
        Ok(Scenario {
            model,
            qubit,
            rho_env,
            thermal_source,
        })
    }
}

pub fn thermal_state(
    model: &PureDephasingModel,
    hamiltonian: HamiltonianRef,
    beta: f64,
) -> Result<ComplexMatrix, String> {
    let h = match hamiltonian {
        HamiltonianRef::HEnv => model.h_env().clone(),
        HamiltonianRef::H0 => model.h0(),
        HamiltonianRef::H1 => model.h1(),
    };
    build_thermal(&h, beta).map_err(|e| format!("field 'initial_env': {e}"))
}
