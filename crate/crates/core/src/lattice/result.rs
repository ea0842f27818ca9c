use serde::{Deserialize, Serialize};

use super::model::{Boundary, LatticeModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMethod {
    Ed,
    Dmrg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub n_sites: usize,
    pub n_particles: usize,
    pub dx: f64,
    pub boundary: Boundary,
    pub hop: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Energy after each sweep (a single entry for ED).
    pub convergence: Vec<f64>,
    pub method: SolverMethod,
    /// ⟨n_i⟩.
    pub density: Vec<f64>,
    /// Row-major ⟨n_i n_j⟩ with the normal-ordered ⟨n_i(n_i − 1)⟩ on the
    /// diagonal.
    pub density_density: Vec<f64>,
    /// Largest discarded weight of the final sweep.
    pub truncation_error: f64,
    pub converged: bool,
    /// Eigen-residual (ED) or last per-sweep energy change (DMRG).
    pub residual: f64,
    pub lattice: LatticeSummary,
}

impl GroundStateResult {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        model: &LatticeModel,
        energy: f64,
        convergence: Vec<f64>,
        method: SolverMethod,
        density: Vec<f64>,
        density_density: Vec<f64>,
        truncation_error: f64,
        converged: bool,
        residual: f64,
    ) -> Self {
        GroundStateResult {
            energy,
            convergence,
            method,
            density,
            density_density,
            truncation_error,
            converged,
            residual,
            lattice: LatticeSummary {
                n_sites: model.n_sites,
                n_particles: model.n_particles,
                dx: model.dx,
                boundary: model.boundary,
                hop: model.hop,
            },
        }
    }

    pub fn nn(&self, i: usize, j: usize) -> f64 {
        self.density_density[i * self.lattice.n_sites + j]
    }

    pub fn total_particles(&self) -> f64 {
        self.density.iter().sum()
    }
}
