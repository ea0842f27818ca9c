//! Run configuration shared by the command-line front end and the report
//! builders. Every section has defaults so partial JSON inputs work.

use serde::{Deserialize, Serialize};

use crate::lattice::Boundary;
use crate::polariton::ExperimentalParams;
use crate::presets::slow_light_reference;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub name: String,
    /// SI inputs.
    pub params: ExperimentalParams,
    pub sweep: ThetaSweep,
    pub lattice: LatticeConfig,
    pub quench: QuenchConfig,
    pub feasibility: FeasibilityConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            name: "custom".into(),
            params: slow_light_reference(),
            sweep: ThetaSweep::default(),
            lattice: LatticeConfig::default(),
            quench: QuenchConfig::default(),
            feasibility: FeasibilityConfig::default(),
        }
    }
}

/// Θ values for the closed-form K table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThetaSweep {
    pub thetas: Vec<f64>,
}

impl Default for ThetaSweep {
    fn default() -> Self {
        ThetaSweep {
            thetas: vec![0.1, 0.2, 0.5, 1.0, 1.5, 2.0, 5.0, 10.0, 20.0, 30.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Ed,
    Dmrg,
}

/// Lattice runs in units ρ₀ = m = 1; C₆ follows from Θ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub thetas: Vec<f64>,
    /// ρ₀a of the regularized interaction; 0 gives hard-core bosons.
    pub a_cut: f64,
    pub n_sites: usize,
    /// ρ₀dx.
    pub dx: f64,
    pub n_max: usize,
    pub boundary: Boundary,
    pub solver: SolverKind,
    pub chi: usize,
    pub sweeps: usize,
    pub tol: f64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            thetas: vec![0.1, 0.3, 1.0, 3.0, 10.0, 30.0],
            a_cut: 0.2,
            n_sites: 100,
            dx: 0.1,
            n_max: 3,
            boundary: Boundary::Open,
            solver: SolverKind::Dmrg,
            chi: 32,
            sweeps: 16,
            tol: 1e-4,
        }
    }
}

/// Storage-protocol settings, lengths in units of 1/ρ₀.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuenchConfig {
    pub k0: f64,
    /// K(t) at which the correlations are evaluated.
    pub k_final: f64,
    pub l0: f64,
    /// L_T⁰ρ₀ for the thermal envelope; `None` skips it.
    pub l_t: Option<f64>,
    pub alpha: f64,
    /// Envelope grid runs from α to z_max_over_l0·l₀.
    pub z_max_over_l0: f64,
    pub per_decade: usize,
    pub protocol_samples: usize,
    /// Protocol samples cover t ∈ [0, t_max_over_tau·τ].
    pub t_max_over_tau: f64,
}

impl Default for QuenchConfig {
    fn default() -> Self {
        QuenchConfig {
            k0: 0.8,
            k_final: 5e-5,
            l0: 100.0,
            l_t: Some(10.0),
            alpha: 1.0,
            z_max_over_l0: 100.0,
            per_decade: 20,
            protocol_samples: 201,
            t_max_over_tau: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeasibilityConfig {
    /// Safety factor on the switching-time bound.
    pub margin: f64,
    /// "≪" audit conditions pass when the ratio is below 1/audit_margin.
    pub audit_margin: f64,
}

impl Default for FeasibilityConfig {
    fn default() -> Self {
        FeasibilityConfig {
            margin: 1.0,
            audit_margin: 10.0,
        }
    }
}
