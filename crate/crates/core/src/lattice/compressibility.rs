//! Luttinger parameter from the lattice compressibility.
//!
//! χ⁻¹ = ρ₀²L[E(N+1) − 2E(N) + E(N−1)] together with K/u = πρ₀²χ and
//! uK = πρ₀/m gives K = π·√(ρ₀/(m L Δ²E)).

use serde::{Deserialize, Serialize};

use super::dmrg::{run_dmrg, DmrgOptions};
use super::ed::{ground_state_ed, ground_state_ed_seeded};
use super::model::LatticeModel;
use super::result::GroundStateResult;
use crate::error::{Error, Result};

/// Reported K when the second difference vanishes (free bosons).
pub const K_DIVERGENCE_CAP: f64 = 1e3;
/// Above this K the estimate is flagged as outside Luttinger-liquid
/// validity (weak-coupling divergence, cutoff-dominated).
pub const K_VALIDITY_LIMIT: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeSolver {
    Ed,
    /// ED with an explicit Lanczos start-vector seed.
    EdSeeded(u64),
    Dmrg(DmrgOptions),
}

impl LatticeSolver {
    pub fn solve(&self, model: &LatticeModel) -> Result<GroundStateResult> {
        match self {
            LatticeSolver::Ed => ground_state_ed(model),
            LatticeSolver::EdSeeded(seed) => ground_state_ed_seeded(model, *seed),
            LatticeSolver::Dmrg(o) => Ok(run_dmrg(model, o)?.result),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEstimate {
    pub k: f64,
    /// χ⁻¹ = ρ₀²L·Δ²E.
    pub inverse_compressibility: f64,
    pub second_difference: f64,
    /// E(N − 1), E(N), E(N + 1).
    pub energies: [f64; 3],
    pub n_particles: usize,
    /// Δ²E indistinguishable from zero: K is capped and outside the
    /// Luttinger-liquid description.
    pub divergent: bool,
    /// |K(dx) − K(dx/2)| when a refinement was run.
    pub uncertainty: Option<f64>,
    pub converged: bool,
}

pub fn compressibility_k(model: &LatticeModel, solver: &LatticeSolver) -> Result<KEstimate> {
    compressibility_with_states(model, solver).map(|(k, _)| k)
}

/// Like [`compressibility_k`], also returning the ground states at N − 1, N
/// and N + 1.
pub fn compressibility_with_states(
    model: &LatticeModel,
    solver: &LatticeSolver,
) -> Result<(KEstimate, [GroundStateResult; 3])> {
    let n = model.n_particles;
    if n == 0 {
        return Err(Error::InvalidParameter {
            field: "n_particles",
            reason: "need N ≥ 1 for the N − 1 sector".into(),
        });
    }
    let runs = [
        solver.solve(&model.with_particles(n - 1)?)?,
        solver.solve(model)?,
        solver.solve(&model.with_particles(n + 1)?)?,
    ];
    let e = [runs[0].energy, runs[1].energy, runs[2].energy];
    let converged = runs.iter().all(|r| r.converged);
    let d2 = e[2] - 2.0 * e[1] + e[0];
    let length = model.length();
    let rho0 = model.rho0;
    let noise = 1e-10 * e.iter().fold(model.hop, |m, x| m.max(x.abs()));
    let (k, divergent) = if d2 > noise {
        let k = std::f64::consts::PI * (rho0 / (model.mass * length * d2)).sqrt();
        (k.min(K_DIVERGENCE_CAP), k > K_VALIDITY_LIMIT)
    } else if d2 >= -noise {
        (K_DIVERGENCE_CAP, true)
    } else {
        return Err(Error::NegativeCompressibility {
            e_minus: e[0],
            e_mid: e[1],
            e_plus: e[2],
            second_diff: d2,
        });
    };
    let est = KEstimate {
        k,
        inverse_compressibility: rho0 * rho0 * length * d2,
        second_difference: d2,
        energies: e,
        n_particles: n,
        divergent,
        uncertainty: None,
        converged,
    };
    Ok((est, runs))
}

/// Runs the estimate at spacing `dx` and `dx/2` (`build(dx)` must return
/// the same physical system) and reports the finer value with the
/// difference as uncertainty.
pub fn compressibility_k_refined<F>(build: F, dx: f64, solver: &LatticeSolver) -> Result<KEstimate>
where
    F: Fn(f64) -> Result<LatticeModel>,
{
    let coarse = compressibility_k(&build(dx)?, solver)?;
    let mut fine = compressibility_k(&build(0.5 * dx)?, solver)?;
    fine.uncertainty = Some((fine.k - coarse.k).abs());
    fine.converged &= coarse.converged;
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::model::{build_lattice, Boundary};

    #[test]
    fn free_bosons_are_flagged_divergent() {
        let m = build_lattice(1.0, 0.0, 0.3, 1.0, 24, 0.125, Boundary::Periodic, 3).unwrap();
        let k = compressibility_k(&m, &LatticeSolver::Ed).unwrap();
        assert!(k.divergent, "{k:?}");
        assert!(k.k > K_VALIDITY_LIMIT);
    }

    #[test]
    fn tonks_ring_gives_unit_k_in_the_continuum() {
        // hard-core bosons on a ring, odd N: E(N) from periodic or
        // antiperiodic fermions; lattice corrections O((k_F dx)²)
        let m = build_lattice(1.0, 0.0, 0.0, 1.0, 30, 1.0 / 6.0, Boundary::Periodic, 1).unwrap();
        let k = compressibility_k(&m, &LatticeSolver::Ed).unwrap();
        assert!(!k.divergent);
        assert!((k.k - 1.0).abs() < 0.05, "{}", k.k);
    }

    #[test]
    fn negative_curvature_is_rejected() {
        // attractive on-site interaction makes E(N) concave
        let mut m = build_lattice(1.0, 0.0, 0.3, 1.0, 6, 1.0 / 3.0, Boundary::Periodic, 3).unwrap();
        m.interaction = vec![-50.0];
        assert!(matches!(
            compressibility_k(&m, &LatticeSolver::Ed),
            Err(Error::NegativeCompressibility { .. })
        ));
    }
}
