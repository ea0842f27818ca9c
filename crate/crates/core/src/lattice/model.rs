//! Discretized 1D bosons with a regularized van-der-Waals interaction.
//!
//! H = Σ_i ε n_i − t Σ_⟨ij⟩ (b_i† b_j + h.c.) + ½V(0) Σ_i n_i(n_i − 1)
//!     + Σ_{i<j} V(d_ij) n_i n_j,
//! with t = 1/(2m dx²) and ε = 2t so that the band bottom sits at zero.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Open,
}

/// Relative cut below which V(r)/V(dx) is dropped.
pub const DEFAULT_RANGE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeModel {
    pub n_sites: usize,
    /// Lattice spacing in units of 1/ρ₀.
    pub dx: f64,
    /// Hopping amplitude t.
    pub hop: f64,
    /// On-site single-particle energy ε.
    pub onsite: f64,
    /// `interaction[d]` is V at separation d·dx; `interaction[0]` is the
    /// on-site value entering ½V(0)n(n − 1).
    pub interaction: Vec<f64>,
    pub boundary: Boundary,
    pub n_max: usize,
    pub n_particles: usize,
    pub mass: f64,
    pub rho0: f64,
    /// Set when a_cut = 0 forced single occupancy.
    pub hard_core: bool,
}

impl LatticeModel {
    /// Lattice distance between sites, minimal image under periodic boundary.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j);
        match self.boundary {
            Boundary::Open => d,
            Boundary::Periodic => d.min(self.n_sites - d),
        }
    }

    /// V between distinct sites i and j (zero beyond the table range).
    pub fn pair(&self, i: usize, j: usize) -> f64 {
        let d = self.distance(i, j);
        if d == 0 {
            return 0.0;
        }
        self.interaction.get(d).copied().unwrap_or(0.0)
    }

    pub fn onsite_interaction(&self) -> f64 {
        self.interaction.first().copied().unwrap_or(0.0)
    }

    /// Nearest-neighbour bonds, including the wrap-around bond when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let l = self.n_sites;
        let mut b: Vec<(usize, usize)> = (0..l.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic && l > 2 {
            b.push((0, l - 1));
        }
        b
    }

    pub fn filling(&self) -> f64 {
        self.n_particles as f64 / self.n_sites as f64
    }

    pub fn length(&self) -> f64 {
        self.n_sites as f64 * self.dx
    }

    pub fn with_particles(&self, n: usize) -> Result<Self> {
        check_filling(n, self.n_sites, self.n_max)?;
        let mut m = self.clone();
        m.n_particles = n;
        Ok(m)
    }

    pub fn with_n_max(&self, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParameter {
                field: "n_max",
                reason: "must be at least 1".into(),
            });
        }
        check_filling(self.n_particles, self.n_sites, n_max)?;
        let mut m = self.clone();
        m.n_max = if m.hard_core { 1 } else { n_max };
        Ok(m)
    }

    /// Generic model from explicit couplings (energies in any unit).
    pub fn from_parts(
        n_sites: usize,
        hop: f64,
        onsite: f64,
        interaction: Vec<f64>,
        boundary: Boundary,
        n_max: usize,
        n_particles: usize,
    ) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidParameter {
                field: "n_sites",
                reason: "need at least two sites".into(),
            });
        }
        if boundary == Boundary::Periodic && n_sites < 3 {
            return Err(Error::InvalidParameter {
                field: "n_sites",
                reason: "a periodic ring needs at least three sites".into(),
            });
        }
        require_positive("hop", hop)?;
        if n_max == 0 {
            return Err(Error::InvalidParameter {
                field: "n_max",
                reason: "must be at least 1".into(),
            });
        }
        check_filling(n_particles, n_sites, n_max)?;
        Ok(LatticeModel {
            n_sites,
            dx: 1.0,
            hop,
            onsite,
            interaction,
            boundary,
            n_max,
            n_particles,
            mass: 1.0 / (2.0 * hop),
            rho0: n_particles as f64 / n_sites as f64,
            hard_core: false,
        })
    }
}

fn check_filling(n: usize, sites: usize, n_max: usize) -> Result<()> {
    if n > sites * n_max {
        return Err(Error::FillingExceedsCutoff {
            n_particles: n,
            n_sites: sites,
            n_max,
        });
    }
    Ok(())
}

/// V(r) = c6/(a⁶ + r⁶).
pub fn vdw(c6: f64, a_cut: f64, r: f64) -> f64 {
    c6 / (a_cut.powi(6) + r.powi(6))
}

fn particle_count(n_sites: usize, dx: f64, rho0: f64) -> Result<usize> {
    let n = n_sites as f64 * dx * rho0;
    let r = n.round();
    if (n - r).abs() > 1e-9 * n.max(1.0) || r < 1.0 {
        return Err(Error::InvalidParameter {
            field: "n_sites",
            reason: format!("n_sites·dx·ρ₀ = {n} is not a positive integer particle number"),
        });
    }
    Ok(r as usize)
}

fn range_limit(n_sites: usize, boundary: Boundary) -> usize {
    match boundary {
        Boundary::Open => n_sites - 1,
        Boundary::Periodic => n_sites / 2,
    }
}

/// Lattice for mass `mass`, interaction C₆/(a⁶ + r⁶) and density `rho0`
/// (any consistent units with ħ = 1). The particle number is
/// n_sites·dx·ρ₀. With a_cut = 0 and C₆ > 0 the on-site repulsion is
/// infinite and the model is hard-core (n_max = 1).
#[allow(clippy::too_many_arguments)]
pub fn build_lattice(
    mass: f64,
    c6: f64,
    a_cut: f64,
    rho0: f64,
    n_sites: usize,
    dx: f64,
    boundary: Boundary,
    n_max: usize,
) -> Result<LatticeModel> {
    build_lattice_with_threshold(mass, c6, a_cut, rho0, n_sites, dx, boundary, n_max, DEFAULT_RANGE_THRESHOLD)
}

#[allow(clippy::too_many_arguments)]
pub fn build_lattice_with_threshold(
    mass: f64,
    c6: f64,
    a_cut: f64,
    rho0: f64,
    n_sites: usize,
    dx: f64,
    boundary: Boundary,
    n_max: usize,
    threshold: f64,
) -> Result<LatticeModel> {
    require_positive("mass", mass)?;
    require_non_negative("c6", c6)?;
    require_non_negative("a_cut", a_cut)?;
    require_positive("rho0", rho0)?;
    require_positive("dx", dx)?;
    let n = particle_count(n_sites, dx, rho0)?;
    let hard_core = a_cut == 0.0 && c6 > 0.0;
    let n_max = if hard_core { 1 } else { n_max };
    let hop = 1.0 / (2.0 * mass * dx * dx);
    let mut m = LatticeModel::from_parts(n_sites, hop, 2.0 * hop, vec![0.0], boundary, n_max, n)?;
    m.dx = dx;
    m.mass = mass;
    m.rho0 = rho0;
    m.hard_core = hard_core;
    if c6 > 0.0 {
        let v1 = vdw(c6, a_cut, dx);
        let mut table = vec![if hard_core { 0.0 } else { vdw(c6, a_cut, 0.0) }];
        for d in 1..=range_limit(n_sites, boundary) {
            let v = vdw(c6, a_cut, d as f64 * dx);
            if v < threshold * v1 {
                break;
            }
            table.push(v);
        }
        m.interaction = table;
    }
    Ok(m)
}

/// Contact interaction g δ(x) discretized as an on-site U = g/dx.
pub fn build_contact_lattice(
    mass: f64,
    g: f64,
    rho0: f64,
    n_sites: usize,
    dx: f64,
    boundary: Boundary,
    n_max: usize,
) -> Result<LatticeModel> {
    require_non_negative("g", g)?;
    let mut m = build_lattice(mass, 0.0, 0.0, rho0, n_sites, dx, boundary, n_max)?;
    m.interaction = vec![g / dx];
    Ok(m)
}
