//! Closed-form Luttinger-liquid quantities for 1D bosons with 1/r⁶ repulsion.
//!
//! Everything here is unit-agnostic with ħ = 1: pass SI values and get SI
//! values back, or pass natural units consistently.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::polariton::{ExperimentalParams, PolaritonDerived};

/// Where a K value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// The interpolation K = (1 + 2Θ)^{-1/2}.
    ClosedForm,
    Dmrg,
    ExactDiagonalization,
    BetheAnsatz,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LuttingerParams {
    pub k_param: f64,
    pub theta_ll: f64,
    pub u_sound: f64,
    pub rho0: f64,
    pub mass: f64,
    pub estimator: Estimator,
}

/// Θ = π³/180 · ρ₀⁴ m C₆.
pub fn theta(rho0: f64, mass: f64, c6: f64) -> f64 {
    PI.powi(3) / 180.0 * rho0.powi(4) * mass * c6
}

/// C₆ giving `theta` at density `rho0` and mass `mass`.
pub fn c6_for_theta(theta: f64, rho0: f64, mass: f64) -> f64 {
    theta * 180.0 / (PI.powi(3) * rho0.powi(4) * mass)
}

pub fn k_from_theta(theta: f64) -> f64 {
    (1.0 + 2.0 * theta).sqrt().recip()
}

/// Inverse of [`k_from_theta`].
pub fn theta_from_k(k: f64) -> f64 {
    (k.powi(-2) - 1.0) / 2.0
}

pub fn k_closed_form(rho0: f64, mass: f64, c6: f64) -> Result<LuttingerParams> {
    require_positive("rho0", rho0)?;
    require_positive("mass", mass)?;
    require_non_negative("c6", c6)?;
    let theta_ll = theta(rho0, mass, c6);
    let k_param = k_from_theta(theta_ll);
    Ok(LuttingerParams {
        k_param,
        theta_ll,
        u_sound: PI * rho0 / (mass * k_param),
        rho0,
        mass,
        estimator: Estimator::ClosedForm,
    })
}

/// Which effective mass enters Θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassAxis {
    Longitudinal,
    Transverse,
}

/// Θ written in experimental ratios:
/// π³/180 · (γ/|Δ|)² (ρ₀L_abs)⁴ (c/v_g) OD_c⁶.
///
/// Infinite at Δ = 0, where the longitudinal mass is unbounded.
pub fn theta_experimental(derived: &PolaritonDerived, params: &ExperimentalParams) -> f64 {
    let gd = params.gamma / params.delta_1.abs();
    PI.powi(3) / 180.0
        * gd
        * gd
        * (params.rho0 * derived.l_abs).powi(4)
        * (params.c / derived.vg)
        * derived.od_c.powi(6)
}

/// Θ for either mass. The transverse value rescales the longitudinal one by
/// m⊥/|m∥|.
pub fn theta_experimental_axis(
    derived: &PolaritonDerived,
    params: &ExperimentalParams,
    axis: MassAxis,
) -> f64 {
    let par = theta_experimental(derived, params);
    match axis {
        MassAxis::Longitudinal => par,
        MassAxis::Transverse => par * derived.inv_m_par.abs() / derived.inv_m_perp,
    }
}

/// The OD_c at which Θ reaches `target`, keeping the slow-light ratios
/// (γ/|Δ|, ρ₀L_abs, v_g/c) fixed. Θ scales as OD_c⁶.
pub fn od_c_for_theta(
    target: f64,
    derived: &PolaritonDerived,
    params: &ExperimentalParams,
    axis: MassAxis,
) -> Result<f64> {
    require_positive("target", target)?;
    let mut unit = *derived;
    unit.od_c = 1.0;
    let per_unit = theta_experimental_axis(&unit, params, axis);
    if !(per_unit.is_finite() && per_unit > 0.0) {
        return Err(Error::InvalidParameter {
            field: "delta_1",
            reason: "Θ per unit OD_c is not finite and positive".into(),
        });
    }
    Ok((target / per_unit).powf(1.0 / 6.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Superfluid,
    Critical,
    Cdw,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Superfluid => "superfluid",
            Regime::Critical => "critical",
            Regime::Cdw => "cdw",
        }
    }
}

pub const CRITICAL_K_TOL: f64 = 1e-9;

pub fn cdw_regime(k_param: f64) -> Regime {
    if (k_param - 0.5).abs() <= CRITICAL_K_TOL {
        Regime::Critical
    } else if k_param > 0.5 {
        Regime::Superfluid
    } else {
        Regime::Cdw
    }
}

/// (density exponent 2K, first-order exponent 1/(2K)).
pub fn correlation_exponents(k_param: f64) -> (f64, f64) {
    (2.0 * k_param, 1.0 / (2.0 * k_param))
}

/// K below which a commensurate lattice potential with `s` particles per
/// site pins the crystal.
pub fn pinning_threshold(s: u32) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidParameter {
            field: "s",
            reason: "commensurability must be at least 1".into(),
        });
    }
    Ok(2.0 / f64::from(s).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::derive_polariton;
    use crate::presets::slow_light_reference;

    #[test]
    fn closed_form_anchors() {
        assert_eq!(k_closed_form(1.0, 1.0, 0.0).unwrap().k_param, 1.0);
        assert_eq!(k_from_theta(1.5), 0.5);
        assert!((k_from_theta(4.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((theta_from_k(0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn galilean_identity() {
        let l = k_closed_form(3.0, 0.7, 2.5).unwrap();
        let lhs = l.u_sound * l.k_param;
        let rhs = PI * 3.0 / 0.7;
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }

    #[test]
    fn experimental_theta_matches_mass_form() {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        let direct = theta(p.rho0, d.m_par.unwrap(), p.c6);
        let exp = theta_experimental(&d, &p);
        assert!((direct - exp).abs() < 1e-10 * direct);
        let perp = theta(p.rho0, d.m_perp.unwrap(), p.c6);
        let exp_perp = theta_experimental_axis(&d, &p, MassAxis::Transverse);
        assert!((perp - exp_perp).abs() < 1e-10 * perp);
    }

    #[test]
    fn od_c_requirements_at_reference_point() {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        let par = od_c_for_theta(1.5, &d, &p, MassAxis::Longitudinal).unwrap();
        // (1.5·180/π³ · 10⁴ · 10⁸ · 10⁻⁵)^{1/6}
        let expect = (1.5 * 180.0 / PI.powi(3) * 1e7).powf(1.0 / 6.0);
        assert!((par - expect).abs() < 1e-9 * expect);
        assert!((par / 20.0 - 1.0).abs() < 0.1, "{par}");
        let perp = od_c_for_theta(1.5, &d, &p, MassAxis::Transverse).unwrap();
        assert!((perp / 5.0 - 1.0).abs() < 0.1, "{perp}");
        let mut z = d;
        z.od_c = 0.0;
        assert_eq!(theta_experimental(&z, &p), 0.0);
    }

    #[test]
    fn regimes_and_exponents() {
        assert_eq!(cdw_regime(1.0), Regime::Superfluid);
        assert_eq!(cdw_regime(0.5), Regime::Critical);
        assert_eq!(cdw_regime(0.5 + 1e-10), Regime::Critical);
        assert_eq!(cdw_regime(0.3), Regime::Cdw);
        assert_eq!(correlation_exponents(0.5), (1.0, 1.0));
        assert_eq!(correlation_exponents(1.0), (2.0, 0.5));
        assert_eq!(correlation_exponents(0.25), (0.5, 2.0));
    }

    #[test]
    fn pinning() {
        assert_eq!(pinning_threshold(1).unwrap(), 2.0);
        assert_eq!(pinning_threshold(2).unwrap(), 0.5);
        assert!((pinning_threshold(3).unwrap() - 2.0 / 9.0).abs() < 1e-16);
        assert!(pinning_threshold(0).is_err());
    }
}
