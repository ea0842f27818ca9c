//! Experimental bounds on the storage protocol: switching speed, temperature
//! and the resulting length scales.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::correlation::thermal_length;
use super::protocol::{protocol_from_params, QuenchProtocol};
use crate::error::{require_positive, Error, Result};
use crate::luttinger::{k_closed_form, od_c_for_theta, MassAxis};
use crate::polariton::{derive_polariton, validity_audit, AuditOptions, AuditReport, ExperimentalParams};
use crate::quad::{integrate, QuadOptions};
use crate::units::NaturalUnits;

/// T_max = Ω²/(2|Δ|), half the largest DSP energy v_g k_max.
pub fn temperature_cap(params: &ExperimentalParams) -> f64 {
    params.omega_c * params.omega_c / (2.0 * params.delta_1.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchTime {
    /// τ_min (s).
    pub tau: f64,
    /// 4K₀²/(1 − K₀²)².
    pub bound: f64,
    pub margin: f64,
    /// ∫₀^∞ γ_θ dt for the protocol run at τ_min.
    pub gamma_theta_integral: f64,
}

/// τ with cτ/L_abs = margin · 4K₀²/(1 − K₀²)². `vg0` (< c) sets the mixing
/// angle for the reported ∫γ_θ dt.
pub fn min_switch_time(k0: f64, l_abs: f64, c: f64, vg0: f64, margin: f64) -> Result<SwitchTime> {
    if !(k0 > 0.0 && k0 < 1.0) {
        if k0 == 1.0 {
            return Err(Error::InfinitelySlowSwitching { k0 });
        }
        return Err(Error::InvalidParameter {
            field: "k0",
            reason: format!("must lie in (0, 1), got {k0}"),
        });
    }
    require_positive("l_abs", l_abs)?;
    require_positive("c", c)?;
    require_positive("margin", margin)?;
    let bound = 4.0 * k0 * k0 / (1.0 - k0 * k0).powi(2);
    if !bound.is_finite() {
        return Err(Error::InfinitelySlowSwitching { k0 });
    }
    let tau = margin * bound * l_abs / c;
    let gamma_theta_integral = gamma_theta_integral(k0, tau, l_abs, c, vg0)?;
    Ok(SwitchTime {
        tau,
        bound,
        margin,
        gamma_theta_integral,
    })
}

/// ∫₀^∞ γ_θ dt with γ_θ = (L_abs/c) θ̇² along the protocol with switching
/// time `tau`, where tan²θ(t) = f(t) c/v_g(0) − 1.
pub fn gamma_theta_integral(k0: f64, tau: f64, l_abs: f64, c: f64, vg0: f64) -> Result<f64> {
    require_positive("tau", tau)?;
    require_positive("vg0", vg0)?;
    if vg0 >= c {
        return Err(Error::InvalidParameter {
            field: "vg0",
            reason: "initial group velocity must be below c".into(),
        });
    }
    let a = 1.0 / (k0 * k0) - 1.0;
    let x0 = -k0.ln();
    // In x = arcosh(t/τ + C): γ_θ dt = (L_abs/cτ) e^{4x} / (A² sinh x f² tan²θ) dx.
    let integrand = |x: f64| {
        let f = (2.0 * x).exp_m1() / a;
        let tan2 = f * c / vg0 - 1.0;
        (4.0 * x).exp() / (a * a * x.sinh() * f * f * tan2)
    };
    let r = integrate(integrand, x0, x0 + 40.0, QuadOptions::default());
    if !r.converged {
        return Err(Error::Quadrature { z: f64::NAN, error: r.error });
    }
    Ok(l_abs / (c * tau) * r.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub k0: f64,
    pub theta0: f64,
    pub od_c: f64,
    pub od: f64,
    /// OD_c needed for Θ = 3/2 along the propagation axis.
    pub od_c_required_par: f64,
    pub od_c_required_perp: f64,
    pub switch: SwitchTime,
    /// τ making the stopping length equal the medium length (s).
    pub tau_stop: f64,
    pub t_max: f64,
    /// l₀/L for the stopping-length protocol.
    pub l0_over_len: f64,
    /// L_T⁰ at T_max (m).
    pub l_t0: f64,
    /// √(l₀L_T⁰)/L from the protocol objects.
    pub thermal_ratio: f64,
    /// (2π/K₀)(ρ₀L_abs|Δ|/γ)√(|Δ|/(γ·OD)) · cos-θ correction.
    pub thermal_ratio_closed_form: f64,
    pub audit: AuditReport,
    pub crystal_feasible: bool,
}

impl FeasibilityReport {
    /// Times, the temperature cap and L_T⁰ converted to natural units.
    pub fn in_natural_units(&self, u: &NaturalUnits) -> FeasibilityReport {
        let mut r = self.clone();
        r.switch.tau = u.time_to_natural(self.switch.tau);
        r.tau_stop = u.time_to_natural(self.tau_stop);
        r.t_max = u.rate_to_natural(self.t_max);
        r.l_t0 = u.length_to_natural(self.l_t0);
        r
    }
}

/// Go/no-go summary at the closed-form K₀ of `params`.
pub fn feasibility_report(params: &ExperimentalParams, margin: f64, audit: AuditOptions) -> Result<FeasibilityReport> {
    let d = derive_polariton(params)?;
    let m0 = d.mass_par_abs().ok_or(Error::InvalidParameter {
        field: "delta_1",
        reason: "longitudinal mass is unbounded at zero detuning".into(),
    })?;
    let lp = k_closed_form(params.rho0, m0, params.c6)?;
    let k0 = lp.k_param;
    let switch = min_switch_time(k0, d.l_abs, params.c, d.vg, margin)?;
    let a = 1.0 / (k0 * k0) - 1.0;
    let tau_stop = 2.0 * params.medium_len / (d.vg * a * k0);
    let proto: QuenchProtocol = protocol_from_params(k0, tau_stop, &d, params)?;
    let t_max = temperature_cap(params);
    let l_t0 = thermal_length(&proto, t_max)? / params.rho0;
    let l0 = proto.l0();
    let thermal_ratio = (l0 * l_t0).sqrt() / params.medium_len;
    let n = params.natural();
    let dg = params.delta_1.abs() / params.gamma;
    let thermal_ratio_closed_form = 2.0 * PI / k0 * params.rho0 * d.l_abs * dg * (dg / d.od).sqrt()
        * n.sin2_theta().sqrt();
    Ok(FeasibilityReport {
        k0,
        theta0: lp.theta_ll,
        od_c: d.od_c,
        od: d.od,
        od_c_required_par: od_c_for_theta(1.5, &d, params, MassAxis::Longitudinal)?,
        od_c_required_perp: od_c_for_theta(1.5, &d, params, MassAxis::Transverse)?,
        switch,
        tau_stop,
        t_max,
        l0_over_len: l0 / params.medium_len,
        l_t0,
        thermal_ratio,
        thermal_ratio_closed_form,
        audit: validity_audit(params, 1.0 / params.rho0, audit),
        crystal_feasible: k0 < 0.5 && tau_stop >= switch.tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::slow_light_reference;

    #[test]
    fn cap_examples() {
        let mut p = slow_light_reference();
        p.omega_c = p.delta_1.abs();
        assert!((temperature_cap(&p) - p.delta_1.abs() / 2.0).abs() < 1e-6);
        let t0 = 1234.0;
        p.omega_c = (2.0 * p.delta_1.abs() * t0).sqrt();
        assert!((temperature_cap(&p) - t0).abs() < 1e-9 * t0);
    }

    #[test]
    fn switch_time_reference_values() {
        let c = 2.997_924_58e8;
        let s = min_switch_time(0.99, 5e-6, c, 1e-5 * c, 1.0).unwrap();
        assert!((s.tau / 0.16e-9 - 1.0).abs() < 0.05, "{}", s.tau);
        let s = min_switch_time(0.5, 5e-6, c, 1e-5 * c, 1.0).unwrap();
        assert!((s.bound - 1.0 / 0.5625 * 1.0 * 4.0 * 0.25 / 0.5625 * 0.5625).abs() < 1e-12);
        assert!(matches!(
            min_switch_time(1.0, 5e-6, c, 1e-5 * c, 1.0),
            Err(Error::InfinitelySlowSwitching { .. })
        ));
    }

    #[test]
    fn gamma_theta_matches_slow_light_reduction() {
        // For v_g(0) ≪ c the integral reduces to
        // (L_abs/cτ)(v_g/c) A ∫_{1/K₀²}^∞ y^{3/2}/(y − 1)⁴ dy.
        let (k0, c, l_abs, tau) = (0.7, 3e8, 5e-6, 1e-9);
        let v = 1e-7 * c;
        let a = 1.0 / (k0 * k0) - 1.0;
        let y0 = 1.0 / (k0 * k0);
        // y = y0 + w/(1−w) maps [0,1) onto [y0, ∞)
        let r = integrate(
            |w: f64| {
                let y = y0 + w / (1.0 - w);
                y.powf(1.5) / (y - 1.0).powi(4) / (1.0 - w).powi(2)
            },
            0.0,
            1.0,
            QuadOptions::default(),
        );
        let approx = l_abs / (c * tau) * (v / c) * a * r.value;
        let exact = gamma_theta_integral(k0, tau, l_abs, c, v).unwrap();
        assert!((exact / approx - 1.0).abs() < 1e-5, "{exact} {approx}");
    }

    #[test]
    fn thermal_identity_at_reference_point() {
        let mut p = slow_light_reference();
        p.c6 *= 1e6;
        let r = feasibility_report(&p, 10.0, AuditOptions::default()).unwrap();
        assert!((r.thermal_ratio / r.thermal_ratio_closed_form - 1.0).abs() < 1e-10, "{r:?}");
    }
}
