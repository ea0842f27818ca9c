//! The analytic switch-off schedule of the control field.
//!
//! With x(t) = arcosh(t/τ + C) and C = (K₀² + 1)/(2K₀), the mass grows as
//! m(t) = m₀ f(t), f = (e^{2x} − 1)/(e^{2x₀} − 1). Along this schedule
//! K(t) = e^{−x(t)} and m K̇ is constant, so the coupling between the
//! instantaneous Bogoliubov modes vanishes.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{require_positive, Error, Result};
use crate::polariton::{ExperimentalParams, PolaritonDerived};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchProtocol {
    pub k0: f64,
    /// Switch-off timescale τ (s).
    pub tau: f64,
    pub c_const: f64,
    /// Initial mass |m∥(0)| (s/m²).
    pub m0: f64,
    /// Density (1/m).
    pub rho0: f64,
    /// Initial group velocity (m/s).
    pub vg0: f64,
    pub g_sqrt_n: f64,
    pub delta_1: f64,
    pub gamma: f64,
    pub c: f64,
}

fn check_k0(k0: f64) -> Result<()> {
    if k0.is_finite() && k0 > 0.0 && k0 < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "k0",
            reason: format!("must lie in (0, 1), got {k0}"),
        })
    }
}

pub fn protocol_from_params(
    k0: f64,
    tau: f64,
    derived: &PolaritonDerived,
    params: &ExperimentalParams,
) -> Result<QuenchProtocol> {
    check_k0(k0)?;
    require_positive("tau", tau)?;
    let m0 = derived.mass_par_abs().ok_or(Error::InvalidParameter {
        field: "delta_1",
        reason: "longitudinal mass is unbounded at zero detuning".into(),
    })?;
    Ok(QuenchProtocol {
        k0,
        tau,
        c_const: (k0 * k0 + 1.0) / (2.0 * k0),
        m0,
        rho0: params.rho0,
        vg0: derived.vg,
        g_sqrt_n: params.g_sqrt_n,
        delta_1: params.delta_1,
        gamma: params.gamma,
        c: params.c,
    })
}

/// Builds the protocol with τ chosen so that l₀ρ₀ equals `l0_rho0`.
pub fn protocol_with_l0(
    k0: f64,
    l0_rho0: f64,
    derived: &PolaritonDerived,
    params: &ExperimentalParams,
) -> Result<QuenchProtocol> {
    check_k0(k0)?;
    require_positive("l0_rho0", l0_rho0)?;
    let mut p = protocol_from_params(k0, 1.0, derived, params)?;
    p.tau = l0_rho0 * p.m0 / (PI * p.rho0 * p.rho0 * p.a_const());
    Ok(p)
}

impl QuenchProtocol {
    /// A = e^{2x₀} − 1 = 1/K₀² − 1 = 2Θ₀.
    pub fn a_const(&self) -> f64 {
        1.0 / (self.k0 * self.k0) - 1.0
    }

    pub fn theta0(&self) -> f64 {
        self.a_const() / 2.0
    }

    /// Dimensionless time s = t/τ.
    pub fn s(&self, t: f64) -> f64 {
        t / self.tau
    }

    pub fn x(&self, t: f64) -> f64 {
        // arcosh(1 + y) written to stay accurate for K₀ → 1, where C → 1
        let y = (1.0 - self.k0).powi(2) / (2.0 * self.k0) + self.s(t);
        (y + (y * (y + 2.0)).sqrt()).ln_1p()
    }

    /// x(0) = ln(1/K₀).
    pub fn x0(&self) -> f64 {
        -self.k0.ln()
    }

    /// f(t) = (e^{2x} − 1)/(e^{2x₀} − 1).
    pub fn f(&self, t: f64) -> f64 {
        (2.0 * self.x(t)).exp_m1() / self.a_const()
    }

    /// The same factor written as e^{x} sinh x · e^{−arcosh C}/√(C² − 1).
    pub fn f_alt(&self, t: f64) -> f64 {
        let x = self.x(t);
        let x0 = self.x(0.0);
        // √(C² − 1) = sinh(arcosh C)
        x.exp() * x.sinh() * (-x0).exp() / x0.sinh()
    }

    /// df/dt.
    pub fn f_dot(&self, t: f64) -> f64 {
        let x = self.x(t);
        // d/dt (e^{2x} − 1)/A = 2e^{2x} ẋ / A, ẋ = 1/(τ sinh x)
        2.0 * (2.0 * x).exp() / (self.a_const() * self.tau * x.sinh())
    }

    pub fn mass(&self, t: f64) -> f64 {
        self.m0 * self.f(t)
    }

    pub fn group_velocity(&self, t: f64) -> f64 {
        self.vg0 / self.f(t)
    }

    /// Ω(t) = g√n / √(f(t) c/v_g(0) − 1).
    pub fn omega(&self, t: f64) -> f64 {
        self.g_sqrt_n / (self.f(t) * self.c / self.vg0 - 1.0).sqrt()
    }

    /// tan²θ(t) = f(t) c/v_g(0) − 1.
    pub fn tan2_theta(&self, t: f64) -> f64 {
        self.f(t) * self.c / self.vg0 - 1.0
    }

    /// Sound velocity u(t) = πρ₀/(m(t) K(t)).
    pub fn sound_velocity(&self, t: f64) -> f64 {
        PI * self.rho0 / (self.mass(t) * instantaneous_k(self, t))
    }

    /// Non-adiabatic coupling K̇/(uK) = m K̇/(πρ₀), made dimensionless with
    /// τ and ρ₀. Constant in time for this schedule.
    pub fn nonadiabatic_rate(&self, t: f64) -> f64 {
        let x = self.x(t);
        let k_dot_tau = -instantaneous_k(self, t) / x.sinh();
        self.f(t) * k_dot_tau / PI
    }

    /// l₀ = πρ₀τA/m₀.
    pub fn l0(&self) -> f64 {
        PI * self.rho0 * self.tau * self.a_const() / self.m0
    }

    /// Time at which K(t) reaches `k` (< K₀).
    pub fn time_for_k(&self, k: f64) -> Result<f64> {
        if !(k > 0.0 && k <= self.k0) {
            return Err(Error::InvalidParameter {
                field: "k_target",
                reason: format!("must lie in (0, K0 = {}], got {k}", self.k0),
            });
        }
        let x = -k.ln();
        Ok(self.tau * (x.cosh() - self.c_const).max(0.0))
    }

    /// Stopping length v_g(0)·A·τ·K₀/2: distance travelled during switch-off.
    pub fn stopping_length(&self) -> f64 {
        self.vg0 * self.a_const() * self.tau * self.k0 / 2.0
    }

    /// Samples of (t, Ω(t)/Ω(0), K(t)) on `n` points up to `t_max`.
    pub fn samples(&self, t_max: f64, n: usize) -> Vec<ProtocolSample> {
        let om0 = self.omega(0.0);
        (0..n)
            .map(|i| {
                let t = t_max * i as f64 / (n.max(2) - 1) as f64;
                ProtocolSample {
                    t,
                    s: self.s(t),
                    omega_ratio: self.omega(t) / om0,
                    k: instantaneous_k(self, t),
                    f: self.f(t),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSample {
    pub t: f64,
    /// t/τ.
    pub s: f64,
    pub omega_ratio: f64,
    pub k: f64,
    pub f: f64,
}

/// K(t) = 1/√(1 + (1/K₀² − 1) f(t)).
pub fn instantaneous_k(p: &QuenchProtocol, t: f64) -> f64 {
    1.0 / (1.0 + p.a_const() * p.f(t)).sqrt()
}

/// f at which K reaches `k`: (1/K² − 1)/(1/K₀² − 1).
pub fn f_for_k(k0: f64, k: f64) -> f64 {
    (1.0 / (k * k) - 1.0) / (1.0 / (k0 * k0) - 1.0)
}

/// l₀ = π⁴/90 · C₆ρ₀⁵τ.
pub fn crossover_length(c6: f64, rho0: f64, tau: f64) -> f64 {
    PI.powi(4) / 90.0 * c6 * rho0.powi(5) * tau
}

/// l₀/L = (2π/K₀) ρ₀L_abs |Δ|/γ, independent of the interaction strength.
pub fn crossover_ratio(k0: f64, rho0: f64, l_abs: f64, delta_1: f64, gamma: f64) -> f64 {
    2.0 * PI / k0 * rho0 * l_abs * delta_1.abs() / gamma
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverReport {
    /// l₀ (m).
    pub l0: f64,
    /// l₀/L with L the stopping length.
    pub ratio: f64,
}

pub fn crossover_report(p: &QuenchProtocol, l_abs: f64) -> CrossoverReport {
    CrossoverReport {
        l0: p.l0(),
        ratio: crossover_ratio(p.k0, p.rho0, l_abs, p.delta_1, p.gamma),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polariton::derive_polariton;
    use crate::presets::slow_light_reference;

    fn proto(k0: f64) -> QuenchProtocol {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        protocol_from_params(k0, 1e-6, &d, &p).unwrap()
    }

    #[test]
    fn anchoring_at_zero() {
        let q = proto(0.8);
        assert!((q.f(0.0) - 1.0).abs() < 1e-12);
        assert!((instantaneous_k(&q, 0.0) - 0.8).abs() < 1e-14);
        let p = slow_light_reference();
        let static_omega = p.g_sqrt_n / (p.c / q.vg0 - 1.0).sqrt();
        assert!((q.omega(0.0) - static_omega).abs() < 1e-12 * static_omega);
        assert!((q.omega(0.0) - p.omega_c).abs() < 1e-9 * p.omega_c);
    }

    #[test]
    fn rejects_bad_k0() {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        for k0 in [0.0, 1.0, 1.2, -0.1] {
            assert!(protocol_from_params(k0, 1e-6, &d, &p).is_err());
        }
    }

    #[test]
    fn f_forms_agree_and_k_is_exponential() {
        let q = proto(0.3);
        for i in 0..=1000 {
            let t = q.tau * 0.1 * i as f64;
            let (a, b) = (q.f(t), q.f_alt(t));
            assert!((a - b).abs() <= 1e-12 * a, "{t}: {a} {b}");
            let k = instantaneous_k(&q, t);
            assert!((k - (-q.x(t)).exp()).abs() < 1e-12 * k);
        }
    }

    #[test]
    fn target_k_inversion() {
        let f = f_for_k(0.8, 0.4);
        assert!((f - 28.0 / 3.0).abs() < 1e-12);
        let q = proto(0.8);
        let t = q.time_for_k(0.4).unwrap();
        assert!((q.f(t) - f).abs() < 1e-10 * f);
        assert!((instantaneous_k(&q, t) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn mass_velocity_product_constant() {
        let q = proto(0.6);
        let p0 = q.m0 * q.vg0;
        for i in 0..200 {
            let t = q.tau * 0.5 * i as f64;
            let prod = q.mass(t) * q.group_velocity(t);
            assert!((prod - p0).abs() < 1e-12 * p0);
        }
    }

    #[test]
    fn nonadiabatic_rate_is_flat() {
        let q = proto(0.5);
        let r0 = q.nonadiabatic_rate(0.0);
        assert!((r0 + 2.0 / (PI * q.a_const())).abs() < 1e-12);
        let h = 1e-4 * q.tau;
        for i in 1..100 {
            let t = q.tau * i as f64;
            let d = (q.nonadiabatic_rate(t + h) - q.nonadiabatic_rate(t - h)) / (2.0 * h) * q.tau;
            assert!(d.abs() < 1e-9, "{t}: {d}");
        }
    }

    #[test]
    fn l0_two_routes() {
        // When K₀ is the closed-form value, l₀ from A and from C₆ coincide.
        let mut p = slow_light_reference();
        p.c6 *= 1e6;
        let d = derive_polariton(&p).unwrap();
        let l = crate::luttinger::k_closed_form(p.rho0, d.m_par.unwrap(), p.c6).unwrap();
        let q = protocol_from_params(l.k_param, 2e-6, &d, &p).unwrap();
        let direct = crossover_length(p.c6, p.rho0, 2e-6);
        assert!((q.l0() - direct).abs() < 1e-10 * direct);
        assert!((crossover_length(p.c6, p.rho0, 4e-6) / direct - 2.0).abs() < 1e-15);
    }

    #[test]
    fn crossover_ratio_matches_stopping_length() {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        let q = protocol_from_params(0.7, 3e-6, &d, &p).unwrap();
        let r = q.l0() / q.stopping_length();
        let expect = crossover_ratio(0.7, p.rho0, d.l_abs, p.delta_1, p.gamma);
        assert!((r - expect).abs() < 1e-10 * expect, "{r} {expect}");
    }

    #[test]
    fn omega_decays_monotonically() {
        let q = proto(0.8);
        let s = q.samples(20.0 * q.tau, 400);
        assert!(s.windows(2).all(|w| w[1].omega_ratio < w[0].omega_ratio));
        assert!(s.last().unwrap().omega_ratio < 0.2);
    }
}
