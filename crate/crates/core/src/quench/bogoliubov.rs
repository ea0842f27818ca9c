//! Bogoliubov coefficients of the phonon modes during the switch-off.
//!
//! The phonon annihilator evolves as b_p(t) = u_p b_p(0) + v_p b_p†(0), with
//! b_p(0) the ground-state modes at K₀. In the variable s = t/τ
//!
//!   i d/ds (u, v*) = r_p(s) [[w, −g], [g, −w]] (u, v*),
//!
//! with κ = K/K₀, w = κ + 1/κ, g = κ − 1/κ and r_p = τ u(t)|p|/2.
//! Momenta are measured in units of ρ₀.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::protocol::{instantaneous_k, QuenchProtocol};
use crate::error::{require_non_negative, Error, Result};
use crate::ode::{self, OdeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Ode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchState {
    pub t: f64,
    pub k_t: f64,
    pub mass_t: f64,
    pub p_grid: Vec<f64>,
    pub u: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub w: f64,
    pub g_coupling: f64,
}

impl QuenchState {
    pub fn symplectic_norm(&self, i: usize) -> f64 {
        self.u[i].norm_sqr() - self.v[i].norm_sqr()
    }
}

/// A time dependence of K seen by the mode equations, in s = t/τ.
pub trait Schedule {
    /// κ(s) = K(s)/K₀.
    fn kappa(&self, s: f64) -> f64;
    /// r_p(s) for momentum `p` (units of ρ₀).
    fn rate(&self, s: f64, p: f64) -> f64;
}

/// The protocol viewed as a dimensionless schedule.
#[derive(Debug, Clone, Copy)]
pub struct ProtocolSchedule {
    pub k0: f64,
    /// l₀ρ₀.
    pub l0: f64,
    a: f64,
    c: f64,
}

impl ProtocolSchedule {
    pub fn new(k0: f64, l0: f64) -> Self {
        ProtocolSchedule {
            k0,
            l0,
            a: 1.0 / (k0 * k0) - 1.0,
            c: (k0 * k0 + 1.0) / (2.0 * k0),
        }
    }

    pub fn from_protocol(p: &QuenchProtocol) -> Self {
        Self::new(p.k0, p.l0() * p.rho0)
    }

    fn f(&self, s: f64) -> f64 {
        (2.0 * (s + self.c).acosh()).exp_m1() / self.a
    }

    fn k(&self, s: f64) -> f64 {
        1.0 / (1.0 + self.a * self.f(s)).sqrt()
    }
}

impl Schedule for ProtocolSchedule {
    fn kappa(&self, s: f64) -> f64 {
        self.k(s) / self.k0
    }
    // τ u|p|/2 = τπρ₀|p|/(2 m₀ f K) = l₀|p|/(2 A f K)
    fn rate(&self, s: f64, p: f64) -> f64 {
        self.l0 * p.abs() / (2.0 * self.a * self.f(s) * self.k(s))
    }
}

/// K held at K₀ with a constant mode rate `rate_per_p`·|p|.
#[derive(Debug, Clone, Copy)]
pub struct FrozenSchedule {
    pub rate_per_p: f64,
}

impl Schedule for FrozenSchedule {
    fn kappa(&self, _s: f64) -> f64 {
        1.0
    }
    fn rate(&self, _s: f64, p: f64) -> f64 {
        self.rate_per_p * p.abs()
    }
}

pub fn integrate_mode<S: Schedule>(
    schedule: &S,
    p: f64,
    s_final: f64,
    opts: OdeOptions,
) -> Result<(Complex64, Complex64)> {
    let rhs = |s: f64, y: &[f64; 4]| {
        let u = Complex64::new(y[0], y[1]);
        let vc = Complex64::new(y[2], y[3]);
        let kap = schedule.kappa(s);
        let w = kap + 1.0 / kap;
        let g = kap - 1.0 / kap;
        let r = schedule.rate(s, p);
        let mi = Complex64::new(0.0, -r);
        let du = mi * (w * u - g * vc);
        let dv = mi * (g * u - w * vc);
        [du.re, du.im, dv.re, dv.im]
    };
    let (y, _) = ode::integrate(rhs, 0.0, s_final, [1.0, 0.0, 0.0, 0.0], opts)
        .map_err(|e| Error::OdeStepFailure { p, t: e.t })?;
    Ok((Complex64::new(y[0], y[1]), Complex64::new(y[2], -y[3])))
}

/// cos(νL) and sin(νL)/ν as functions of ν², continued to ν² < 0.
pub(crate) fn cos_sinc(nu2: f64, l: f64) -> (f64, f64) {
    let x = nu2 * l * l;
    if x.abs() < 1e-2 {
        let c = 1.0 - x / 2.0 + x * x / 24.0 - x * x * x / 720.0;
        let s = l * (1.0 - x / 6.0 + x * x / 120.0 - x * x * x / 5040.0);
        (c, s)
    } else if nu2 > 0.0 {
        let nu = nu2.sqrt();
        ((nu * l).cos(), (nu * l).sin() / nu)
    } else {
        let q = (-nu2).sqrt();
        ((q * l).cosh(), (q * l).sinh() / q)
    }
}

/// Closed-form (u, v) for the protocol at K(t) = `k_t`, for momentum `p`
/// (units of ρ₀) and crossover length `l0` (units of 1/ρ₀).
pub fn analytic_mode(k0: f64, k_t: f64, l0: f64, p: f64) -> (Complex64, Complex64) {
    let l = (k_t / k0).ln();
    let r = k_t / k0;
    let kt = l0 * p.abs() / 2.0;
    let nu2 = (l0 * l0 * p * p - 1.0) / 4.0;
    let (c, sn) = cos_sinc(nu2, l);
    let sr = r.sqrt();
    let a11 = sr * (c - sn / 2.0);
    let a12 = -sr * kt * sn;
    let a21 = kt * sn / sr;
    let a22 = (c + sn / 2.0) / sr;
    let u = Complex64::new(0.5 * (a11 + a22), 0.5 * (a21 - a12));
    let v = Complex64::new(0.5 * (a11 - a22), 0.5 * (a21 + a12));
    (u, v)
}

pub fn evolve_bogoliubov(
    protocol: &QuenchProtocol,
    p_grid: &[f64],
    t_final: f64,
    method: Method,
) -> Result<QuenchState> {
    require_non_negative("t_final", t_final)?;
    if let Some(&p) = p_grid.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::InvalidParameter {
            field: "p_grid",
            reason: format!("momenta must be positive, got {p}"),
        });
    }
    let sched = ProtocolSchedule::from_protocol(protocol);
    let k_t = instantaneous_k(protocol, t_final);
    let s_final = protocol.s(t_final);
    let mut u = Vec::with_capacity(p_grid.len());
    let mut v = Vec::with_capacity(p_grid.len());
    for &p in p_grid {
        let (up, vp) = match method {
            Method::Analytic => analytic_mode(protocol.k0, k_t, sched.l0, p),
            Method::Ode => integrate_mode(&sched, p, s_final, OdeOptions::default())?,
        };
        u.push(up);
        v.push(vp);
    }
    let kap = k_t / protocol.k0;
    Ok(QuenchState {
        t: t_final,
        k_t,
        mass_t: protocol.mass(t_final),
        p_grid: p_grid.to_vec(),
        u,
        v,
        w: kap + 1.0 / kap,
        g_coupling: kap - 1.0 / kap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_start() {
        let (u, v) = analytic_mode(0.8, 0.8, 50.0, 0.3);
        assert!((u - 1.0).norm() < 1e-15 && v.norm() < 1e-15);
        let s = ProtocolSchedule::new(0.8, 50.0);
        let (u, v) = integrate_mode(&s, 0.3, 0.0, OdeOptions::default()).unwrap();
        assert_eq!((u, v), (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn frozen_schedule_never_squeezes() {
        let s = FrozenSchedule { rate_per_p: 3.0 };
        let (u, v) = integrate_mode(&s, 0.7, 20.0, OdeOptions::default()).unwrap();
        assert!(v.norm() < 1e-14);
        assert!((u.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ode_matches_closed_form_across_branches() {
        let (k0, l0) = (0.8, 3.0);
        let sched = ProtocolSchedule::new(k0, l0);
        for p in [0.05, 0.2, 1.0 / 3.0, 0.5, 2.0] {
            let s1 = 5.0;
            let (u, v) = integrate_mode(&sched, p, s1, OdeOptions::default()).unwrap();
            let (ua, va) = analytic_mode(k0, sched.k(s1), l0, p);
            assert!((u - ua).norm() < 1e-7, "p={p}: {u} {ua}");
            assert!((v - va).norm() < 1e-7, "p={p}: {v} {va}");
            assert!((u.norm_sqr() - v.norm_sqr() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn cos_sinc_continuous_through_zero() {
        for l in [-9.0, -0.5] {
            let a = cos_sinc(1e-4 / (l * l) * 0.999, l);
            let b = cos_sinc(1e-4 / (l * l) * 1.001, l);
            assert!((a.0 - b.0).abs() < 1e-6 && (a.1 - b.1).abs() < 1e-6);
            let c = cos_sinc(-1.0001e-2 / (l * l), l);
            let d = cos_sinc(-0.9999e-2 / (l * l), l);
            assert!((c.0 - d.0).abs() < 1e-5 && (c.1 - d.1).abs() < 1e-5);
        }
    }
}
