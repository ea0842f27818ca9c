//! Density-correlation envelope after the switch-off.
//!
//! The phase fluctuations are ⟨[φ(z) − φ(0)]²⟩ = K(t)[ln(z/α) + I(z, t)] with
//!
//!   I(z, t) = ∫₀^∞ dp e^{−αp} (1 − cos pz)/p · F(p),
//!   F(p) = (1 − cos(SL) − S sin(SL))/S²,  S² = l₀²p² − 1,  L = ln(K/K₀),
//!
//! and the oscillating part of the density correlation has the envelope
//! (α/z)^{2K} e^{−2K I}. Lengths and momenta are in units of 1/ρ₀ and ρ₀.
//! A thermal initial state adds (1 + F)(coth(pL_T⁰/2) − 1) to the weight.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::bogoliubov::cos_sinc;
use super::protocol::{instantaneous_k, QuenchProtocol};
use crate::curve::{check_grid, log_grid, log_slopes, CorrelationCurve, CurveMeta};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::quad::{integrate_panels, QuadOptions};

/// −ln(10⁻¹⁶): the regulator e^{−αp} is dropped beyond p = CUTOFF_EXP/α.
const CUTOFF_EXP: f64 = 36.841_361_487_904_734;
const SERIES_WINDOW: f64 = 1e-4;
const MAX_INITIAL_PANELS: usize = 400_000;

/// Dimensionless description of the final-state correlations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchCorrelation {
    pub k0: f64,
    pub k_t: f64,
    /// l₀ρ₀.
    pub l0: f64,
    /// αρ₀.
    pub alpha: f64,
    /// L_T⁰ρ₀ = u₀ρ₀/T; `None` at zero temperature.
    pub l_t0: Option<f64>,
}

impl QuenchCorrelation {
    pub fn new(k0: f64, k_t: f64, l0: f64, alpha: f64) -> Result<Self> {
        require_positive("k0", k0)?;
        require_positive("k_t", k_t)?;
        require_positive("l0", l0)?;
        require_positive("alpha", alpha)?;
        Ok(QuenchCorrelation {
            k0,
            k_t,
            l0,
            alpha,
            l_t0: None,
        })
    }

    pub fn with_thermal_length(mut self, l_t0: f64) -> Result<Self> {
        require_positive("l_t0", l_t0)?;
        self.l_t0 = Some(l_t0);
        Ok(self)
    }

    pub fn from_protocol(p: &QuenchProtocol, t: f64, alpha: f64) -> Result<Self> {
        require_non_negative("t", t)?;
        Self::new(p.k0, instantaneous_k(p, t), p.l0() * p.rho0, alpha)
    }

    fn log_ratio(&self) -> f64 {
        (self.k_t / self.k0).ln()
    }

    /// F(p), continued analytically through S² = 0.
    pub fn weight(&self, p: f64) -> f64 {
        let l = self.log_ratio();
        let s2 = self.l0 * self.l0 * p * p - 1.0;
        if s2.abs() < SERIES_WINDOW {
            let (l2, l4) = (l * l, l.powi(4));
            let one_minus_cos = l2 / 2.0 - s2 * l4 / 24.0 + s2 * s2 * l4 * l2 / 720.0
                - s2.powi(3) * l4 * l4 / 40320.0;
            let x = s2 * l2;
            let sinc = l * (1.0 - x / 6.0 + x * x / 120.0 - x.powi(3) / 5040.0);
            return one_minus_cos - sinc;
        }
        let (_, sinc) = cos_sinc(s2, l);
        // 1 − cos y = 2 sin²(y/2), continued to 2 − 2cosh = −2 sinh²(y/2).
        let one_minus_cos = if s2 > 0.0 {
            2.0 * (0.5 * s2.sqrt() * l).sin().powi(2)
        } else {
            -2.0 * (0.5 * (-s2).sqrt() * l).sinh().powi(2)
        };
        one_minus_cos / s2 - sinc
    }

    fn breaks(&self, z: f64, p_max: f64) -> Vec<f64> {
        let l = self.log_ratio().abs();
        let mut h = (2.0 * PI / z).min(p_max / 64.0);
        if l > 0.0 {
            h = h.min(2.0 * PI / (self.l0 * l));
        }
        if let Some(lt) = self.l_t0 {
            h = h.min(1.0 / lt);
        }
        let n = ((p_max / h).ceil() as usize).clamp(1, MAX_INITIAL_PANELS);
        let mut b: Vec<f64> = (0..=n).map(|i| p_max * i as f64 / n as f64).collect();
        let knot = 1.0 / self.l0;
        if knot < p_max {
            let i = b.partition_point(|&x| x < knot);
            if (b[i] - knot).abs() > 1e-12 * knot {
                b.insert(i, knot);
            }
        }
        b
    }

    fn integrate(&self, z: f64, p_max: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
        let breaks = self.breaks(z, p_max);
        let opts = QuadOptions {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_panels: breaks.len() + 20_000,
        };
        let r = integrate_panels(&f, &breaks, opts);
        if !r.converged || !r.value.is_finite() {
            return Err(Error::Quadrature { z, error: r.error });
        }
        Ok(r.value)
    }

    /// I(z, t).
    pub fn i_integral(&self, z: f64) -> Result<f64> {
        if self.k_t == self.k0 {
            return Ok(0.0);
        }
        let a = self.alpha;
        self.integrate(z, CUTOFF_EXP / a, |p| {
            let s = (0.5 * p * z).sin();
            (-a * p).exp() * 2.0 * s * s / p * self.weight(p)
        })
    }

    /// Thermal addition to ln(z/α) + I in the phase fluctuations.
    pub fn i_thermal(&self, z: f64) -> Result<f64> {
        let Some(lt) = self.l_t0 else {
            return Ok(0.0);
        };
        let a = self.alpha;
        self.integrate(z, CUTOFF_EXP / (a + lt), |p| {
            let s = (0.5 * p * z).sin();
            let occ = 2.0 / (p * lt).exp_m1();
            (-a * p).exp() * 2.0 * s * s / p * (1.0 + self.weight(p)) * occ
        })
    }

    /// ln of the envelope (α/z)^{2K} e^{−2K(I + I_T)}.
    pub fn log_envelope(&self, z: f64) -> Result<f64> {
        let i = self.i_integral(z)? + self.i_thermal(z)?;
        Ok(-2.0 * self.k_t * ((z / self.alpha).ln() + i))
    }

    pub fn envelope(&self, z: f64) -> Result<f64> {
        Ok(self.log_envelope(z)?.exp())
    }

    /// Thermal suppression exponent 2K·I_T(z).
    pub fn thermal_exponent(&self, z: f64) -> Result<f64> {
        Ok(2.0 * self.k_t * self.i_thermal(z)?)
    }

    pub fn curve(&self, z_grid: &[f64]) -> Result<CorrelationCurve> {
        check_grid(z_grid, self.alpha)?;
        let amp = z_grid
            .iter()
            .map(|&z| self.envelope(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(CorrelationCurve::new(
            z_grid.to_vec(),
            amp,
            CurveMeta {
                k_t: Some(self.k_t),
                k0: Some(self.k0),
                l0: Some(self.l0),
                alpha: Some(self.alpha),
                l_t0: self.l_t0,
                ..CurveMeta::default()
            },
        ))
    }

    /// L_corr = 2√(l₀L_T⁰)/(πK₀) · (ln(K₀/K))^{1/4}.
    pub fn l_corr_closed_form(&self) -> Option<f64> {
        self.l_t0.map(|lt| {
            2.0 * (self.l0 * lt).sqrt() / (PI * self.k0) * (self.k0 / self.k_t).ln().powf(0.25)
        })
    }
}

/// Envelope at zero temperature on `z_grid` (units of 1/ρ₀), with the
/// regulator α (units of 1/ρ₀; 1 is the natural choice). Points with z < l₀
/// are tagged `adiabatic`, the rest `diabatic`.
pub fn correlation_final_zero_t(
    protocol: &QuenchProtocol,
    t: f64,
    z_grid: &[f64],
    alpha: f64,
) -> Result<CorrelationCurve> {
    let setup = QuenchCorrelation::from_protocol(protocol, t, alpha)?;
    let mut c = setup.curve(z_grid)?;
    c.tag_split(Some(setup.l0), "adiabatic", "diabatic");
    Ok(c)
}

/// L_T⁰ρ₀ = u₀ρ₀/T for the initial sound velocity u₀ = πρ₀/(m₀K₀).
pub fn thermal_length(protocol: &QuenchProtocol, temperature: f64) -> Result<f64> {
    require_positive("temperature", temperature)?;
    let u0 = PI * protocol.rho0 / (protocol.m0 * protocol.k0);
    Ok(u0 * protocol.rho0 / temperature)
}

/// Temperature (rad/s) at which L_T⁰ρ₀ equals `l_t0`.
pub fn temperature_for_thermal_length(protocol: &QuenchProtocol, l_t0: f64) -> Result<f64> {
    require_positive("l_t0", l_t0)?;
    let u0 = PI * protocol.rho0 / (protocol.m0 * protocol.k0);
    Ok(u0 * protocol.rho0 / l_t0)
}

/// Envelope with a thermal initial state. Tags `gaussian` / `exponential`
/// around the fitted crossover; metadata carries L_T⁰ρ₀ and the fitted
/// Gaussian width L_corr ρ₀.
pub fn correlation_thermal(
    protocol: &QuenchProtocol,
    t: f64,
    z_grid: &[f64],
    temperature: f64,
    alpha: f64,
) -> Result<CorrelationCurve> {
    let lt = thermal_length(protocol, temperature)?;
    let setup = QuenchCorrelation::from_protocol(protocol, t, alpha)?.with_thermal_length(lt)?;
    let fit = thermal_analysis(&setup)?;
    let mut c = setup.curve(z_grid)?;
    c.meta.l_corr = fit.l_corr_fit;
    c.tag_split(fit.exp_crossover, "gaussian", "exponential");
    Ok(c)
}

/// Fitted crossover of the zero-temperature envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTAnalysis {
    /// Intersection of the asymptotes (α/z)^{2K}·c₁ and z^{−2K₀}·c₂ (units of 1/ρ₀).
    pub knee: Option<f64>,
    /// First z at which the local slope reaches −(K + K₀).
    pub slope_midpoint: Option<f64>,
    pub z: Vec<f64>,
    pub log_envelope: Vec<f64>,
    pub slopes: Vec<f64>,
}

/// Evaluates the zero-temperature envelope from α to `z_max_over_l0`·l₀ and
/// locates the adiabatic/diabatic crossover.
pub fn analyze_zero_t(setup: &QuenchCorrelation, z_max_over_l0: f64, per_decade: usize) -> Result<ZeroTAnalysis> {
    let mut s = *setup;
    s.l_t0 = None;
    let z = log_grid(s.alpha, z_max_over_l0 * s.l0, per_decade);
    let le = z.iter().map(|&z| s.log_envelope(z)).collect::<Result<Vec<_>>>()?;
    let env: Vec<f64> = le.iter().map(|x| x.exp()).collect();
    let slopes = log_slopes(&z, &env);

    let (k, k0) = (s.k_t, s.k0);
    let mean = |it: Vec<f64>| (!it.is_empty()).then(|| it.iter().sum::<f64>() / it.len() as f64);
    let small: Vec<f64> = z
        .iter()
        .zip(&le)
        .filter(|(z, _)| **z <= 0.1 * s.l0)
        .map(|(z, l)| l + 2.0 * k * z.ln())
        .collect();
    let c1 = mean(small).or_else(|| Some(le[0] + 2.0 * k * z[0].ln()));
    let large: Vec<f64> = z
        .iter()
        .zip(&le)
        .filter(|(z, _)| **z >= 10.0 * s.l0)
        .map(|(z, l)| l + 2.0 * k0 * z.ln())
        .collect();
    let c2 = mean(large);
    let knee = match (c1, c2) {
        (Some(a), Some(b)) if k0 != k => Some(((b - a) / (2.0 * (k0 - k))).exp()),
        _ => None,
    };
    let target = -(k + k0);
    let slope_midpoint = slopes.windows(2).enumerate().find_map(|(i, w)| {
        (w[0] > target && w[1] <= target).then(|| {
            let frac = (target - w[0]) / (w[1] - w[0]);
            (z[i].ln() + frac * (z[i + 1].ln() - z[i].ln())).exp()
        })
    });
    Ok(ZeroTAnalysis {
        knee,
        slope_midpoint,
        z,
        log_envelope: le,
        slopes,
    })
}

/// Gaussian fit of the thermal suppression e^{−2K I_T(z)}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalFit {
    pub l_t0: f64,
    /// Width of exp(−z²/L_corr²) fitted where 0.05 ≤ 2K I_T ≤ 1.
    pub l_corr_fit: Option<f64>,
    pub l_corr_closed_form: f64,
    /// z at which d ln(2K I_T)/d ln z falls to 3/2 (Gaussian → exponential).
    pub exp_crossover: Option<f64>,
    /// Decay length of the exponential tail, from the slope of 2K I_T at the
    /// largest sampled z.
    pub exp_length: Option<f64>,
}

pub fn thermal_analysis(setup: &QuenchCorrelation) -> Result<ThermalFit> {
    let lt = setup.l_t0.ok_or(Error::InvalidParameter {
        field: "temperature",
        reason: "thermal analysis needs a finite thermal length".into(),
    })?;
    let closed = setup.l_corr_closed_form().unwrap_or(f64::NAN);
    let z_max = 30.0 * closed.max(lt).max(setup.alpha * 10.0);
    let z = log_grid(setup.alpha, z_max, 30);
    let y = z
        .iter()
        .map(|&z| setup.thermal_exponent(z))
        .collect::<Result<Vec<_>>>()?;

    let (mut num, mut den) = (0.0, 0.0);
    for (z, y) in z.iter().zip(&y) {
        if (0.05..=1.0).contains(y) {
            num += z.powi(4);
            den += y * z * z;
        }
    }
    let l_corr_fit = (den > 0.0).then(|| (num / den).sqrt());

    let pos: Vec<(f64, f64)> = z.iter().zip(&y).filter(|(_, y)| **y > 0.0).map(|(a, b)| (*a, *b)).collect();
    let zs: Vec<f64> = pos.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pos.iter().map(|p| p.1).collect();
    let n = log_slopes(&zs, &ys);
    let exp_crossover = n.windows(2).enumerate().find_map(|(i, w)| {
        (w[0] > 1.5 && w[1] <= 1.5 && ys[i] > 1e-3).then(|| {
            let frac = (1.5 - w[0]) / (w[1] - w[0]);
            (zs[i].ln() + frac * (zs[i + 1].ln() - zs[i].ln())).exp()
        })
    });
    let exp_length = (zs.len() >= 2).then(|| {
        let m = zs.len() - 1;
        (zs[m] - zs[m - 1]) / (ys[m] - ys[m - 1])
    });
    Ok(ThermalFit {
        l_t0: lt,
        l_corr_fit,
        l_corr_closed_form: closed,
        exp_crossover,
        exp_length,
    })
}
