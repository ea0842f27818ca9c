//! Report builders behind the command-line subcommands. Each returns plain
//! serializable data; formatting and file output live in the CLI.

use serde::{Deserialize, Serialize};

use crate::config::{LatticeConfig, QuenchConfig, SolverKind};
use crate::curve::{log_grid, CorrelationCurve};
use crate::error::{Error, Result};
use crate::lattice::{
    build_lattice, compressibility_with_states, g2_correlation, oscillation_envelope, DmrgOptions, KEstimate,
    LatticeSolver,
};
use crate::luttinger::{
    c6_for_theta, cdw_regime, correlation_exponents, k_closed_form, k_from_theta, od_c_for_theta,
    theta_experimental_axis, LuttingerParams, MassAxis, Regime,
};
use crate::polariton::{derive_polariton, validity_audit, AuditOptions, AuditReport, ExperimentalParams, PolaritonDerived};
use crate::quench::correlation::temperature_for_thermal_length;
use crate::quench::protocol::ProtocolSample;
use crate::quench::{
    analyze_zero_t, correlation_final_zero_t, correlation_thermal, protocol_with_l0, thermal_analysis,
    QuenchCorrelation, QuenchProtocol, ThermalFit,
};
use crate::units::NaturalUnits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsReport {
    pub units: NaturalUnits,
    pub derived_natural: PolaritonDerived,
    pub derived_si: PolaritonDerived,
    /// Closed-form Luttinger parameters (SI), absent at zero detuning.
    pub luttinger: Option<LuttingerParams>,
    pub theta_par: f64,
    pub theta_perp: f64,
    pub audit: AuditReport,
}

/// The validity audit at the interparticle spacing 1/ρ₀.
pub fn spacing_audit(params: &ExperimentalParams, opts: AuditOptions) -> AuditReport {
    validity_audit(params, 1.0 / params.rho0, opts)
}

/// Derived polariton quantities and the regime audit at the interparticle
/// spacing 1/ρ₀.
pub fn params_report(params: &ExperimentalParams, audit: AuditOptions) -> Result<ParamsReport> {
    let d = derive_polariton(params)?;
    let u = params.units();
    let luttinger = d
        .mass_par_abs()
        .map(|m| k_closed_form(params.rho0, m, params.c6))
        .transpose()?;
    Ok(ParamsReport {
        units: u,
        derived_natural: d.in_natural_units(&u),
        derived_si: d,
        luttinger,
        theta_par: theta_experimental_axis(&d, params, MassAxis::Longitudinal),
        theta_perp: theta_experimental_axis(&d, params, MassAxis::Transverse),
        audit: spacing_audit(params, audit),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KParamRow {
    pub theta: f64,
    pub k: f64,
    pub regime: Regime,
    /// 2K.
    pub density_exponent: f64,
    /// 1/(2K).
    pub first_order_exponent: f64,
    /// OD_c needed for this Θ at the slow-light ratios of the input.
    pub od_c_par: f64,
    pub od_c_perp: f64,
}

pub fn kparam_table(params: &ExperimentalParams, thetas: &[f64]) -> Result<Vec<KParamRow>> {
    let d = derive_polariton(params)?;
    thetas
        .iter()
        .map(|&theta| {
            let k = k_from_theta(theta);
            let (density_exponent, first_order_exponent) = correlation_exponents(k);
            Ok(KParamRow {
                theta,
                k,
                regime: cdw_regime(k),
                density_exponent,
                first_order_exponent,
                od_c_par: od_c_for_theta(theta, &d, params, MassAxis::Longitudinal)?,
                od_c_perp: od_c_for_theta(theta, &d, params, MassAxis::Transverse)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverLog {
    pub n_particles: usize,
    pub energy: f64,
    pub convergence: Vec<f64>,
    pub truncation_error: f64,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub theta: f64,
    /// C₆ in units ρ₀ = m = 1.
    pub c6: f64,
    pub a_cut: f64,
    pub estimate: KEstimate,
    pub k_closed_form: f64,
    pub regime: Regime,
    /// g²(z) of the N-particle ground state.
    pub g2: CorrelationCurve,
    /// Log-log slope of the |1 − g²| envelope over 1 ≤ ρ₀z ≤ 5.
    pub envelope_slope: Option<f64>,
    pub runs: Vec<SolverLog>,
}

/// Compressibility K and g² at one Θ on the configured lattice.
pub fn lattice_point(cfg: &LatticeConfig, theta: f64, seed: u64) -> Result<LatticePoint> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::InvalidParameter {
            field: "theta",
            reason: format!("must be strictly positive, got {theta}"),
        });
    }
    let c6 = c6_for_theta(theta, 1.0, 1.0);
    let model = build_lattice(1.0, c6, cfg.a_cut, 1.0, cfg.n_sites, cfg.dx, cfg.boundary, cfg.n_max)?;
    let solver = match cfg.solver {
        SolverKind::Ed => LatticeSolver::EdSeeded(seed),
        SolverKind::Dmrg => LatticeSolver::Dmrg(DmrgOptions {
            seed,
            ..DmrgOptions::new(cfg.chi, cfg.sweeps, cfg.tol)
        }),
    };
    let (estimate, states) = compressibility_with_states(&model, &solver)?;
    let g2 = g2_correlation(&states[1]);
    let (_, _, envelope_slope) = oscillation_envelope(&g2, 1.0, 5.0);
    let runs = states
        .iter()
        .map(|s| SolverLog {
            n_particles: s.lattice.n_particles,
            energy: s.energy,
            convergence: s.convergence.clone(),
            truncation_error: s.truncation_error,
            residual: s.residual,
            converged: s.converged,
        })
        .collect();
    Ok(LatticePoint {
        theta,
        c6,
        a_cut: cfg.a_cut,
        regime: cdw_regime(estimate.k),
        estimate,
        k_closed_form: k_from_theta(theta),
        g2,
        envelope_slope,
        runs,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuenchReport {
    pub protocol: QuenchProtocol,
    /// Time (s) at which K(t) reaches the configured final value.
    pub t_final: f64,
    pub correlation: QuenchCorrelation,
    pub zero_t: CorrelationCurve,
    /// Asymptote intersection of the zero-T envelope (units of 1/ρ₀).
    pub zero_t_knee: Option<f64>,
    pub zero_t_slope_midpoint: Option<f64>,
    pub thermal: Option<CorrelationCurve>,
    pub thermal_fit: Option<ThermalFit>,
    /// Temperature (rad/s) giving the configured L_T⁰ρ₀.
    pub temperature: Option<f64>,
    pub samples: Vec<ProtocolSample>,
}

pub fn quench_report(params: &ExperimentalParams, cfg: &QuenchConfig) -> Result<QuenchReport> {
    let d = derive_polariton(params)?;
    let protocol = protocol_with_l0(cfg.k0, cfg.l0, &d, params)?;
    let t = protocol.time_for_k(cfg.k_final)?;
    let corr = QuenchCorrelation::from_protocol(&protocol, t, cfg.alpha)?;
    let grid = log_grid(cfg.alpha, cfg.z_max_over_l0 * corr.l0, cfg.per_decade);
    let zero_t = correlation_final_zero_t(&protocol, t, &grid, cfg.alpha)?;
    let zt = analyze_zero_t(&corr, cfg.z_max_over_l0, cfg.per_decade)?;
    let (thermal, thermal_fit, temperature) = match cfg.l_t {
        Some(lt) => {
            let temp = temperature_for_thermal_length(&protocol, lt)?;
            let curve = correlation_thermal(&protocol, t, &grid, temp, cfg.alpha)?;
            let fit = thermal_analysis(&corr.with_thermal_length(lt)?)?;
            (Some(curve), Some(fit), Some(temp))
        }
        None => (None, None, None),
    };
    let samples = protocol.samples(cfg.t_max_over_tau * protocol.tau, cfg.protocol_samples);
    Ok(QuenchReport {
        protocol,
        t_final: t,
        correlation: corr,
        zero_t,
        zero_t_knee: zt.knee,
        zero_t_slope_midpoint: zt.slope_midpoint,
        thermal,
        thermal_fit,
        temperature,
        samples,
    })
}
