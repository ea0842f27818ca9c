//! Named parameter sets used by the CLI and the test suites.

use crate::config::{QuenchConfig, RunConfig};
use crate::luttinger::c6_for_theta;
use crate::polariton::{derive_polariton, ExperimentalParams};

const C_LIGHT: f64 = 2.997_924_58e8;
const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Rubidium-like slow-light point: γ = 2π·3 MHz, L_abs = 5 μm, |Δ| = 100γ,
/// v_g/c = 10⁻⁵, ρ₀L_abs = 10⁻², 780 nm probe, C₆ of a high-n S state.
pub fn slow_light_reference() -> ExperimentalParams {
    let gamma = TWO_PI * 3.0e6;
    let l_abs = 5e-6;
    let g2n = C_LIGHT * gamma / l_abs;
    // v_g/c = 1/(1 + tan²θ) = 1e-5
    let omega2 = g2n / (1e5 - 1.0);
    ExperimentalParams {
        g_sqrt_n: g2n.sqrt(),
        gamma,
        delta_1: 100.0 * gamma,
        delta_2: 0.0,
        omega_c: omega2.sqrt(),
        c: C_LIGHT,
        q_p: TWO_PI / 780e-9,
        c6: TWO_PI * 56.0e12 * 1e-36,
        a_cut: 0.0,
        rho0: 1e-2 / l_abs,
        medium_len: 1e-3,
        temperature: 0.0,
    }
}

pub const PRESET_NAMES: [&str; 4] = ["fig2", "fig3", "fig4", "theta-crit"];

/// Named configurations: the Θ sweeps, the storage protocol and the critical point.
pub fn preset(name: &str) -> Option<RunConfig> {
    let mut cfg = RunConfig {
        name: name.to_string(),
        ..RunConfig::default()
    };
    match name {
        // K versus Θ on the 100-site grid, both cutoffs available via lattice.a_cut
        "fig2" => {
            cfg.sweep.thetas = vec![0.1, 0.3, 1.0, 3.0, 10.0, 30.0];
            cfg.lattice.thetas = cfg.sweep.thetas.clone();
        }
        // g²(z) from weak to strong interaction
        "fig3" => {
            cfg.lattice.thetas = vec![0.3, 3.0, 30.0];
            cfg.sweep.thetas = cfg.lattice.thetas.clone();
        }
        "fig4" => {
            cfg.quench = QuenchConfig {
                k0: 0.8,
                k_final: 5e-5,
                l0: 100.0,
                l_t: Some(10.0),
                ..QuenchConfig::default()
            };
        }
        // reference slow-light ratios with C₆ raised until Θ∥ = 3/2
        "theta-crit" => {
            cfg.sweep.thetas = vec![1.5];
            cfg.lattice.thetas = vec![1.5];
            let d = derive_polariton(&cfg.params).expect("reference parameters are valid");
            let m = d.mass_par_abs().expect("reference point is detuned");
            cfg.params.c6 = c6_for_theta(1.5, cfg.params.rho0, m);
        }
        _ => return None,
    }
    Some(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_resolve_and_unknown_is_none() {
        for name in PRESET_NAMES {
            assert_eq!(preset(name).unwrap().name, name);
        }
        assert!(preset("fig5").is_none());
        let crit = preset("theta-crit").unwrap();
        let d = derive_polariton(&crit.params).unwrap();
        let k = crate::luttinger::k_closed_form(crit.params.rho0, d.mass_par_abs().unwrap(), crit.params.c6).unwrap();
        assert!((k.k_param - 0.5).abs() < 1e-12);
        assert!(preset("").is_none());
    }
}
