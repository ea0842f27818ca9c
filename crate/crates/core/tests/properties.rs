use proptest::prelude::*;

use rydcryst_core::lattice::{
    build_lattice, g2_correlation, ground_state_dmrg, ground_state_ed, Boundary, LatticeModel,
};
use rydcryst_core::luttinger::{k_closed_form, theta, theta_experimental};
use rydcryst_core::polariton::{derive_polariton, dispersion_dsp, dispersion_exact, dsp_coefficients};
use rydcryst_core::presets::slow_light_reference;
use rydcryst_core::quench::{evolve_bogoliubov, protocol_with_l0, Method};
use rydcryst_core::ExperimentalParams;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Slow-light parameter sets around the reference point.
fn slow_light_params() -> impl Strategy<Value = ExperimentalParams> {
    (20.0..500.0f64, -6.0..-4.0f64, 0.3..3.0f64, 1e-3..5e-2f64, any::<bool>()).prop_map(
        |(det, log_vg, c6_scale, rho_labs, positive)| {
            let mut p = slow_light_reference();
            let g2n = p.g_sqrt_n * p.g_sqrt_n;
            let vg_over_c = 10f64.powf(log_vg);
            p.delta_1 = if positive { det } else { -det } * p.gamma;
            p.omega_c = (g2n * vg_over_c / (1.0 - vg_over_c)).sqrt();
            p.c6 *= c6_scale;
            let l_abs = p.c * p.gamma / g2n;
            p.rho0 = rho_labs / l_abs;
            p
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dsp_and_exact_dark_branch_differ_at_third_order(p in slow_light_params(), frac in 0.01..0.2f64) {
        let co = dsp_coefficients(&p).unwrap();
        let k = frac * co.k_max;
        let exact = dispersion_exact(&p, k).unwrap().dark().re;
        let approx = dispersion_dsp(&p, k).unwrap().re;
        // the k³ term is bounded by the k² term times k/k_max
        let bound = 2.0 * (co.quadratic * k * k).abs() * frac + 1e-9 * (co.linear * k).abs();
        prop_assert!((exact - approx).abs() <= bound, "diff {} bound {}", exact - approx, bound);
    }

    #[test]
    fn derived_ratios_are_scale_invariant(p in slow_light_params(), lambda in 0.1..10.0f64) {
        let d = derive_polariton(&p).unwrap();
        let mut q = p;
        q.g_sqrt_n *= lambda;
        q.omega_c *= lambda;
        q.gamma *= lambda;
        q.delta_1 *= lambda;
        q.delta_2 *= lambda;
        // lengths scale as 1/λ, so C₆ (energy × length⁶) goes as λ⁻⁵
        q.c6 *= lambda.powi(-5);
        q.rho0 *= lambda;
        q.q_p *= lambda;
        let e = derive_polariton(&q).unwrap();
        prop_assert!(rel(e.tan2_theta, d.tan2_theta) < 1e-12);
        prop_assert!(rel(e.od_c, d.od_c) < 1e-12);
        prop_assert!(rel(e.l_abs * lambda, d.l_abs) < 1e-12);
        prop_assert!(rel(q.rho0 * e.l_abs, p.rho0 * d.l_abs) < 1e-12);
        prop_assert!(rel(e.vg, d.vg) < 1e-12);
    }

    #[test]
    fn mass_sign_follows_detuning(p in slow_light_params()) {
        let d = derive_polariton(&p).unwrap();
        let m = d.m_par.unwrap();
        prop_assert_eq!(m > 0.0, p.delta_1 > 0.0);
        prop_assert!(rel(d.mass_par_abs().unwrap(), m.abs()) < 1e-15);
    }

    #[test]
    fn blockade_radius_inverts_detuning_condition(p in slow_light_params()) {
        let d = derive_polariton(&p).unwrap();
        let g2n = p.g_sqrt_n * p.g_sqrt_n;
        // C₆/a_c⁶ = g²n/|Δ| in SI
        let lhs = p.c6 / d.a_c.powi(6);
        prop_assert!(rel(lhs, g2n / p.delta_1.abs()) < 1e-12);
    }

    #[test]
    fn experimental_theta_matches_closed_form(p in slow_light_params()) {
        let d = derive_polariton(&p).unwrap();
        let m = d.mass_par_abs().unwrap();
        let direct = theta(p.rho0, m, p.c6);
        prop_assert!(rel(theta_experimental(&d, &p), direct) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn closed_form_k_decreases_in_each_argument(
        rho in 0.01..10.0f64, m in 0.01..10.0f64, c6 in 1e-3..10.0f64, bump in 1e-3..1.0f64
    ) {
        let k = k_closed_form(rho, m, c6).unwrap().k_param;
        let s = 1.0 + bump;
        prop_assert!(k_closed_form(rho * s, m, c6).unwrap().k_param < k);
        prop_assert!(k_closed_form(rho, m * s, c6).unwrap().k_param < k);
        prop_assert!(k_closed_form(rho, m, c6 * s).unwrap().k_param < k);
    }

    #[test]
    fn sound_velocity_times_k_is_galilean(rho in 1e-3..1e3f64, m in 1e-3..1e3f64, c6 in 0.0..1e3f64) {
        let lp = k_closed_form(rho, m, c6).unwrap();
        let expect = std::f64::consts::PI * rho / m;
        prop_assert!(rel(lp.u_sound * lp.k_param, expect) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn protocol_identities(k0 in 0.05..0.99f64, l0 in 1.0..1e3f64) {
        let p = slow_light_reference();
        let d = derive_polariton(&p).unwrap();
        let q = protocol_with_l0(k0, l0, &d, &p).unwrap();
        prop_assert!((q.f(0.0) - 1.0).abs() < 1e-14);
        let mv0 = q.mass(0.0) * q.group_velocity(0.0);
        let h = 1e-3;
        for i in 0..=2000 {
            let s = 0.05 * i as f64;
            let t = s * q.tau;
            prop_assert!(rel(q.f_alt(t), q.f(t)) < 1e-12);
            prop_assert!(rel(q.mass(t), q.m0 * q.f(t)) < 1e-12);
            prop_assert!(rel(q.mass(t) * q.group_velocity(t), mv0) < 1e-12);
            let drift = (q.nonadiabatic_rate(t + h * q.tau) - q.nonadiabatic_rate(t)) / h;
            prop_assert!(drift.abs() < 1e-9, "s={} drift {}", s, drift);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn ode_preserves_symplectic_norm(k0 in 0.1..0.95f64, l0 in 2.0..50.0f64, p in 0.01..3.0f64) {
        let params = slow_light_reference();
        let d = derive_polariton(&params).unwrap();
        let q = protocol_with_l0(k0, l0, &d, &params).unwrap();
        let st = evolve_bogoliubov(&q, &[p], 100.0 * q.tau, Method::Ode).unwrap();
        prop_assert!((st.symplectic_norm(0) - 1.0).abs() < 1e-8);
    }
}

fn small_chain(sites: usize, n: usize, c6: f64, a: f64, ring: bool, n_max: usize) -> LatticeModel {
    let boundary = if ring { Boundary::Periodic } else { Boundary::Open };
    let dx = 0.5;
    let m = build_lattice(1.0, c6, a, n as f64 / (sites as f64 * dx), sites, dx, boundary, n_max).unwrap();
    m.with_particles(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dmrg_is_variational(sites in 6usize..9, n in 2usize..5, c6 in 0.05..2.0f64, a in 0.3..0.8f64, ring in any::<bool>()) {
        let m = small_chain(sites, n, c6, a, ring, 2);
        let ed = ground_state_ed(&m).unwrap();
        let dm = ground_state_dmrg(&m, 48, 12, 1e-12).unwrap();
        prop_assert!(dm.energy >= ed.energy - 1e-9 * ed.energy.abs().max(1.0));
        prop_assert!((dm.energy - ed.energy).abs() < 1e-8 * ed.energy.abs().max(1.0));
    }

    #[test]
    fn ring_density_is_uniform_and_g2_mirrors(sites in 6usize..11, n in 2usize..5, c6 in 0.05..2.0f64, a in 0.3..0.8f64) {
        let m = small_chain(sites, n, c6, a, true, 2);
        let r = ground_state_ed(&m).unwrap();
        let nu = n as f64 / sites as f64;
        for x in &r.density {
            prop_assert!((x - nu).abs() < 1e-6);
        }
        let g = g2_correlation(&r);
        for d in 1..sites {
            prop_assert_eq!(g.amplitude[d], g.amplitude[sites - d]);
        }
    }
}
