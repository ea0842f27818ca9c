//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Outcomes are reported, not asserted; the process exits non-zero only if
//! a computation errors out, or on any FAIL when RYDCRYST_ACCEPTANCE_STRICT
//! is set.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rydcryst_core::curve::log_grid;
use rydcryst_core::lattice::{
    build_contact_lattice, build_lattice, compressibility_k, g2_correlation,
    ground_state_dmrg, ground_state_ed, lieb_liniger_reference, oscillation_envelope, tonks_extrapolation,
    Boundary, DmrgOptions, GroundStateResult, LatticeModel, LatticeSolver,
};
use rydcryst_core::luttinger::{k_from_theta, od_c_for_theta, MassAxis};
use rydcryst_core::polariton::derive_polariton;
use rydcryst_core::presets::slow_light_reference;
use rydcryst_core::quench::bogoliubov::analytic_mode;
use rydcryst_core::quench::feasibility::gamma_theta_integral;
use rydcryst_core::quench::{
    analyze_zero_t, evolve_bogoliubov, instantaneous_k, min_switch_time, protocol_with_l0, thermal_analysis,
    Method, QuenchCorrelation,
};
use rydcryst_core::Result;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    (x / target - 1.0).abs() <= rel
}

fn criterion_1() -> Result<Outcome> {
    let k = k_from_theta(1.5);
    let p = slow_light_reference();
    let d = derive_polariton(&p)?;
    let par = od_c_for_theta(1.5, &d, &p, MassAxis::Longitudinal)?;
    let perp = od_c_for_theta(1.5, &d, &p, MassAxis::Transverse)?;
    let pass = k == 0.5 && within(par, 20.0, 0.1) && within(perp, 5.0, 0.1);
    outcome(pass, format!("K(Θ=3/2) = {k}, OD_c∥ = {par:.2}, OD_c⊥ = {perp:.2}"))
}

/// Hard-core bosons without interaction share their density correlations
/// with free fermions: ⟨n_i n_j⟩ = ρ_iρ_j − G_ij² on an open chain.
fn free_fermion_oracle(l: usize, n: usize) -> (Vec<f64>, Vec<f64>) {
    let phi = |k: usize, i: usize| (2.0 / (l as f64 + 1.0)).sqrt() * (PI * k as f64 * (i + 1) as f64 / (l as f64 + 1.0)).sin();
    let g: Vec<f64> = (0..l * l)
        .map(|ij| (1..=n).map(|k| phi(k, ij / l) * phi(k, ij % l)).sum())
        .collect();
    let rho: Vec<f64> = (0..l).map(|i| g[i * l + i]).collect();
    let nn = (0..l * l).map(|ij| rho[ij / l] * rho[ij % l] - g[ij] * g[ij]).collect();
    (rho, nn)
}

fn max_g2_gap(res: &GroundStateResult, rho: Vec<f64>, nn: Vec<f64>) -> f64 {
    let mut oracle = res.clone();
    oracle.density = rho;
    oracle.density_density = nn;
    let a = g2_correlation(res);
    let b = g2_correlation(&oracle);
    a.amplitude.iter().zip(&b.amplitude).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn criterion_2() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    let mut max_dim = 0;
    let instances = 24;
    for _ in 0..instances {
        let sites = rng.random_range(6..=12);
        let n = rng.random_range(2..=sites / 2);
        let n_max = rng.random_range(1..=3);
        let dx = 0.5;
        let boundary = if rng.random_bool(0.5) { Boundary::Open } else { Boundary::Periodic };
        let c6 = rng.random_range(0.05..3.0);
        let a = rng.random_range(0.3..1.0);
        let m = build_lattice(1.0, c6, a, n as f64 / (sites as f64 * dx), sites, dx, boundary, n_max)?
            .with_particles(n)?;
        let ed = ground_state_ed(&m)?;
        let dm = ground_state_dmrg(&m, 64, 16, 1e-12)?;
        max_dim = max_dim.max(rydcryst_core::lattice::ed::sector_dimension(sites, n, n_max));
        worst = worst.max((dm.energy - ed.energy).abs() / m.hop);
    }

    let free = |l: usize, n: usize| -> Result<LatticeModel> {
        LatticeModel::from_parts(l, 1.0, 2.0, vec![0.0], Boundary::Open, 1, n)
    };
    let (l_ed, n_ed) = (14, 5);
    let ed = ground_state_ed(&free(l_ed, n_ed)?)?;
    let (rho, nn) = free_fermion_oracle(l_ed, n_ed);
    let gap_ed = max_g2_gap(&ed, rho, nn);
    let (l_dm, n_dm) = (24, 7);
    let dm = ground_state_dmrg(&free(l_dm, n_dm)?, 64, 20, 1e-13)?;
    let (rho, nn) = free_fermion_oracle(l_dm, n_dm);
    let gap_dm = max_g2_gap(&dm, rho, nn);

    let pass = worst < 1e-8 && gap_ed < 1e-8 && gap_dm < 1e-8 && max_dim <= 200_000;
    outcome(
        pass,
        format!(
            "{instances} instances (dim ≤ {max_dim}): max |E_DMRG − E_ED|/t = {worst:.1e}; \
             Wick g² gap ED {gap_ed:.1e}, DMRG {gap_dm:.1e}"
        ),
    )
}

const FIG2_THETAS: [f64; 3] = [0.1, 1.0, 30.0];
const FIG2_CUTOFFS: [f64; 2] = [0.0, 0.2];

fn reference_grid(theta: f64, a_cut: f64, boundary: Boundary) -> Result<LatticeModel> {
    let c6 = theta * 180.0 / PI.powi(3);
    build_lattice(1.0, c6, a_cut, 1.0, 100, 0.1, boundary, 3)
}

struct Fig2 {
    k: Vec<Vec<f64>>,
    /// Lattice K at the strongest Θ with the soft core.
    strong_k: f64,
}

fn fig2_sweep() -> Result<Fig2> {
    let solver = LatticeSolver::Dmrg(DmrgOptions::new(32, 16, 1e-4));
    let mut k = vec![vec![0.0; FIG2_THETAS.len()]; FIG2_CUTOFFS.len()];
    let mut strong = None;
    for (ia, &a) in FIG2_CUTOFFS.iter().enumerate() {
        for (it, &theta) in FIG2_THETAS.iter().enumerate() {
            let t0 = Instant::now();
            let est = compressibility_k(&reference_grid(theta, a, Boundary::Open)?, &solver)?;
            println!(
                "    Θ = {theta:>4}, ρ₀a = {a}: K = {:.4} (closed form {:.4}), converged = {}, {:.0} s",
                est.k,
                k_from_theta(theta),
                est.converged,
                t0.elapsed().as_secs_f64()
            );
            k[ia][it] = est.k;
            if a > 0.0 && it + 1 == FIG2_THETAS.len() {
                strong = Some(est.k);
            }
        }
    }
    Ok(Fig2 {
        k,
        strong_k: strong.expect("soft-core strong point"),
    })
}

fn criterion_3(f: &Fig2) -> Result<Outcome> {
    let mut worst_ratio: f64 = 1.0;
    let mut worst_cut: f64 = 0.0;
    for (it, &theta) in FIG2_THETAS.iter().enumerate() {
        let eq5 = k_from_theta(theta);
        for row in &f.k {
            let r = (row[it] / eq5).max(eq5 / row[it]);
            worst_ratio = worst_ratio.max(r);
        }
        let (k0, k1) = (f.k[0][it], f.k[1][it]);
        if k0.max(k1) < 0.4 {
            worst_cut = worst_cut.max((k0 - k1).abs() / k0);
        }
    }
    let pass = worst_ratio <= 2.0 && worst_cut < 0.1;
    outcome(
        pass,
        format!(
            "Θ ∈ {FIG2_THETAS:?}: worst K ratio to closed form {worst_ratio:.2} (band 2); \
             cutoff spread {:.1}% (limit 10%)",
            100.0 * worst_cut
        ),
    )
}

/// g² on the periodic reference grid, where translation invariance makes the
/// pair correlation well defined; open chains pin the crystal.
fn criterion_4(f: &Fig2) -> Result<Outcome> {
    let theta = FIG2_THETAS[FIG2_THETAS.len() - 1];
    let k = f.strong_k;
    let gs = ground_state_dmrg(&reference_grid(theta, 0.2, Boundary::Periodic)?, 32, 16, 1e-4)?;
    let g2 = g2_correlation(&gs);
    let g0 = g2.amplitude[0];
    // plateau: contiguous run from z = 0 with g² < 0.01
    let plateau = g2.z.iter().zip(&g2.amplitude).take_while(|(_, g)| **g < 0.01).last().map_or(0.0, |(z, _)| *z);
    let (_, _, slope) = oscillation_envelope(&g2, 1.0, 5.0);
    let slope = slope.unwrap_or(f64::NAN);
    let pass = g0 < 0.01 && plateau >= 0.2 && within(-slope, 2.0 * k, 0.2);
    outcome(
        pass,
        format!(
            "Θ = {theta}, ρ₀a = 0.2, periodic: g²(0) = {g0:.1e}, plateau to ρ₀z = {plateau:.1}, \
             envelope slope {slope:.3} vs −2K_lattice = {:.3} (closed form {:.3}), converged = {}",
            -2.0 * k,
            -2.0 * k_from_theta(theta),
            gs.converged
        ),
    )
}

fn criterion_5() -> Result<Outcome> {
    let p = slow_light_reference();
    let d = derive_polariton(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut f0, mut mf, mut mv, mut drift): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..50 {
        let k0 = rng.random_range(0.05..0.99);
        let q = protocol_with_l0(k0, 100.0, &d, &p)?;
        f0 = f0.max((q.f(0.0) - 1.0).abs());
        let mv0 = q.mass(0.0) * q.group_velocity(0.0);
        let h = 1e-3;
        for i in 0..=4000 {
            let t = 0.025 * i as f64 * q.tau;
            mf = mf.max((q.mass(t) / (q.m0 * q.f(t)) - 1.0).abs());
            mv = mv.max((q.mass(t) * q.group_velocity(t) / mv0 - 1.0).abs());
            let dr = (q.nonadiabatic_rate(t + h * q.tau) - q.nonadiabatic_rate(t)) / h;
            drift = drift.max(dr.abs());
        }
    }
    let pass = f0 < 1e-14 && mf < 1e-12 && mv < 1e-12 && drift < 1e-9;
    outcome(
        pass,
        format!("50 K₀: |f(0) − 1| {f0:.1e}, m/(m₀f) {mf:.1e}, m·v_g {mv:.1e}, d/dt(K̇/uK) {drift:.1e}"),
    )
}

fn criterion_6() -> Result<Outcome> {
    let p = slow_light_reference();
    let d = derive_polariton(&p)?;
    let q = protocol_with_l0(0.8, 10.0, &d, &p)?;
    let grid = log_grid(0.01, 10.0, 12);
    let t = 100.0 * q.tau;
    let ode = evolve_bogoliubov(&q, &grid, t, Method::Ode)?;
    let ana = evolve_bogoliubov(&q, &grid, t, Method::Analytic)?;
    let mut gap: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for i in 0..grid.len() {
        gap = gap.max((ode.u[i] - ana.u[i]).norm()).max((ode.v[i] - ana.v[i]).norm());
        norm = norm.max((ode.symplectic_norm(i) - 1.0).abs());
    }
    let k_t = instantaneous_k(&q, t);
    let (u, v) = analytic_mode(0.8, k_t, q.l0() * q.rho0, 1.0);
    let analytic_norm = (u.norm_sqr() - v.norm_sqr() - 1.0).abs();
    let pass = gap < 1e-6 && norm < 1e-8;
    outcome(
        pass,
        format!(
            "{} momenta to t = 100τ: max |ODE − analytic| {gap:.1e}, symplectic drift {norm:.1e} \
             (analytic {analytic_norm:.1e})",
            grid.len()
        ),
    )
}

fn criterion_7() -> Result<(Outcome, Outcome)> {
    let setup = QuenchCorrelation::new(0.8, 5e-5, 100.0, 1.0)?;
    let zt = analyze_zero_t(&setup, 100.0, 40)?;
    let knee = zt.knee.unwrap_or(f64::NAN);
    let mid = zt.slope_midpoint.unwrap_or(f64::NAN);
    let a = Outcome {
        pass: within(knee, 100.0, 0.3),
        detail: format!("zero-T slope crossover at ρ₀z = {knee:.0} (slope midpoint {mid:.0}); target 100 ± 30%"),
    };
    let th = thermal_analysis(&setup.with_thermal_length(10.0)?)?;
    let lc = th.l_corr_fit.unwrap_or(f64::NAN);
    let b = Outcome {
        pass: within(lc, 40.0, 0.3),
        detail: format!(
            "thermal L_corrρ₀ = {lc:.1} (closed form {:.1}); target 40 ± 30%",
            th.l_corr_closed_form
        ),
    };
    Ok((a, b))
}

fn criterion_8() -> Result<Outcome> {
    let c = 2.997_924_58e8;
    let l_abs = 5e-6;
    let vg0 = 1e-5 * c;
    let s = min_switch_time(0.99, l_abs, c, vg0, 1.0)?;
    let slow = gamma_theta_integral(0.99, 10.0 * s.tau, l_abs, c, vg0)?;
    let pass = within(s.tau, 0.16e-9, 0.05) && slow < 0.1;
    outcome(
        pass,
        format!("τ_min = {:.4} ns (target 0.16 ± 5%), ∫γ_θ dt at 10τ = {slow:.2e}", s.tau * 1e9),
    )
}

fn criterion_9() -> Result<Outcome> {
    let t = tonks_extrapolation(1e3)?;
    let e_err = (t.e / (PI * PI / 3.0) - 1.0).abs();
    let k_err = (t.k - 1.0).abs();
    let ll = lieb_liniger_reference(10.0)?;
    let lattice = build_contact_lattice(1.0, 10.0, 1.0, 40, 0.1, Boundary::Periodic, 3)?;
    let kl = compressibility_k(&lattice, &LatticeSolver::Ed)?;
    let gap = (kl.k / ll.k - 1.0).abs();
    let pass = e_err < 1e-3 && k_err < 1e-2 && gap < 0.05;
    outcome(
        pass,
        format!(
            "Tonks e error {:.1e}, K error {k_err:.1e}; γ = 10: K_BA = {:.4}, K_lattice = {:.4} ({:.2}%)",
            e_err,
            ll.k,
            kl.k,
            100.0 * gap
        ),
    )
}

fn report(id: &str, r: Result<Outcome>, failures: &mut usize, errors: &mut usize, t0: Instant) {
    let secs = t0.elapsed().as_secs_f64();
    match r {
        Ok(o) => {
            if !o.pass {
                *failures += 1;
            }
            println!("{} criterion {id}: {} [{secs:.1} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        }
        Err(e) => {
            *errors += 1;
            println!("FAIL criterion {id}: error: {e} [{secs:.1} s]");
        }
    }
}

fn main() {
    let (mut failures, mut errors) = (0, 0);
    let t = Instant::now();
    report("1", criterion_1(), &mut failures, &mut errors, t);
    let t = Instant::now();
    report("2", criterion_2(), &mut failures, &mut errors, t);

    let t = Instant::now();
    match fig2_sweep() {
        Ok(f) => {
            report("3", criterion_3(&f), &mut failures, &mut errors, t);
            report("4", criterion_4(&f), &mut failures, &mut errors, t);
        }
        Err(e) => {
            errors += 2;
            println!("FAIL criterion 3: error: {e}");
            println!("FAIL criterion 4: error: {e}");
        }
    }

    let t = Instant::now();
    report("5", criterion_5(), &mut failures, &mut errors, t);
    let t = Instant::now();
    report("6", criterion_6(), &mut failures, &mut errors, t);
    let t = Instant::now();
    match criterion_7() {
        Ok((a, b)) => {
            report("7a", Ok(a), &mut failures, &mut errors, t);
            report("7b", Ok(b), &mut failures, &mut errors, t);
        }
        Err(e) => report("7", Err(e), &mut failures, &mut errors, t),
    }
    let t = Instant::now();
    report("8", criterion_8(), &mut failures, &mut errors, t);
    let t = Instant::now();
    report("9", criterion_9(), &mut failures, &mut errors, t);

    println!("acceptance: {failures} failed, {errors} errored");
    let strict = std::env::var_os("RYDCRYST_ACCEPTANCE_STRICT").is_some();
    if errors > 0 || (strict && failures > 0) {
        std::process::exit(1);
    }
}
