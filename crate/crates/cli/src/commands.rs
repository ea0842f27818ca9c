//! Subcommand runners. Every number written here comes from a core call;
//! this layer only selects, converts units through core helpers and formats.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rydcryst_core::quench::feasibility_report;
use rydcryst_core::reports::{kparam_table, lattice_point, params_report, quench_report, spacing_audit, LatticePoint};
use rydcryst_core::{AuditOptions, AuditReport, CorrelationCurve, RunConfig};
use serde_json::{json, Value};

use crate::args::CommandKind;
use crate::error::CliError;
use crate::output::{num, opt, Writer};

pub struct RunOptions {
    pub si: bool,
    pub seed: u64,
    pub jobs: usize,
    pub quiet: bool,
}

/// What the caller needs for the exit status.
pub struct Outcome {
    pub audit_passed: bool,
}

fn audit_options(cfg: &RunConfig) -> AuditOptions {
    AuditOptions {
        margin_factor: cfg.feasibility.audit_margin,
    }
}

fn audit(cfg: &RunConfig) -> AuditReport {
    spacing_audit(&cfg.params, audit_options(cfg))
}

fn units_label(si: bool) -> &'static str {
    if si {
        "si"
    } else {
        "natural"
    }
}

fn inputs_block(cfg: &RunConfig) -> Value {
    json!({
        "si": cfg.params,
        "natural": cfg.params.natural(),
        "natural_units": cfg.params.units(),
    })
}

fn say(opts: &RunOptions, line: String) {
    if !opts.quiet {
        println!("{line}");
    }
}

pub fn run(kind: CommandKind, cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    match kind {
        CommandKind::Params => params(cfg, w, opts),
        CommandKind::Kparam => kparam(cfg, w, opts),
        CommandKind::Lattice => lattice(cfg, w, opts),
        CommandKind::Quench => quench(cfg, w, opts),
        CommandKind::Feasibility => feasibility(cfg, w, opts),
    }
}

fn audit_lines(opts: &RunOptions, a: &AuditReport) {
    for c in &a.conditions {
        let state = match (c.applicable, c.passed) {
            (false, _) => "n/a",
            (true, true) => "ok",
            (true, false) => "FAILED",
        };
        say(opts, format!("  audit {:<22} ratio {:<12.4e} threshold {:<8} {state}", c.name, c.ratio, c.threshold));
    }
}

fn params(cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    let r = params_report(&cfg.params, audit_options(cfg))?;
    let (values, echo) = if opts.si {
        (&r.derived_si, &r.derived_natural)
    } else {
        (&r.derived_natural, &r.derived_si)
    };
    w.json(
        "params.json",
        "params/1",
        json!({
            "inputs": inputs_block(cfg),
            "derived": values,
            "echo": { "units": units_label(!opts.si), "derived": echo },
            "luttinger_si": r.luttinger,
            "theta_par": r.theta_par,
            "theta_perp": r.theta_perp,
            "audit": r.audit,
        }),
    )?;
    say(opts, format!("tan²θ = {:.6e}, OD_c = {:.4}, OD = {:.4}", values.tan2_theta, values.od_c, values.od));
    say(opts, format!("v_g = {:.6e}, L_abs = {:.6e}, a_c = {:.6e} ({} units)", values.vg, values.l_abs, values.a_c, units_label(opts.si)));
    if let Some(l) = r.luttinger {
        say(opts, format!("Θ∥ = {:.6}, Θ⊥ = {:.6}, K = {:.6}", r.theta_par, r.theta_perp, l.k_param));
    }
    audit_lines(opts, &r.audit);
    Ok(Outcome {
        audit_passed: r.audit.passed,
    })
}

fn kparam(cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    let rows = kparam_table(&cfg.params, &cfg.sweep.thetas)?;
    let a = audit(cfg);
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.theta),
                num(r.k),
                r.regime.as_str().to_string(),
                num(r.density_exponent),
                num(r.first_order_exponent),
                num(r.od_c_par),
                num(r.od_c_perp),
            ]
        })
        .collect();
    w.csv(
        "kparam.csv",
        "kparam/1",
        &[],
        &["theta", "k", "regime", "density_exponent", "first_order_exponent", "od_c_par_required", "od_c_perp_required"],
        &csv_rows,
    )?;
    w.json(
        "kparam.json",
        "kparam/1",
        json!({ "inputs": inputs_block(cfg), "estimator": "closed_form", "rows": rows, "audit": a }),
    )?;
    for r in &rows {
        say(
            opts,
            format!(
                "Θ = {}: K = {} ({}), exponents 2K = {:.4}, 1/2K = {:.4}, OD_c∥ required = {:.2}, OD_c⊥ required = {:.2}",
                r.theta,
                r.k,
                r.regime.as_str(),
                r.density_exponent,
                r.first_order_exponent,
                r.od_c_par,
                r.od_c_perp
            ),
        );
    }
    Ok(Outcome { audit_passed: a.passed })
}

/// Evaluates `f` on every item with up to `jobs` threads, keeping order.
fn parallel_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..jobs.clamp(1, items.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().expect("no panics while holding the lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every slot filled"))
        .collect()
}

fn curve_rows(c: &CorrelationCurve) -> Vec<Vec<String>> {
    let om = c.one_minus();
    (0..c.len()).map(|i| vec![num(c.z[i]), num(c.amplitude[i]), num(om[i])]).collect()
}

fn lattice(cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    let lc = &cfg.lattice;
    let results = parallel_map(&lc.thetas, opts.jobs, |&theta| lattice_point(lc, theta, opts.seed));
    let points: Vec<LatticePoint> = results.into_iter().collect::<Result<_, _>>()?;

    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                num(p.theta),
                num(p.c6),
                num(p.a_cut),
                num(p.estimate.k),
                num(p.k_closed_form),
                p.regime.as_str().to_string(),
                p.estimate.divergent.to_string(),
                p.estimate.converged.to_string(),
                opt(p.envelope_slope),
            ]
        })
        .collect();
    let notes = vec![
        ("n_sites".to_string(), lc.n_sites.to_string()),
        ("dx_rho0".to_string(), num(lc.dx)),
        ("boundary".to_string(), format!("{:?}", lc.boundary).to_lowercase()),
        ("solver".to_string(), format!("{:?}", lc.solver).to_lowercase()),
        ("chi".to_string(), lc.chi.to_string()),
    ];
    w.csv(
        "lattice_k.csv",
        "lattice_k/1",
        &notes,
        &["theta", "c6", "a_cut_rho0", "k", "k_closed_form", "regime", "divergent", "converged", "envelope_slope"],
        &rows,
    )?;
    for (i, p) in points.iter().enumerate() {
        let notes = vec![
            ("theta".to_string(), num(p.theta)),
            ("k".to_string(), num(p.estimate.k)),
            ("n_particles".to_string(), p.estimate.n_particles.to_string()),
        ];
        w.csv(
            &format!("lattice_g2_{i:02}.csv"),
            "lattice_g2/1",
            &notes,
            &["z_rho0", "g2", "one_minus_g2"],
            &curve_rows(&p.g2),
        )?;
    }
    let log: Vec<Value> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "curve_file": format!("lattice_g2_{i:02}.csv"),
                "theta": p.theta,
                "c6": p.c6,
                "a_cut_rho0": p.a_cut,
                "estimate": p.estimate,
                "k_closed_form": p.k_closed_form,
                "regime": p.regime,
                "envelope_slope": p.envelope_slope,
                "runs": p.runs,
            })
        })
        .collect();
    w.json("lattice.json", "lattice/1", json!({ "lattice": lc, "points": log }))?;
    for p in &points {
        say(
            opts,
            format!(
                "Θ = {}: K = {:.4} (closed form {:.4}), {}, converged = {}",
                p.theta,
                p.estimate.k,
                p.k_closed_form,
                p.regime.as_str(),
                p.estimate.converged
            ),
        );
    }
    Ok(Outcome { audit_passed: true })
}

fn envelope_rows(c: &CorrelationCurve) -> Vec<Vec<String>> {
    (0..c.len())
        .map(|i| vec![num(c.z[i]), num(c.amplitude[i]), c.tags[i].clone()])
        .collect()
}

fn quench(cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    let r = quench_report(&cfg.params, &cfg.quench)?;
    let a = audit(cfg);
    let u = cfg.params.units();
    let c = &r.correlation;
    let mut notes = vec![
        ("k0".to_string(), num(c.k0)),
        ("k_t".to_string(), num(c.k_t)),
        ("l0_rho0".to_string(), num(c.l0)),
        ("alpha_rho0".to_string(), num(c.alpha)),
    ];
    let mut zero_notes = notes.clone();
    zero_notes.push(("slope_crossover_rho0_z".to_string(), opt(r.zero_t_knee)));
    w.csv("quench_zero_t.csv", "quench_envelope/1", &zero_notes, &["rho0_z", "envelope", "regime_tag"], &envelope_rows(&r.zero_t))?;
    if let (Some(th), Some(fit)) = (&r.thermal, &r.thermal_fit) {
        notes.push(("l_t_rho0".to_string(), num(fit.l_t0)));
        notes.push(("l_corr_rho0".to_string(), opt(fit.l_corr_fit)));
        notes.push(("l_corr_closed_form_rho0".to_string(), num(fit.l_corr_closed_form)));
        w.csv("quench_thermal.csv", "quench_envelope/1", &notes, &["rho0_z", "envelope", "regime_tag"], &envelope_rows(th))?;
    }
    let time = |t: f64| if opts.si { t } else { u.time_to_natural(t) };
    let samples: Vec<Vec<String>> = r
        .samples
        .iter()
        .map(|s| vec![num(s.s), num(time(s.t)), num(s.omega_ratio), num(s.k), num(s.f)])
        .collect();
    w.csv(
        "quench_protocol.csv",
        "quench_protocol/1",
        &[("tau".to_string(), num(time(r.protocol.tau)))],
        &["t_over_tau", "t", "omega_ratio", "k", "f"],
        &samples,
    )?;
    w.json(
        "quench.json",
        "quench/1",
        json!({
            "inputs": inputs_block(cfg),
            "quench": cfg.quench,
            "protocol_si": r.protocol,
            "tau": time(r.protocol.tau),
            "t_final": time(r.t_final),
            "correlation": r.correlation,
            "zero_t_slope_crossover_rho0": r.zero_t_knee,
            "zero_t_slope_midpoint_rho0": r.zero_t_slope_midpoint,
            "thermal_fit": r.thermal_fit,
            "temperature": r.temperature.map(|t| if opts.si { t } else { u.rate_to_natural(t) }),
            "audit": a,
        }),
    )?;
    say(
        opts,
        format!(
            "zero-T envelope: K0 = {:.4}, K = {:.4e}, l0ρ₀ = {:.2}, slope crossover at ρ₀z = {}",
            c.k0,
            c.k_t,
            c.l0,
            r.zero_t_knee.map_or("n/a".into(), |z| format!("{z:.1}"))
        ),
    );
    if let Some(fit) = &r.thermal_fit {
        say(
            opts,
            format!(
                "thermal envelope: L_Tρ₀ = {:.2}, L_corrρ₀ = {} (closed form {:.1})",
                fit.l_t0,
                fit.l_corr_fit.map_or("n/a".into(), |z| format!("{z:.1}")),
                fit.l_corr_closed_form
            ),
        );
    }
    Ok(Outcome { audit_passed: a.passed })
}

fn feasibility(cfg: &RunConfig, w: &mut Writer, opts: &RunOptions) -> Result<Outcome, CliError> {
    let si = feasibility_report(&cfg.params, cfg.feasibility.margin, audit_options(cfg))?;
    let nat = si.in_natural_units(&cfg.params.units());
    let (values, echo) = if opts.si { (&si, &nat) } else { (&nat, &si) };
    w.json(
        "feasibility.json",
        "feasibility/1",
        json!({
            "inputs": inputs_block(cfg),
            "report": values,
            "echo": { "units": units_label(!opts.si), "report": echo },
        }),
    )?;
    let go = if values.crystal_feasible { "GO" } else { "NO-GO" };
    say(opts, format!("{go}: K0 = {:.4} (Θ0 = {:.4})", values.k0, values.theta0));
    say(
        opts,
        format!(
            "OD_c = {:.3}, required for Θ = 3/2: OD_c∥ = {:.2}, OD_c⊥ = {:.2}",
            values.od_c, values.od_c_required_par, values.od_c_required_perp
        ),
    );
    say(
        opts,
        format!(
            "τ_min = {:.4e}, τ_stop = {:.4e}, T_max = {:.4e}, l0/L = {:.4e}, L_T0 = {:.4e} ({} units)",
            values.switch.tau,
            values.tau_stop,
            values.t_max,
            values.l0_over_len,
            values.l_t0,
            units_label(opts.si)
        ),
    );
    audit_lines(opts, &values.audit);
    Ok(Outcome {
        audit_passed: values.audit.passed,
    })
}
