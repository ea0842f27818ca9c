//! Dark-state polariton parameters under off-resonant Rydberg EIT.
//!
//! All inputs are SI (angular frequencies in rad/s, lengths in m). The
//! computations run in [`NaturalUnits`] and are converted back on output.
//! The one-photon detuning is stored signed; every length and mass
//! magnitude uses |Δ|, while the sign is kept for the dispersion (positive
//! Δ gives a positive longitudinal mass).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::units::NaturalUnits;

/// Raw physical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentalParams {
    /// Collective coupling g√n (rad/s).
    pub g_sqrt_n: f64,
    /// Half-linewidth γ of the intermediate state (rad/s).
    pub gamma: f64,
    /// One-photon detuning Δ (rad/s), signed.
    pub delta_1: f64,
    /// Two-photon detuning δ (rad/s).
    pub delta_2: f64,
    /// Control Rabi frequency Ω (rad/s).
    pub omega_c: f64,
    /// Vacuum speed of light (m/s).
    pub c: f64,
    /// Probe wavenumber (1/m).
    pub q_p: f64,
    /// van-der-Waals coefficient C₆ (rad/s·m⁶).
    pub c6: f64,
    /// Short-distance regularization a of the interaction (m).
    pub a_cut: f64,
    /// 1D excitation density ρ₀ (1/m).
    pub rho0: f64,
    /// Medium length L (m).
    pub medium_len: f64,
    /// Initial polariton temperature (rad/s, k_B = ħ = 1).
    pub temperature: f64,
}

impl ExperimentalParams {
    pub fn validate(&self) -> Result<()> {
        require_positive("g_sqrt_n", self.g_sqrt_n)?;
        require_positive("gamma", self.gamma)?;
        require_positive("omega_c", self.omega_c)?;
        require_positive("c", self.c)?;
        require_positive("q_p", self.q_p)?;
        require_positive("rho0", self.rho0)?;
        require_positive("medium_len", self.medium_len)?;
        require_non_negative("c6", self.c6)?;
        require_non_negative("a_cut", self.a_cut)?;
        require_non_negative("temperature", self.temperature)?;
        if !self.delta_1.is_finite() {
            return Err(Error::InvalidParameter {
                field: "delta_1",
                reason: "must be finite".into(),
            });
        }
        if !self.delta_2.is_finite() {
            return Err(Error::InvalidParameter {
                field: "delta_2",
                reason: "must be finite".into(),
            });
        }
        Ok(())
    }

    pub fn units(&self) -> NaturalUnits {
        NaturalUnits::new(self.gamma, self.g_sqrt_n, self.c)
    }

    pub fn natural(&self) -> NaturalParams {
        let u = self.units();
        NaturalParams {
            g_sqrt_n: u.rate_to_natural(self.g_sqrt_n),
            delta_1: u.rate_to_natural(self.delta_1),
            delta_2: u.rate_to_natural(self.delta_2),
            omega_c: u.rate_to_natural(self.omega_c),
            c: u.velocity_to_natural(self.c),
            q_p: u.wavenumber_to_natural(self.q_p),
            c6: u.c6_to_natural(self.c6),
            a_cut: u.length_to_natural(self.a_cut),
            rho0: u.wavenumber_to_natural(self.rho0),
            medium_len: u.length_to_natural(self.medium_len),
            temperature: u.rate_to_natural(self.temperature),
        }
    }
}

/// [`ExperimentalParams`] in natural units (γ = 1, L_abs = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalParams {
    pub g_sqrt_n: f64,
    pub delta_1: f64,
    pub delta_2: f64,
    pub omega_c: f64,
    pub c: f64,
    pub q_p: f64,
    pub c6: f64,
    pub a_cut: f64,
    pub rho0: f64,
    pub medium_len: f64,
    pub temperature: f64,
}

impl NaturalParams {
    /// Ω_e² = g²n + Ω², the bright-polariton coupling to the optical coherence.
    pub fn omega_e_sq(&self) -> f64 {
        self.g_sqrt_n * self.g_sqrt_n + self.omega_c * self.omega_c
    }
    pub fn tan2_theta(&self) -> f64 {
        (self.g_sqrt_n / self.omega_c).powi(2)
    }
    pub fn cos2_theta(&self) -> f64 {
        self.omega_c * self.omega_c / self.omega_e_sq()
    }
    pub fn sin2_theta(&self) -> f64 {
        self.g_sqrt_n * self.g_sqrt_n / self.omega_e_sq()
    }
}

/// Degenerate corners where a mass loses meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegenerateLimit {
    /// tan²θ → 0: the polariton is a bare photon.
    FreePhoton,
    /// Δ = 0: the quadratic term vanishes and m∥ is unbounded.
    ResonantUnboundedMass,
}

/// Below this tan²θ the polariton is tagged as a free photon.
pub const FREE_PHOTON_TAN2: f64 = 1e-12;

/// Derived EIT quantities, in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolaritonDerived {
    pub tan2_theta: f64,
    /// Group velocity v_g = c cos²θ (m/s).
    pub vg: f64,
    /// Resonant absorption length L_abs = c γ / g²n (m).
    pub l_abs: f64,
    /// Signed inverse longitudinal mass v_g L_abs Δ/γ (m²/s).
    pub inv_m_par: f64,
    /// Inverse transverse mass v_g / 2q_p (m²/s).
    pub inv_m_perp: f64,
    /// Longitudinal mass (s/m²); `None` when unbounded.
    pub m_par: Option<f64>,
    /// Transverse mass (s/m²).
    pub m_perp: Option<f64>,
    /// Critical radius a_c = (C₆|Δ|/g²n)^{1/6} (m).
    pub a_c: f64,
    /// EIT blockade radius a_B = (C₆γ/Ω²)^{1/6} (m).
    pub a_b: f64,
    /// OD = L / L_abs.
    pub od: f64,
    /// OD_c = a_c / L_abs.
    pub od_c: f64,
    pub limit: Option<DegenerateLimit>,
}

impl PolaritonDerived {
    /// |m∥| for downstream magnitude formulas.
    pub fn mass_par_abs(&self) -> Option<f64> {
        self.m_par.map(f64::abs)
    }

    /// The same quantities with every dimensional field in natural units.
    pub fn in_natural_units(&self, u: &NaturalUnits) -> PolaritonDerived {
        let inv_mass = |x: f64| x / (u.rate * u.length * u.length);
        PolaritonDerived {
            vg: u.velocity_to_natural(self.vg),
            l_abs: u.length_to_natural(self.l_abs),
            inv_m_par: inv_mass(self.inv_m_par),
            inv_m_perp: inv_mass(self.inv_m_perp),
            m_par: self.m_par.map(|m| u.mass_to_natural(m)),
            m_perp: self.m_perp.map(|m| u.mass_to_natural(m)),
            a_c: u.length_to_natural(self.a_c),
            a_b: u.length_to_natural(self.a_b),
            ..*self
        }
    }
}

pub fn derive_polariton(params: &ExperimentalParams) -> Result<PolaritonDerived> {
    params.validate()?;
    let u = params.units();
    let n = params.natural();
    let tan2 = n.tan2_theta();
    let vg = n.c / (1.0 + tan2);
    // L_abs = 1 in natural units.
    let l_abs = 1.0;
    let inv_m_par = vg * l_abs * n.delta_1;
    let inv_m_perp = vg / (2.0 * n.q_p);
    let g2n = n.g_sqrt_n * n.g_sqrt_n;
    let a_c = (n.c6 * n.delta_1.abs() / g2n).powf(1.0 / 6.0);
    let a_b = (n.c6 / (n.omega_c * n.omega_c)).powf(1.0 / 6.0);

    let limit = if tan2 < FREE_PHOTON_TAN2 {
        Some(DegenerateLimit::FreePhoton)
    } else if inv_m_par == 0.0 {
        Some(DegenerateLimit::ResonantUnboundedMass)
    } else {
        None
    };
    let inv_mass_si = |x: f64| x * u.rate * u.length * u.length;
    let m_par = (inv_m_par != 0.0).then(|| u.mass_to_si(1.0 / inv_m_par));
    let m_perp = (inv_m_perp != 0.0).then(|| u.mass_to_si(1.0 / inv_m_perp));
    Ok(PolaritonDerived {
        tan2_theta: tan2,
        vg: u.velocity_to_si(vg),
        l_abs: u.length_to_si(l_abs),
        inv_m_par: inv_mass_si(inv_m_par),
        inv_m_perp: inv_mass_si(inv_m_perp),
        m_par,
        m_perp,
        a_c: u.length_to_si(a_c),
        a_b: u.length_to_si(a_b),
        od: n.medium_len / l_abs,
        od_c: a_c / l_abs,
        limit,
    })
}

/// Eigenfrequencies of the 3×3 probe/spin/optical-coherence problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactDispersion {
    /// Sorted by |Im ω| ascending; index 0 is the dark-state-like branch (rad/s).
    pub eigenvalues: [Complex64; 3],
    pub degenerate: bool,
}

impl ExactDispersion {
    pub fn dark(&self) -> Complex64 {
        self.eigenvalues[0]
    }
}

pub fn dispersion_exact(params: &ExperimentalParams, k: f64) -> Result<ExactDispersion> {
    params.validate()?;
    let u = params.units();
    let n = params.natural();
    let kc = u.wavenumber_to_natural(k) * n.c;
    let h = coupling_matrix(&n, kc);
    let mut roots = eig3(&h);
    let scale = roots.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    roots.sort_by(|a, b| {
        let di = a.im.abs() - b.im.abs();
        if di.abs() > 1e-12 * scale {
            di.partial_cmp(&0.0).unwrap()
        } else {
            a.re.abs().partial_cmp(&b.re.abs()).unwrap()
        }
    });
    let mut degenerate = false;
    for i in 0..3 {
        for j in i + 1..3 {
            if (roots[i] - roots[j]).norm() < 1e-9 * scale {
                degenerate = true;
            }
        }
    }
    Ok(ExactDispersion {
        eigenvalues: roots.map(|z| z * u.rate),
        degenerate,
    })
}

fn coupling_matrix(n: &NaturalParams, kc: f64) -> [[Complex64; 3]; 3] {
    let c = |x: f64| Complex64::new(x, 0.0);
    let g = n.g_sqrt_n;
    let om = n.omega_c;
    [
        [c(-kc), c(0.0), c(-g)],
        [c(0.0), c(n.delta_2), c(-om)],
        [c(-g), c(-om), Complex64::new(n.delta_1, -1.0)],
    ]
}

/// Eigenvalues of a complex 3×3 matrix from its characteristic cubic,
/// solved in closed form and polished with Newton steps.
pub fn eig3(h: &[[Complex64; 3]; 3]) -> [Complex64; 3] {
    let tr = h[0][0] + h[1][1] + h[2][2];
    let m2 = h[0][0] * h[1][1] - h[0][1] * h[1][0] + h[0][0] * h[2][2] - h[0][2] * h[2][0]
        + h[1][1] * h[2][2]
        - h[1][2] * h[2][1];
    let det = h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1])
        - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0])
        + h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
    // λ³ + a λ² + b λ + c = 0
    let a = -tr;
    let b = m2;
    let c = -det;
    let mut roots = cubic_roots(a, b, c);
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let p = ((*r + a) * *r + b) * *r + c;
            let dp = (3.0 * *r + 2.0 * a) * *r + b;
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
            if step.norm() <= 1e-17 * r.norm() {
                break;
            }
        }
    }
    roots
}

fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let u1 = -q / 2.0 + disc;
    let u2 = -q / 2.0 - disc;
    let big = if u1.norm() >= u2.norm() { u1 } else { u2 };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    if big.norm() == 0.0 {
        return [-shift; 3];
    }
    let cbrt = big.powf(1.0 / 3.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for r in out.iter_mut() {
        let cu = cbrt * w;
        *r = cu - p / (3.0 * cu) - shift;
        w *= omega;
    }
    out
}

/// Coefficients of the perturbative dark-branch dispersion
/// `ω(k) = offset + linear·k + quadratic·k²` in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DspCoefficients {
    pub offset: f64,
    pub linear: f64,
    pub quadratic: f64,
    /// Perturbative validity bound on |k| (1/m): |k c| < Ω_e²/|Δ|.
    pub k_max: f64,
}

/// The drift and quadratic-mass expansion of the dark branch, with the
/// sin²θ ≈ 1 approximation carried exactly as in the adiabatic elimination.
/// Uses Ω_e² = g²n + Ω².
pub fn dsp_coefficients(params: &ExperimentalParams) -> Result<DspCoefficients> {
    params.validate()?;
    let u = params.units();
    let n = params.natural();
    let oe2 = n.omega_e_sq();
    let vg = n.c * n.cos2_theta();
    let d = n.delta_2;
    let delta = n.delta_1;
    let offset = d * (1.0 + d * delta * n.cos2_theta() / oe2);
    let linear = -vg * (1.0 - 2.0 * d * delta / oe2);
    let quadratic = vg * n.c * delta / oe2;
    let k_max = if delta == 0.0 {
        f64::INFINITY
    } else {
        oe2 / (delta.abs() * n.c)
    };
    Ok(DspCoefficients {
        offset: u.rate_to_si(offset),
        // ω = rate, k in 1/length: linear has units of velocity.
        linear: u.velocity_to_si(linear),
        quadratic: quadratic * u.rate * u.length * u.length,
        k_max: k_max / u.length,
    })
}

pub fn dispersion_dsp(params: &ExperimentalParams, k: f64) -> Result<Complex64> {
    let co = dsp_coefficients(params)?;
    if k.abs() >= co.k_max {
        return Err(Error::OutOfRegime {
            kc: (k * params.c).abs(),
            limit: co.k_max * params.c,
        });
    }
    Ok(Complex64::new(co.offset + co.linear * k + co.quadratic * k * k, 0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    /// A "≪" condition passes when ratio < 1 / margin_factor.
    pub margin_factor: f64,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { margin_factor: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCondition {
    pub name: String,
    pub description: String,
    /// Measured dimensionless ratio.
    pub ratio: f64,
    /// Pass threshold on `ratio`.
    pub threshold: f64,
    /// threshold / ratio; `None` when the ratio is zero.
    pub margin: Option<f64>,
    pub applicable: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub margin_factor: f64,
    pub l_dsp: f64,
    pub conditions: Vec<AuditCondition>,
    pub passed: bool,
}

impl AuditReport {
    pub fn condition(&self, name: &str) -> Option<&AuditCondition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

// Slack for conditions stated with ≤, so exactly marginal inputs pass.
const MARGINAL_SLACK: f64 = 1e-12;

fn condition(name: &str, description: &str, ratio: f64, threshold: f64, applicable: bool) -> AuditCondition {
    let passed = !applicable || ratio <= threshold * (1.0 + MARGINAL_SLACK);
    AuditCondition {
        name: name.to_string(),
        description: description.to_string(),
        ratio,
        threshold,
        margin: (ratio != 0.0).then(|| threshold / ratio),
        applicable,
        passed,
    }
}

/// Checks the regime conditions of the effective dark-polariton model for a
/// characteristic length `l_dsp` (m). Never fails; inconsistent inputs show up
/// as failed or non-finite conditions.
pub fn validity_audit(params: &ExperimentalParams, l_dsp: f64, opts: AuditOptions) -> AuditReport {
    let g2n = params.g_sqrt_n * params.g_sqrt_n;
    let dabs = params.delta_1.abs();
    let l_abs = params.c * params.gamma / g2n;
    let weak = 1.0 / opts.margin_factor;
    let a_c = (params.c6 * dabs / g2n).powf(1.0 / 6.0);
    let conditions = vec![
        condition(
            "two_photon_detuning",
            "|δ| ≪ g²n/|Δ| (perturbative dark/bright coupling)",
            params.delta_2.abs() * dabs / g2n,
            weak,
            true,
        ),
        condition(
            "slow_light_dispersion",
            "L_abs/l_dsp ≤ γ/|Δ|",
            l_abs * dabs / (l_dsp * params.gamma),
            1.0,
            true,
        ),
        condition("far_detuned", "|Δ| ≫ γ", params.gamma / dabs, weak, true),
        condition(
            "interaction_detuning",
            "C₆ρ₀⁶ below g²n/|Δ|, i.e. ρ₀a_c < 1",
            params.rho0 * a_c,
            1.0,
            true,
        ),
        condition(
            "cutoff_irrelevant",
            "ρ₀a ≪ 1 for a regularized potential",
            params.rho0 * params.a_cut,
            weak,
            params.a_cut > 0.0,
        ),
    ];
    let passed = conditions.iter().all(|c| c.passed);
    AuditReport {
        margin_factor: opts.margin_factor,
        l_dsp,
        conditions,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slow_light() -> ExperimentalParams {
        let mut p = crate::presets::slow_light_reference();
        p.c6 = 1e-19;
        p
    }

    #[test]
    fn equal_coupling_halves_group_velocity() {
        let mut p = slow_light();
        p.omega_c = p.g_sqrt_n;
        let d = derive_polariton(&p).unwrap();
        assert!((d.tan2_theta - 1.0).abs() < 1e-14);
        assert!((d.vg / p.c - 0.5).abs() < 1e-14);
    }

    #[test]
    fn free_photon_limit_is_tagged() {
        let mut p = slow_light();
        p.omega_c = p.g_sqrt_n * 1e7;
        let d = derive_polariton(&p).unwrap();
        assert_eq!(d.limit, Some(DegenerateLimit::FreePhoton));
        assert!((d.vg / p.c - 1.0).abs() < 1e-12);
        assert!(d.m_par.unwrap().is_finite());
    }

    #[test]
    fn resonant_mass_is_unbounded_not_infinite() {
        let mut p = slow_light();
        p.delta_1 = 0.0;
        let d = derive_polariton(&p).unwrap();
        assert_eq!(d.m_par, None);
        assert_eq!(d.limit, Some(DegenerateLimit::ResonantUnboundedMass));
    }

    #[test]
    fn reference_point_slow_light_ratios() {
        let p = slow_light();
        let d = derive_polariton(&p).unwrap();
        assert!((d.vg / p.c - 1e-5).abs() < 1e-17);
        assert!((p.rho0 * d.l_abs - 1e-2).abs() < 1e-15);
        assert!((d.l_abs - 5e-6).abs() < 1e-18);
    }

    #[test]
    fn mass_formulas() {
        let p = slow_light();
        let d = derive_polariton(&p).unwrap();
        let inv_par = d.vg * d.l_abs * p.delta_1.abs() / p.gamma;
        let inv_perp = d.vg / (2.0 * p.q_p);
        assert!((d.inv_m_par - inv_par).abs() <= 1e-13 * inv_par);
        assert!((d.inv_m_perp - inv_perp).abs() <= 1e-13 * inv_perp);
        assert!((d.m_par.unwrap() * inv_par - 1.0).abs() < 1e-13);
        assert!(d.m_par.unwrap() > 0.0);
        let mut neg = p;
        neg.delta_1 = -p.delta_1;
        assert!(derive_polariton(&neg).unwrap().m_par.unwrap() < 0.0);
    }

    #[test]
    fn radius_ratio_identity() {
        let p = slow_light();
        let d = derive_polariton(&p).unwrap();
        let ratio = (p.delta_1.abs() * p.omega_c.powi(2) / (p.g_sqrt_n.powi(2) * p.gamma)).powf(1.0 / 6.0);
        assert!((d.a_c / d.a_b - ratio).abs() < 1e-12 * ratio);
        // inverting the detuning condition C₆/a_c⁶ = g²n/|Δ|
        let a_c_inv = (p.c6 / (p.g_sqrt_n.powi(2) / p.delta_1.abs())).powf(1.0 / 6.0);
        assert!((d.a_c - a_c_inv).abs() < 1e-12 * a_c_inv);
    }

    #[test]
    fn rejects_nonpositive_fields_by_name() {
        let mut p = slow_light();
        p.rho0 = 0.0;
        match derive_polariton(&p) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "rho0"),
            other => panic!("unexpected {other:?}"),
        }
        let mut p = slow_light();
        p.c6 = -1.0;
        assert!(matches!(derive_polariton(&p), Err(Error::InvalidParameter { field: "c6", .. })));
    }

    #[test]
    fn dark_eigenvalue_zero_on_resonance() {
        let p = slow_light();
        let e = dispersion_exact(&p, 0.0).unwrap();
        assert!(e.dark().norm() < 1e-9 * p.gamma, "{:?}", e.eigenvalues);
    }

    #[test]
    fn lossless_closed_form_eigenvalues() {
        let n = slow_light().natural();
        let c = |x: f64| Complex64::new(x, 0.0);
        let h = [
            [c(0.0), c(0.0), c(-n.g_sqrt_n)],
            [c(0.0), c(0.0), c(-n.omega_c)],
            [c(-n.g_sqrt_n), c(-n.omega_c), c(n.delta_1)],
        ];
        let mut ev = eig3(&h);
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let root = (n.delta_1.powi(2) + 4.0 * n.omega_e_sq()).sqrt();
        let expect = [(n.delta_1 - root) / 2.0, 0.0, (n.delta_1 + root) / 2.0];
        for (z, e) in ev.iter().zip(expect) {
            assert!((z.re - e).abs() < 1e-9 * root, "{z} vs {e}");
            assert!(z.im.abs() < 1e-9 * root);
        }
    }

    #[test]
    fn dsp_quadratic_coefficient_vs_mass() {
        let p = slow_light();
        let d = derive_polariton(&p).unwrap();
        let co = dsp_coefficients(&p).unwrap();
        let n = p.natural();
        // The adiabatic-elimination curvature is sin²θ / m∥.
        let expect = n.sin2_theta() * d.inv_m_par;
        assert!((co.quadratic - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn dsp_zero_at_origin_and_regime_error() {
        let p = slow_light();
        assert_eq!(dispersion_dsp(&p, 0.0).unwrap(), Complex64::new(0.0, 0.0));
        let co = dsp_coefficients(&p).unwrap();
        assert!(matches!(dispersion_dsp(&p, 1.01 * co.k_max), Err(Error::OutOfRegime { .. })));
    }

    #[test]
    fn dsp_matches_exact_branch_at_tenth_of_cutoff() {
        let p = slow_light();
        let k = 0.1 * p.omega_c.powi(2) / (p.delta_1.abs() * p.c);
        let exact = dispersion_exact(&p, k).unwrap().dark().re;
        let approx = dispersion_dsp(&p, k).unwrap().re;
        assert!(((exact - approx) / exact).abs() < 0.03, "{exact} {approx}");
    }

    #[test]
    fn audit_marginal_and_failing_cases() {
        let p = slow_light();
        let r = validity_audit(&p, 1.0 / p.rho0, AuditOptions::default());
        let c = r.condition("slow_light_dispersion").unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-12);
        assert!(c.passed);

        let mut q = p;
        q.delta_1 = q.gamma;
        let r = validity_audit(&q, 1.0 / q.rho0, AuditOptions::default());
        assert!(!r.condition("far_detuned").unwrap().passed);
        assert!(!r.passed);

        // ρ₀ a_c = 0.5
        let mut q = p;
        let g2n = q.g_sqrt_n.powi(2);
        q.c6 = (0.5 / q.rho0).powi(6) * g2n / q.delta_1.abs();
        let r = validity_audit(&q, 1.0 / q.rho0, AuditOptions::default());
        let c = r.condition("interaction_detuning").unwrap();
        assert!((c.ratio - 0.5).abs() < 1e-12);
        assert!((c.margin.unwrap() - 2.0).abs() < 1e-11);
        assert!(c.passed);
        assert!(!r.condition("cutoff_irrelevant").unwrap().applicable);
    }
}
