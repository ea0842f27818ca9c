//! Lieb-Liniger ground state from the Bethe-ansatz integral equation.
//!
//! g(x) − (1/2π)∫₋₁¹ 2λ/(λ² + (x − y)²) g(y) dy = 1/2π,
//! γ = λ/∫g, e(γ) = (γ/λ)³ ∫x² g, with E/L = ρ₀³e(γ)/(2m).
//! The compressibility then gives K² = π²/(3e − 2γe′ + γ²e″/2).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::compressibility::K_VALIDITY_LIMIT;
use crate::error::{require_positive, Error, Result};
use crate::quad::gauss_legendre;

const MIN_NODES: usize = 48;
const MAX_NODES: usize = 4096;
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiebLinigerResult {
    pub gamma: f64,
    /// Fermi rapidity in units of the density scale (λ = c/q).
    pub lambda: f64,
    /// Dimensionless energy density e(γ).
    pub e: f64,
    pub k: f64,
    pub nodes: usize,
    /// K above the Luttinger-liquid validity limit.
    pub weak_coupling: bool,
}

/// (γ, e) for a given λ at fixed node count.
fn solve_fixed(lambda: f64, n: usize) -> Result<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let a = DMatrix::from_fn(n, n, |i, j| {
        let d = x[i] - x[j];
        let kern = w[j] * 2.0 * lambda / (lambda * lambda + d * d) / (2.0 * PI);
        if i == j {
            1.0 - kern
        } else {
            -kern
        }
    });
    let rhs = DVector::from_element(n, 1.0 / (2.0 * PI));
    let g = a.lu().solve(&rhs).ok_or(Error::Quadrature {
        z: lambda,
        error: f64::INFINITY,
    })?;
    let norm: f64 = (0..n).map(|i| w[i] * g[i]).sum();
    let m2: f64 = (0..n).map(|i| w[i] * x[i] * x[i] * g[i]).sum();
    let gamma = lambda / norm;
    Ok((gamma, (gamma / lambda).powi(3) * m2))
}

/// (γ, e, nodes) for a given λ, refining the quadrature until stable.
fn solve_lambda(lambda: f64) -> Result<(f64, f64, usize)> {
    // the kernel has width λ; start with enough nodes to resolve it
    let mut n = ((8.0 / lambda).ceil() as usize).clamp(MIN_NODES, MAX_NODES);
    let mut prev = solve_fixed(lambda, n)?;
    loop {
        let next_n = (n * 3) / 2;
        if next_n > MAX_NODES {
            return Err(Error::Quadrature {
                z: lambda,
                error: (prev.1 - solve_fixed(lambda, n)?.1).abs(),
            });
        }
        let cur = solve_fixed(lambda, next_n)?;
        if (cur.1 - prev.1).abs() <= REL_TOL * cur.1 && (cur.0 - prev.0).abs() <= REL_TOL * cur.0 {
            return Ok((cur.0, cur.1, next_n));
        }
        prev = cur;
        n = next_n;
    }
}

/// λ with γ(λ) = target, by regula falsi (Illinois) in ln λ.
fn lambda_for_gamma(target: f64) -> Result<f64> {
    let f = |ll: f64| -> Result<f64> { Ok(solve_lambda(ll.exp())?.0.ln() - target.ln()) };
    // γ ≈ 4λ² at weak and ≈ πλ at strong coupling
    let guess = if target < 1.0 { (target / 4.0).sqrt() } else { target / PI };
    let mut a = guess.ln() - 0.5;
    let mut b = guess.ln() + 0.5;
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    while fa > 0.0 {
        a -= 1.0;
        fa = f(a)?;
    }
    while fb < 0.0 {
        b += 1.0;
        fb = f(b)?;
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = f(c)?;
        if fc.abs() < 1e-15 || (b - a).abs() < 1e-15 {
            return Ok(c.exp());
        }
        if fc * fb > 0.0 {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(((a * fb - b * fa) / (fb - fa)).exp())
}

pub fn lieb_liniger_reference(gamma: f64) -> Result<LiebLinigerResult> {
    require_positive("gamma_ll", gamma)?;
    let lambda = lambda_for_gamma(gamma)?;
    let h = 2e-3;
    let (g0, e0, nodes) = solve_lambda(lambda)?;
    let (gm, em, _) = solve_lambda(lambda * (1.0 - h))?;
    let (gp, ep, _) = solve_lambda(lambda * (1.0 + h))?;
    // quadratic through the three (γ, e) points
    let d1 = (ep - e0) / (gp - g0);
    let d0 = (e0 - em) / (g0 - gm);
    let e2 = 2.0 * (d1 - d0) / (gp - gm);
    let e1 = d0 + 0.5 * e2 * (g0 - gm);
    let denom = 3.0 * e0 - 2.0 * g0 * e1 + 0.5 * g0 * g0 * e2;
    let k = PI / denom.sqrt();
    Ok(LiebLinigerResult {
        gamma: g0,
        lambda,
        e: e0,
        k,
        nodes,
        weak_coupling: k.is_nan() || k > K_VALIDITY_LIMIT,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TonksExtrapolation {
    pub e: f64,
    pub k: f64,
    /// Raw values at the base coupling.
    pub e_raw: f64,
    pub k_raw: f64,
}

/// Second-order Richardson extrapolation in 1/γ from γ, 2γ and 4γ.
pub fn tonks_extrapolation(gamma: f64) -> Result<TonksExtrapolation> {
    let r = [
        lieb_liniger_reference(gamma)?,
        lieb_liniger_reference(2.0 * gamma)?,
        lieb_liniger_reference(4.0 * gamma)?,
    ];
    let rich = |a: f64, b: f64, c: f64| {
        let r1 = 2.0 * b - a;
        let r2 = 2.0 * c - b;
        (4.0 * r2 - r1) / 3.0
    };
    Ok(TonksExtrapolation {
        e: rich(r[0].e, r[1].e, r[2].e),
        k: rich(r[0].k, r[1].k, r[2].k),
        e_raw: r[0].e,
        k_raw: r[0].k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_coupling_series() {
        // e(γ) = (π²/3)(1 − 4/γ + 12/γ² + O(γ⁻³))
        let g = 200.0;
        let r = lieb_liniger_reference(g).unwrap();
        let series = PI * PI / 3.0 * (1.0 - 4.0 / g + 12.0 / (g * g));
        assert!((r.e - series).abs() / series < 1e-5, "{} vs {series}", r.e);
        assert!((r.gamma - g).abs() < 1e-10 * g);
    }

    #[test]
    fn weak_coupling_bogoliubov() {
        // e ≈ γ − 4γ^{3/2}/(3π), K ≈ π/√γ
        let g = 0.05;
        let r = lieb_liniger_reference(g).unwrap();
        let e_bog = g - 4.0 * g.powf(1.5) / (3.0 * PI);
        assert!((r.e - e_bog).abs() / e_bog < 2e-2, "{} vs {e_bog}", r.e);
        assert!((r.k - PI / g.sqrt()).abs() / r.k < 0.05);
        assert!(r.weak_coupling);
    }

    #[test]
    fn tonks_limit() {
        let t = tonks_extrapolation(1e3).unwrap();
        assert!((t.e - PI * PI / 3.0).abs() / (PI * PI / 3.0) < 1e-6);
        assert!((t.k - 1.0).abs() < 1e-4);
    }
}
