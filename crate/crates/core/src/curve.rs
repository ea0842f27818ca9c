//! Sampled correlation amplitudes on a length grid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub k_t: Option<f64>,
    pub k0: Option<f64>,
    /// l₀ρ₀.
    pub l0: Option<f64>,
    /// α ρ₀.
    pub alpha: Option<f64>,
    /// L_T⁰ρ₀.
    pub l_t0: Option<f64>,
    /// L_corr ρ₀ (fitted).
    pub l_corr: Option<f64>,
    /// Location of the regime change used for `tags`, in units of 1/ρ₀.
    pub crossover: Option<f64>,
}

/// Amplitudes on a strictly increasing grid `z` (units of 1/ρ₀), with a
/// regime label per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub z: Vec<f64>,
    pub amplitude: Vec<f64>,
    pub tags: Vec<String>,
    pub meta: CurveMeta,
}

impl CorrelationCurve {
    pub fn new(z: Vec<f64>, amplitude: Vec<f64>, meta: CurveMeta) -> Self {
        let tags = vec![String::new(); z.len()];
        CorrelationCurve {
            z,
            amplitude,
            tags,
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// 1 − A(z), the deviation of a pair correlation from its uncorrelated
    /// value.
    pub fn one_minus(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| 1.0 - a).collect()
    }

    /// Tags points below `at` with `below` and the rest with `above`.
    pub fn tag_split(&mut self, at: Option<f64>, below: &str, above: &str) {
        self.meta.crossover = at;
        for (z, t) in self.z.iter().zip(self.tags.iter_mut()) {
            *t = match at {
                Some(c) if *z >= c => above.to_string(),
                _ => below.to_string(),
            };
        }
    }

    /// Centered log-log slopes d ln A / d ln z at interior points (one-sided
    /// at the ends). Requires positive amplitudes.
    pub fn log_slopes(&self) -> Vec<f64> {
        log_slopes(&self.z, &self.amplitude)
    }
}

pub fn log_slopes(z: &[f64], a: &[f64]) -> Vec<f64> {
    let n = z.len();
    let lz: Vec<f64> = z.iter().map(|x| x.ln()).collect();
    let la: Vec<f64> = a.iter().map(|x| x.ln()).collect();
    (0..n)
        .map(|i| {
            let (l, r) = match i {
                0 => (0, 1.min(n - 1)),
                _ if i == n - 1 => (i - 1, i),
                _ => (i - 1, i + 1),
            };
            if l == r {
                0.0
            } else {
                (la[r] - la[l]) / (lz[r] - lz[l])
            }
        })
        .collect()
}

/// Least-squares slope of ln A against ln z over the points with z in
/// `[lo, hi]`.
pub fn fit_log_slope(z: &[f64], a: &[f64], lo: f64, hi: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = z
        .iter()
        .zip(a)
        .filter(|(z, a)| **z >= lo && **z <= hi && **a > 0.0)
        .map(|(z, a)| (z.ln(), a.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Log-spaced grid from `lo` to `hi` with `per_decade` points per decade.
pub fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).ceil() as usize).max(1);
    (0..=n)
        .map(|i| lo * 10f64.powf(decades * i as f64 / n as f64))
        .collect()
}

pub(crate) fn check_grid(z: &[f64], alpha: f64) -> Result<()> {
    if z.is_empty() {
        return Err(Error::InvalidParameter {
            field: "z_grid",
            reason: "empty".into(),
        });
    }
    if z.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::InvalidParameter {
            field: "z_grid",
            reason: "must be strictly increasing".into(),
        });
    }
    if z[0].partial_cmp(&(alpha * (1.0 - 1e-12))).is_none_or(|o| o.is_lt()) || !z[z.len() - 1].is_finite() {
        return Err(Error::InvalidParameter {
            field: "z_grid",
            reason: format!("points must be finite and at least alpha = {alpha}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slopes_of_power_law() {
        let z = log_grid(1.0, 1e3, 10);
        let a: Vec<f64> = z.iter().map(|z| 3.0 * z.powf(-0.7)).collect();
        for s in log_slopes(&z, &a) {
            assert!((s + 0.7).abs() < 1e-12);
        }
        assert!((fit_log_slope(&z, &a, 2.0, 500.0).unwrap() + 0.7).abs() < 1e-12);
        assert!((z[z.len() - 1] - 1e3).abs() < 1e-9);
    }

    #[test]
    fn grid_validation() {
        assert!(check_grid(&[1.0, 2.0], 1.0).is_ok());
        assert!(check_grid(&[0.5, 2.0], 1.0).is_err());
        assert!(check_grid(&[1.0, 1.0], 1.0).is_err());
        assert!(check_grid(&[], 1.0).is_err());
    }
}
