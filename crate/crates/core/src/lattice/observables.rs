//! Pair correlation g²(z) from a lattice ground state.

use super::model::Boundary;
use super::result::GroundStateResult;
use crate::curve::{CorrelationCurve, CurveMeta};

/// Fraction of an open chain kept for bulk observables.
pub const OPEN_BULK_FRACTION: f64 = 0.6;

/// g²(z) on the lattice grid, z in units of 1/ρ₀.
///
/// Periodic: ⟨n_i n_{i+d}⟩/ν² averaged over all i and symmetrized in
/// d ↔ L − d, ν the mean filling. Open: pairs within the central 60% of
/// sites only, normalized by the squared mean filling of that window.
/// The z = 0 entry uses ⟨n(n − 1)⟩.
pub fn g2_correlation(result: &GroundStateResult) -> CorrelationCurve {
    let l = result.lattice.n_sites;
    let dx = result.lattice.dx;
    let nu = result.lattice.n_particles as f64 / l as f64;
    let (z, g2) = match result.lattice.boundary {
        Boundary::Periodic => {
            let raw: Vec<f64> = (0..l)
                .map(|d| (0..l).map(|i| result.nn(i, (i + d) % l)).sum::<f64>() / (l as f64 * nu * nu))
                .collect();
            let g: Vec<f64> = (0..l).map(|d| 0.5 * (raw[d] + raw[(l - d) % l])).collect();
            ((0..l).map(|d| d as f64 * dx).collect::<Vec<_>>(), g)
        }
        Boundary::Open => {
            let skip = ((1.0 - OPEN_BULK_FRACTION) * 0.5 * l as f64).round() as usize;
            let (lo, hi) = (skip, l - skip);
            let w = hi - lo;
            let bulk = result.density[lo..hi].iter().sum::<f64>() / w as f64;
            let g: Vec<f64> = (0..w)
                .map(|d| {
                    if bulk <= 0.0 {
                        return 0.0;
                    }
                    let acc: f64 = (lo..hi - d).map(|i| result.nn(i, i + d)).sum();
                    acc / ((w - d) as f64 * bulk * bulk)
                })
                .collect();
            ((0..w).map(|d| d as f64 * dx).collect(), g)
        }
    };
    CorrelationCurve::new(z, g2, CurveMeta::default())
}

/// Envelope of |1 − g²| at its local extrema within [z_lo, z_hi] and the
/// least-squares slope of its logarithm against ln z.
pub fn oscillation_envelope(curve: &CorrelationCurve, z_lo: f64, z_hi: f64) -> (Vec<f64>, Vec<f64>, Option<f64>) {
    let dev: Vec<f64> = curve.amplitude.iter().map(|g| (1.0 - g).abs()).collect();
    let mut zs = Vec::new();
    let mut env = Vec::new();
    for i in 1..dev.len().saturating_sub(1) {
        let z = curve.z[i];
        if z < z_lo || z > z_hi {
            continue;
        }
        if dev[i] >= dev[i - 1] && dev[i] > dev[i + 1] && dev[i] > 0.0 {
            zs.push(z);
            env.push(dev[i]);
        }
    }
    let slope = if zs.len() >= 2 {
        let n = zs.len() as f64;
        let lx: Vec<f64> = zs.iter().map(|z| z.ln()).collect();
        let ly: Vec<f64> = env.iter().map(|a| a.ln()).collect();
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    (zs, env, slope)
}
