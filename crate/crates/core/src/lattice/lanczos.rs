//! Restarted Lanczos for the lowest eigenpair of a real symmetric operator.

use nalgebra::{DMatrix, SymmetricEigen};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Residual ‖Hx − λx‖ target, relative to max(1, |λ|).
    pub tol: f64,
    pub max_krylov: usize,
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            tol: 1e-10,
            max_krylov: 60,
            max_restarts: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosResult {
    pub value: f64,
    pub vector: Vec<f64>,
    pub residual: f64,
    pub matvecs: usize,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn lowest_of_tridiagonal(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let mut best = 0;
    for i in 1..m {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    let y: Vec<f64> = eig.eigenvectors.column(best).iter().copied().collect();
    (eig.eigenvalues[best], y)
}

/// Lowest eigenpair of the operator `apply` (y = H x) on vectors of length
/// `start.len()`. `start` must be non-zero.
pub fn lowest_eigenpair<F>(mut apply: F, start: Vec<f64>, opts: LanczosOptions) -> LanczosResult
where
    F: FnMut(&[f64], &mut [f64]),
{
    let dim = start.len();
    let mut x = start;
    let nx = norm(&x);
    assert!(nx > 0.0 && nx.is_finite(), "Lanczos start vector must be non-zero");
    x.iter_mut().for_each(|v| *v /= nx);
    let m_max = opts.max_krylov.min(dim).max(1);
    let mut matvecs = 0;
    let mut best = LanczosResult {
        value: f64::INFINITY,
        vector: x.clone(),
        residual: f64::INFINITY,
        matvecs: 0,
        converged: false,
    };
    let mut w = vec![0.0; dim];
    for _ in 0..=opts.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta = Vec::with_capacity(m_max);
        loop {
            let j = basis.len() - 1;
            apply(&basis[j], &mut w);
            matvecs += 1;
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // full reorthogonalization, two passes
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(&mut w, -c, v);
                }
            }
            let b = norm(&w);
            let (theta, y) = lowest_of_tridiagonal(&alpha, &beta);
            let est = b * y[y.len() - 1].abs();
            let scale = theta.abs().max(1.0);
            if basis.len() >= m_max || b <= 1e-14 * scale || est <= 0.1 * opts.tol * scale {
                // Ritz vector
                let mut xn = vec![0.0; dim];
                for (c, v) in y.iter().zip(&basis) {
                    axpy(&mut xn, *c, v);
                }
                let n = norm(&xn);
                xn.iter_mut().for_each(|v| *v /= n);
                apply(&xn, &mut w);
                matvecs += 1;
                let rq = dot(&xn, &w);
                axpy(&mut w, -rq, &xn);
                let res = norm(&w);
                x = xn;
                if rq < best.value || res < best.residual {
                    best = LanczosResult {
                        value: rq,
                        vector: x.clone(),
                        residual: res,
                        matvecs,
                        converged: false,
                    };
                }
                if res <= opts.tol * rq.abs().max(1.0) || basis.len() == dim {
                    best = LanczosResult {
                        value: rq,
                        vector: x,
                        residual: res,
                        matvecs,
                        converged: true,
                    };
                    return best;
                }
                break;
            }
            beta.push(b);
            let next: Vec<f64> = w.iter().map(|v| v / b).collect();
            basis.push(next);
        }
    }
    best.matvecs = matvecs;
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DavidsonOptions {
    /// Residual target relative to max(1, |λ|).
    pub tol: f64,
    /// Subspace size before a thick restart.
    pub max_subspace: usize,
    pub max_matvecs: usize,
}

impl Default for DavidsonOptions {
    fn default() -> Self {
        DavidsonOptions {
            tol: 1e-10,
            max_subspace: 16,
            max_matvecs: 64,
        }
    }
}

fn lowest_of_projected(g: &[f64], m: usize) -> (f64, Vec<f64>) {
    let mat = DMatrix::from_fn(m, m, |i, j| 0.5 * (g[i * m + j] + g[j * m + i]));
    let eig = SymmetricEigen::new(mat);
    let mut best = 0;
    for i in 1..m {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors.column(best).iter().copied().collect())
}

/// Davidson iteration with the diagonal preconditioner (diag − θ)⁻¹, suited
/// to operators with a strongly varying diagonal. Entries where `diag` is
/// irrelevant (outside a symmetry sector) stay zero because the residual
/// vanishes there.
pub fn davidson_lowest<F>(mut apply: F, diag: &[f64], start: Vec<f64>, opts: DavidsonOptions) -> LanczosResult
where
    F: FnMut(&[f64], &mut [f64]),
{
    let dim = start.len();
    let mut x = start;
    let nx = norm(&x);
    assert!(nx > 0.0 && nx.is_finite(), "Davidson start vector must be non-zero");
    x.iter_mut().for_each(|v| *v /= nx);
    let mut basis: Vec<Vec<f64>> = vec![x];
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut g: Vec<Vec<f64>> = Vec::new();
    let mut matvecs = 0;
    let mut last = (f64::INFINITY, Vec::new(), f64::INFINITY);
    loop {
        // extend images and the projected matrix for new basis vectors
        while images.len() < basis.len() {
            let k = images.len();
            let mut w = vec![0.0; dim];
            apply(&basis[k], &mut w);
            matvecs += 1;
            images.push(w);
            for row in g.iter_mut() {
                row.push(0.0);
            }
            g.push(vec![0.0; k + 1]);
            for j in 0..=k {
                let v = dot(&basis[j], &images[k]);
                g[j][k] = v;
                g[k][j] = v;
            }
        }
        let m = basis.len();
        let flat: Vec<f64> = g.iter().flat_map(|r| r.iter().copied()).collect();
        let (theta, y) = lowest_of_projected(&flat, m);
        let mut xv = vec![0.0; dim];
        let mut ax = vec![0.0; dim];
        for j in 0..m {
            axpy(&mut xv, y[j], &basis[j]);
            axpy(&mut ax, y[j], &images[j]);
        }
        let mut r = ax.clone();
        axpy(&mut r, -theta, &xv);
        let res = norm(&r);
        let scale = theta.abs().max(1.0);
        if res <= opts.tol * scale || m >= dim || matvecs >= opts.max_matvecs {
            let converged = res <= opts.tol * scale || m >= dim;
            let nv = norm(&xv);
            xv.iter_mut().for_each(|v| *v /= nv);
            return LanczosResult {
                value: theta,
                vector: xv,
                residual: res,
                matvecs,
                converged,
            };
        }
        let mut t: Vec<f64> = r
            .iter()
            .zip(diag)
            .map(|(ri, di)| {
                let den = di - theta;
                let den = if den.abs() < 1e-8 * scale { 1e-8 * scale } else { den };
                ri / den
            })
            .collect();
        if m >= opts.max_subspace {
            // thick restart on the current Ritz vector and the previous one
            let prev = std::mem::take(&mut last.1);
            basis = vec![xv.clone()];
            images = vec![ax];
            g = vec![vec![theta]];
            if !prev.is_empty() {
                let mut p: Vec<f64> = prev;
                for _ in 0..2 {
                    let c = dot(&p, &basis[0]);
                    axpy(&mut p, -c, &basis[0]);
                }
                let np = norm(&p);
                if np > 1e-8 {
                    p.iter_mut().for_each(|v| *v /= np);
                    basis.push(p);
                }
            }
        }
        for _ in 0..2 {
            for v in &basis {
                let c = dot(&t, v);
                axpy(&mut t, -c, v);
            }
        }
        let nt = norm(&t);
        if nt < 1e-12 || !nt.is_finite() {
            // fall back to the plain residual direction
            t = r;
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&t, v);
                    axpy(&mut t, -c, v);
                }
            }
            let nr = norm(&t);
            if nr < 1e-14 * scale {
                let nv = norm(&xv);
                xv.iter_mut().for_each(|v| *v /= nv);
                return LanczosResult {
                    value: theta,
                    vector: xv,
                    residual: res,
                    matvecs,
                    converged: false,
                };
            }
            t.iter_mut().for_each(|v| *v /= nr);
        } else {
            t.iter_mut().for_each(|v| *v /= nt);
        }
        last = (theta, xv, res);
        basis.push(t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_operator() {
        let d: Vec<f64> = (0..200).map(|i| (i as f64 * 0.37).sin() * 10.0 + i as f64 * 0.01).collect();
        let r = lowest_eigenpair(
            |x, y| {
                for i in 0..x.len() {
                    y[i] = d[i] * x[i];
                }
            },
            vec![1.0; 200],
            LanczosOptions::default(),
        );
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(r.converged);
        assert!((r.value - min).abs() < 1e-9);
    }

    #[test]
    fn davidson_on_stiff_operator() {
        // tridiagonal with a diagonal spread of 1e6
        let n = 300;
        let d: Vec<f64> = (0..n).map(|i| if i % 7 == 0 { 1e6 } else { 0.05 * i as f64 }).collect();
        let apply = |x: &[f64], y: &mut [f64]| {
            for i in 0..n {
                y[i] = d[i] * x[i];
                if i > 0 {
                    y[i] -= x[i - 1];
                }
                if i + 1 < n {
                    y[i] -= x[i + 1];
                }
            }
        };
        let opts = DavidsonOptions {
            max_matvecs: 400,
            ..DavidsonOptions::default()
        };
        let r = davidson_lowest(apply, &d, vec![1.0; n], opts);
        let l = lowest_eigenpair(apply, vec![1.0; n], LanczosOptions { max_krylov: 300, ..LanczosOptions::default() });
        assert!(r.converged, "{} {} {} {}", r.value, r.residual, r.matvecs, l.value);
        assert!((r.value - l.value).abs() < 1e-8 * l.value.abs().max(1.0), "{} {}", r.value, l.value);
    }

    #[test]
    fn tiny_dimension_is_exact() {
        // [[1, 2], [2, 1]] → −1
        let r = lowest_eigenpair(
            |x, y| {
                y[0] = x[0] + 2.0 * x[1];
                y[1] = 2.0 * x[0] + x[1];
            },
            vec![1.0, 0.3],
            LanczosOptions::default(),
        );
        assert!((r.value + 1.0).abs() < 1e-14);
        assert!(r.converged);
    }
}
