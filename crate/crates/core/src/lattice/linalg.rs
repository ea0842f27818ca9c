//! Strided matrix products for the tensor contractions, and a dense SVD.

use nalgebra::DMatrix;

/// Thin SVD M = U·diag(s)·Vᵀ, singular values unordered.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: Vec<f64>,
    pub v_t: DMatrix<f64>,
}

/// nalgebra's bidiagonal SVD, checked by recomposition. On small graded
/// matrices it can return factors off by 1e−6..1e−3 relative; those cases
/// are redone with one-sided Jacobi.
pub fn svd(m: DMatrix<f64>) -> Svd {
    let scale = m.amax();
    let fast = m.clone().svd(true, true);
    let (u, v_t) = (fast.u.unwrap(), fast.v_t.unwrap());
    let k = fast.singular_values.len();
    let rec = &u * DMatrix::from_diagonal(&fast.singular_values) * &v_t;
    let ortho = (u.transpose() * &u - DMatrix::identity(k, k)).amax();
    if (rec - &m).amax() <= 1e-13 * scale.max(f64::MIN_POSITIVE) && ortho <= 1e-12 {
        return Svd {
            u,
            s: fast.singular_values.iter().copied().collect(),
            v_t,
        };
    }
    jacobi_svd(m)
}

/// One-sided (Hestenes) Jacobi SVD; slow but accurate to rounding.
pub fn jacobi_svd(m: DMatrix<f64>) -> Svd {
    if m.nrows() < m.ncols() {
        let t = jacobi_svd(m.transpose());
        return Svd {
            u: t.v_t.transpose(),
            s: t.s,
            v_t: t.u.transpose(),
        };
    }
    let n = m.ncols();
    let mut a = m;
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for r in 0..mat.nrows() {
                        let (x, y) = (mat[(r, p)], mat[(r, q)]);
                        mat[(r, p)] = c * x - s * y;
                        mat[(r, q)] = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let s: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    for (j, &sj) in s.iter().enumerate() {
        if sj > 0.0 {
            a.column_mut(j).unscale_mut(sj);
        }
    }
    Svd { u: a, s, v_t: v.transpose() }
}

/// C = alpha·A·B + beta·C for row/column strides given explicitly.
/// A is m×k, B is k×n, C is m×n.
#[allow(clippy::too_many_arguments)]
#[inline]
pub fn gemm(
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    a: &[f64],
    rsa: isize,
    csa: isize,
    b: &[f64],
    rsb: isize,
    csb: isize,
    beta: f64,
    c: &mut [f64],
    rsc: isize,
    csc: isize,
) {
    if m == 0 || n == 0 {
        return;
    }
    let reach = |rows: usize, cols: usize, rs: isize, cs: isize| {
        if rows == 0 || cols == 0 {
            0
        } else {
            (rows as isize - 1) * rs + (cols as isize - 1) * cs + 1
        }
    };
    assert!(reach(m, k, rsa, csa) as usize <= a.len());
    assert!(reach(k, n, rsb, csb) as usize <= b.len());
    assert!(reach(m, n, rsc, csc) as usize <= c.len());
    // SAFETY: the asserts above bound every accessed element, and all
    // strides are non-negative by construction at every call site.
    unsafe {
        matrixmultiply::dgemm(
            m,
            k,
            n,
            alpha,
            a.as_ptr(),
            rsa,
            csa,
            b.as_ptr(),
            rsb,
            csb,
            beta,
            c.as_mut_ptr(),
            rsc,
            csc,
        );
    }
}

/// Row-major C (m×n) = alpha·A (m×k) · B (k×n) + beta·C.
#[inline]
#[allow(clippy::too_many_arguments)]
pub fn matmul(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    gemm(m, k, n, alpha, a, k as isize, 1, b, n as isize, 1, beta, c, n as isize, 1);
}

/// Row-major C (m×n) = alpha·A (m×k) · Bᵀ + beta·C, with B stored n×k.
#[inline]
#[allow(clippy::too_many_arguments)]
pub fn matmul_bt(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    gemm(m, k, n, alpha, a, k as isize, 1, b, 1, k as isize, beta, c, n as isize, 1);
}

/// Row-major C (m×n) = alpha·Aᵀ · B + beta·C, with A stored k×m.
#[inline]
#[allow(clippy::too_many_arguments)]
pub fn matmul_at(m: usize, k: usize, n: usize, alpha: f64, a: &[f64], b: &[f64], beta: f64, c: &mut [f64]) {
    gemm(m, k, n, alpha, a, 1, m as isize, b, n as isize, 1, beta, c, n as isize, 1);
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_agree_with_naive() {
        let a: Vec<f64> = (0..6).map(|x| x as f64 + 1.0).collect(); // 2×3
        let b: Vec<f64> = (0..12).map(|x| (x as f64).sin()).collect(); // 3×4
        let mut c = vec![0.0; 8];
        matmul(2, 3, 4, 1.0, &a, &b, 0.0, &mut c);
        for i in 0..2 {
            for j in 0..4 {
                let s: f64 = (0..3).map(|k| a[i * 3 + k] * b[k * 4 + j]).sum();
                assert!((c[i * 4 + j] - s).abs() < 1e-12);
            }
        }
        // Aᵀ: treat a as 3×2 stored → use a transposed 2×3
        let mut d = vec![0.0; 4];
        matmul_at(2, 3, 2, 1.0, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0], 0.0, &mut d);
        assert_eq!(d, vec![1.0 + 5.0, 3.0 + 5.0, 2.0 + 6.0, 4.0 + 6.0]);
        let mut e = vec![0.0; 4];
        matmul_bt(2, 3, 2, 1.0, &a, &a, 0.0, &mut e);
        assert_eq!(e, vec![14.0, 32.0, 32.0, 77.0]);
    }

    fn check(m: &DMatrix<f64>, f: &Svd) {
        let k = f.s.len();
        let rec = &f.u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(f.s.clone())) * &f.v_t;
        assert!((rec - m).amax() < 1e-13 * m.amax());
        assert!((f.u.transpose() * &f.u - DMatrix::identity(k, k)).amax() < 1e-12);
        assert!((&f.v_t * f.v_t.transpose() - DMatrix::identity(k, k)).amax() < 1e-12);
    }

    #[test]
    fn graded_toeplitz_block() {
        // vdW couplings 1/(r⁶ + a⁶) across a bond: entries span four decades
        let m = DMatrix::from_fn(3, 4, |i, j| {
            let r = 0.5 * (3 - i + j) as f64;
            1.24 / (r.powi(6) + 0.67f64.powi(6))
        });
        check(&m, &svd(m.clone()));
        check(&m, &jacobi_svd(m.clone()));
        check(&m.transpose(), &jacobi_svd(m.transpose()));
    }
}
