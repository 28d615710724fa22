use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Householder QR of a square matrix normalized so that `diag(R) > 0`.
///
/// With that normalization the factorization is unique, and for `det(a) > 0`
/// the orthogonal factor lies in SO(n).
pub fn qr_positive(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut r = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    let mut v = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        let norm = (k..n).map(|i| r[(i, k)] * r[(i, k)]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[(k, k)] >= 0.0 { -norm } else { norm };
        for i in k..n {
            v[i] = r[(i, k)];
        }
        v[k] -= alpha;
        let vnorm2: f64 = (k..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // r <- (I - 2 v v^T / |v|^2) r
        for j in k..n {
            let dot: f64 = (k..n).map(|i| v[i] * r[(i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                r[(i, j)] -= f * v[i];
            }
        }
        // q <- q (I - 2 v v^T / |v|^2)
        for i in 0..n {
            let dot: f64 = (k..n).map(|j| q[(i, j)] * v[j]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in k..n {
                q[(i, j)] -= f * v[j];
            }
        }
        for i in (k + 1)..n {
            r[(i, k)] = 0.0;
        }
    }

    // Rounding leaves |R_kk| ~ eps |a| on exactly singular input.
    let floor = n as f64 * f64::EPSILON * a.norm();
    for k in 0..n {
        let d = r[(k, k)];
        if d.abs() <= floor || !d.is_finite() {
            return Err(Error::Singular);
        }
        if d < 0.0 {
            for j in k..n {
                r[(k, j)] = -r[(k, j)];
            }
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    Ok((q, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_with_positive_diagonal() {
        let a = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.5, 1.0, 3.0, -2.0, -0.5, 0.25, 1.5]);
        let (q, r) = qr_positive(&a).unwrap();
        assert!((&q * &r - &a).norm() < 1e-14);
        assert!((q.transpose() * &q - DMatrix::identity(3, 3)).norm() < 1e-14);
        for k in 0..3 {
            assert!(r[(k, k)] > 0.0);
            for i in (k + 1)..3 {
                assert_eq!(r[(i, k)], 0.0);
            }
        }
    }

    #[test]
    fn singular_input_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(qr_positive(&a).unwrap_err(), Error::Singular);
    }

    #[test]
    fn non_finite_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert_eq!(qr_positive(&a).unwrap_err(), Error::NonFinite);
    }
}
