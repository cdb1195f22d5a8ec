use alloc::vec::Vec;

use super::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};

/// Thin Householder QR of an `m × n` matrix with `m >= n`.
///
/// `r` has a nonnegative diagonal. A diagonal entry below
/// `1e-12 · ‖m‖_F` is reported as [`Error::RankDeficient`].
pub fn qr_factor(m: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return Err(Error::RankDeficient {
            column: rows,
            value: 0.0,
        });
    }
    let tol = 1e-12 * m.frobenius_norm();
    // Work column-wise: a[j] is column j.
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.col(j)).collect();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut r = DenseMatrix::zeros(cols, cols);

    for k in 0..cols {
        let x = &a[k][k..];
        let alpha = norm2(x);
        if alpha <= tol || alpha == 0.0 {
            return Err(Error::RankDeficient {
                column: k,
                value: alpha,
            });
        }
        // v = x + sign(x0)·‖x‖·e1, normalized
        let mut v: Vec<f64> = x.to_vec();
        let s = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += s * alpha;
        let vn = norm2(&v);
        for vi in v.iter_mut() {
            *vi /= vn;
        }
        for col in a.iter_mut().skip(k) {
            let t = 2.0 * dot(&v, &col[k..]);
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= t * vi;
            }
        }
        for j in k..cols {
            r.set(k, j, a[j][k]);
        }
        reflectors.push(v);
    }

    // Q = H_0 ... H_{n-1} applied to the first n canonical vectors.
    let mut q = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        let mut e = alloc::vec![0.0; rows];
        e[j] = 1.0;
        for (k, v) in reflectors.iter().enumerate().rev() {
            let t = 2.0 * dot(v, &e[k..]);
            for (c, vi) in e[k..].iter_mut().zip(v) {
                *c -= t * vi;
            }
        }
        q.set_col(j, &e);
    }

    // Nonnegative diagonal.
    for k in 0..cols {
        if r.get(k, k) < 0.0 {
            for j in k..cols {
                r.set(k, j, -r.get(k, j));
            }
            for i in 0..rows {
                q.set(i, k, -q.get(i, k));
            }
        }
    }
    Ok((q, r))
}
