use alloc::vec::Vec;

use super::{dot, norm2, DenseMatrix};
use crate::error::{Error, Result};
use crate::math::sqrt;

const MAX_SWEEPS: usize = 80;
/// Pairs whose cosine is below this are treated as orthogonal.
const ORTHO_TOL: f64 = 1e-15;

/// Slim singular value decomposition `m = U · diag(S) · Vᵀ`.
///
/// `u` is `rows × r`, `v` is `cols × r` with `r = min(rows, cols)`; both
/// have orthonormal columns and `s` is nonincreasing. Each pair of singular
/// vectors is signed so that the largest-magnitude entry of the `u` column
/// is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdTriple {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdTriple {
    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Smallest singular value above `tol · σ_max`, or `None` for a zero
    /// matrix.
    pub fn sigma_min_nonzero(&self, tol: f64) -> Option<f64> {
        let cut = tol * self.sigma_max();
        self.s.iter().copied().rfind(|s| *s > cut)
    }

    pub fn rank(&self, tol: f64) -> usize {
        let cut = tol * self.sigma_max();
        self.s.iter().filter(|s| **s > cut).count()
    }

    /// `U · diag(S) · Vᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let us = self.u.scale_columns(&self.s);
        us.matmul(&self.v.transpose())
            .expect("factor shapes are consistent")
    }
}

/// One-sided Jacobi SVD, applied to whichever orientation is taller.
pub fn svd(m: &DenseMatrix) -> Result<SvdTriple> {
    if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        let t = jacobi_tall(&m.transpose())?;
        let mut out = SvdTriple {
            u: t.v,
            s: t.s,
            v: t.u,
        };
        fix_signs(&mut out);
        Ok(out)
    }
}

/// Number of singular values above `tol · σ_max`; zero for the zero matrix.
pub fn numerical_rank(m: &DenseMatrix, tol: f64) -> usize {
    if m.is_zero() {
        return 0;
    }
    match svd(m) {
        Ok(t) => t.rank(tol),
        // Jacobi only fails on pathological inputs; fall back to full rank.
        Err(_) => m.rows().min(m.cols()),
    }
}

fn jacobi_tall(m: &DenseMatrix) -> Result<SvdTriple> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<f64>> = (0..cols).map(|j| m.col(j)).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| {
            let mut e = alloc::vec![0.0; cols];
            e[j] = 1.0;
            e
        })
        .collect();
    let fro = m.frobenius_norm();
    // columns this small carry no information at double precision
    let floor = 1e-14 * fro * 1e-3;

    let mut converged = cols < 2;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure {
                op: "svd",
                iterations: sweeps,
                residual: off_diagonal(&a),
            });
        }
        sweeps += 1;
        converged = true;
        for p in 0..cols - 1 {
            for q in p + 1..cols {
                let alpha = dot(&a[p], &a[p]);
                let beta = dot(&a[q], &a[q]);
                let gamma = dot(&a[p], &a[q]);
                let scale = sqrt(alpha) * sqrt(beta);
                if scale <= floor * floor || gamma.abs() <= ORTHO_TOL * scale {
                    continue;
                }
                converged = false;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                let c = 1.0 / sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut a, p, q, c, s);
                rotate(&mut v, p, q, c, s);
            }
        }
    }

    let s: Vec<f64> = a.iter().map(|col| norm2(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
    let smax = order.first().map_or(0.0, |&i| s[i]);

    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut v_cols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut sorted_s = Vec::with_capacity(cols);
    for &j in &order {
        let sj = s[j];
        let uj = if sj > 1e-12 * smax && sj > 0.0 {
            a[j].iter().map(|x| x / sj).collect()
        } else {
            // filled in by completion below
            Vec::new()
        };
        u_cols.push(uj);
        v_cols.push(v[j].clone());
        sorted_s.push(sj);
    }
    complete_orthonormal(&mut u_cols, rows);

    let mut out = SvdTriple {
        u: DenseMatrix::from_columns(rows, &u_cols)?,
        s: sorted_s,
        v: DenseMatrix::from_columns(cols, &v_cols)?,
    };
    fix_signs(&mut out);
    Ok(out)
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let yq = *y;
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

fn off_diagonal(a: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for p in 0..a.len() {
        for q in p + 1..a.len() {
            worst = worst.max(dot(&a[p], &a[q]).abs());
        }
    }
    worst
}

/// Replaces empty entries of `cols` by unit vectors orthogonal to every
/// other column, drawn from the canonical basis.
fn complete_orthonormal(cols: &mut [Vec<f64>], dim: usize) {
    let mut next_canonical = 0;
    for j in 0..cols.len() {
        if !cols[j].is_empty() {
            continue;
        }
        loop {
            assert!(next_canonical < dim, "cannot complete an orthonormal basis");
            let mut e = alloc::vec![0.0; dim];
            e[next_canonical] = 1.0;
            next_canonical += 1;
            for _ in 0..2 {
                for other in cols.iter().filter(|c| !c.is_empty()) {
                    let t = dot(other, &e);
                    for (ei, oi) in e.iter_mut().zip(other) {
                        *ei -= t * oi;
                    }
                }
            }
            let n = norm2(&e);
            if n > 1e-6 {
                cols[j] = e.iter().map(|x| x / n).collect();
                break;
            }
        }
    }
}

fn fix_signs(t: &mut SvdTriple) {
    for j in 0..t.s.len() {
        let col = t.u.col(j);
        let pivot = col.iter().copied().fold(
            0.0f64,
            |best, x| if x.abs() > best.abs() { x } else { best },
        );
        if pivot < 0.0 {
            for i in 0..t.u.rows() {
                t.u.set(i, j, -t.u.get(i, j));
            }
            for i in 0..t.v.rows() {
                t.v.set(i, j, -t.v.get(i, j));
            }
        }
    }
}
