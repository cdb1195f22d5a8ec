use alloc::vec::Vec;

use super::{dot, norm2, DenseMatrix, Seed};
use crate::error::{Error, Result};
use crate::math::sqrt;

/// Largest singular value of `m`, as `√λ_max(mᵀm)` from [`top_eigenvalue_psd`]'s
/// Lanczos iteration applied to `x ↦ mᵀ(m x)` without forming `mᵀm`.
pub fn spectral_norm(m: &DenseMatrix, tol: f64, max_iter: usize, seed: Seed) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(
            "spectral_norm: tol must be positive",
        ));
    }
    if m.is_zero() || m.cols() == 0 {
        return Ok(0.0);
    }
    let lambda = lanczos_top(
        m.cols(),
        |x| m.tr_mul_vec(&m.mul_vec(x)),
        tol,
        max_iter,
        seed,
    )?;
    Ok(sqrt(lambda.max(0.0)))
}

/// Largest eigenvalue of a symmetric positive semidefinite matrix. For a
/// Gram matrix `g = mᵀm` this is `σ_max(m)²`.
///
/// Lanczos with full reorthogonalization from a seeded Gaussian start. It
/// stops when the Ritz residual `β_j |s_j|` of the top Ritz pair drops to
/// `tol · θ`; after `dim` steps the Krylov space is the whole space and the
/// Ritz value is exact, so clustered spectra cannot stall it. If the
/// Krylov space closes early without convergence, a fresh seeded direction
/// orthogonal to it continues the iteration. `max_iter` caps the steps.
pub fn top_eigenvalue_psd(g: &DenseMatrix, tol: f64, max_iter: usize, seed: Seed) -> Result<f64> {
    if g.rows() != g.cols() {
        return Err(Error::DimensionMismatch {
            op: "top_eigenvalue_psd",
            expected: (g.rows(), g.rows()),
            found: g.shape(),
        });
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(
            "top_eigenvalue_psd: tol must be positive",
        ));
    }
    if g.is_zero() || g.cols() == 0 {
        return Ok(0.0);
    }
    lanczos_top(g.cols(), |x| g.mul_vec(x), tol, max_iter, seed)
}

fn lanczos_top(
    dim: usize,
    apply: impl Fn(&[f64]) -> Vec<f64>,
    tol: f64,
    max_iter: usize,
    seed: Seed,
) -> Result<f64> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut refill = 0u64;
    let mut q = seed.gaussian_matrix(1, dim).into_vec();
    let n0 = norm2(&q);
    q.iter_mut().for_each(|v| *v /= n0);
    let mut scale = 0.0f64;
    let mut residual = f64::INFINITY;

    for _ in 0..max_iter.min(dim) {
        let mut w = apply(&q);
        let a = dot(&q, &w);
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= a * qi;
        }
        basis.push(q);
        alpha.push(a);
        reorthogonalize(&mut w, &basis);
        let b = norm2(&w);
        scale = scale.max(a.abs()).max(b);

        let (theta, last) = tridiagonal_top(&alpha, &beta);
        residual = b * last.abs();
        if residual <= tol * theta || basis.len() == dim {
            return Ok(theta);
        }
        if b > 1e-14 * scale {
            w.iter_mut().for_each(|v| *v /= b);
            q = w;
            beta.push(b);
        } else {
            // invariant subspace: continue from a new direction
            q = fresh_direction(dim, &basis, seed, &mut refill);
            beta.push(0.0);
        }
    }
    Err(Error::ConvergenceFailure {
        op: "spectral_norm",
        iterations: max_iter,
        residual,
    })
}

/// Classical Gram–Schmidt against `basis`, twice.
fn reorthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let t = dot(q, w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= t * qi;
            }
        }
    }
}

fn fresh_direction(dim: usize, basis: &[Vec<f64>], seed: Seed, refill: &mut u64) -> Vec<f64> {
    loop {
        *refill += 1;
        let mut v = seed
            .split(1_000 + *refill)
            .gaussian_matrix(1, dim)
            .into_vec();
        reorthogonalize(&mut v, basis);
        let n = norm2(&v);
        if n > 1e-8 {
            v.iter_mut().for_each(|x| *x /= n);
            return v;
        }
        assert!(
            *refill < 1_000,
            "no direction orthogonal to a basis of {} vectors",
            basis.len()
        );
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, and the last component of its unit
/// eigenvector.
fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let n = alpha.len();
    let off = |i: usize| if i < beta.len() { beta[i].abs() } else { 0.0 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let norm = lo.abs().max(hi.abs());
    if norm == 0.0 {
        return (0.0, 1.0);
    }
    // bisection on the Sturm count: number of eigenvalues below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..n {
            let b2 = if i > 0 {
                beta[i - 1] * beta[i - 1]
            } else {
                0.0
            };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * norm;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    while hi - lo > 2.0 * f64::EPSILON * norm {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) >= n {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = hi;

    // two steps of inverse iteration on T − θI
    let mut x = alloc::vec![1.0; n];
    for _ in 0..2 {
        x = shifted_tridiagonal_solve(alpha, beta, theta, &x, norm);
        let s = norm2(&x);
        x.iter_mut().for_each(|v| *v /= s);
    }
    (theta, x[n - 1])
}

/// Solves `(T − θI) y = b` by Gaussian elimination with partial pivoting;
/// zero pivots are replaced by `ε·‖T‖`.
fn shifted_tridiagonal_solve(
    alpha: &[f64],
    beta: &[f64],
    theta: f64,
    b: &[f64],
    norm: f64,
) -> Vec<f64> {
    let n = alpha.len();
    let tiny = f64::EPSILON * norm;
    let mut d: Vec<f64> = alpha.iter().map(|a| a - theta).collect();
    let mut dl: Vec<f64> = beta[..n - 1].to_vec();
    let mut du: Vec<f64> = beta[..n - 1].to_vec();
    let mut du2 = alloc::vec![0.0; n.saturating_sub(2)];
    let mut swapped = alloc::vec![false; n.saturating_sub(1)];
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = d[i + 1];
            d[i + 1] = t - f * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            swapped[i] = true;
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut y = b.to_vec();
    for i in 0..n - 1 {
        if swapped[i] {
            y.swap(i, i + 1);
        }
        y[i + 1] -= dl[i] * y[i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        if i + 1 < n {
            s -= du[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * y[i + 2];
        }
        y[i] = s / d[i];
    }
    y
}
