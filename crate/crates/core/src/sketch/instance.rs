use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, qr_factor, DenseMatrix, Seed};
use crate::math::{acos, cos, sin};

use super::symmetry::{near_symmetry_delta, RANK_TOL};

/// A hidden rank-`k` matrix `f`, an orthonormal test matrix `x`, the true
/// near-symmetry `delta` of `f` and the prior bound `epsilon >= delta`.
#[derive(Debug, Clone)]
pub struct SketchInstance {
    f: DenseMatrix,
    x: DenseMatrix,
    k: usize,
    delta: f64,
    epsilon: f64,
}

impl SketchInstance {
    /// Validates and wraps an instance.
    pub fn new(f: DenseMatrix, x: DenseMatrix, k: usize, delta: f64, epsilon: f64) -> Result<Self> {
        let n = f.rows();
        if f.cols() != n {
            return Err(Error::DimensionMismatch {
                op: "SketchInstance::new",
                expected: (n, n),
                found: f.shape(),
            });
        }
        if x.rows() != n {
            return Err(Error::DimensionMismatch {
                op: "SketchInstance::new",
                expected: (n, x.cols()),
                found: x.shape(),
            });
        }
        if !(0.0..1.0).contains(&delta) || !(delta..1.0).contains(&epsilon) {
            return Err(Error::InvalidRange { delta, epsilon });
        }
        if numerical_rank(&f, RANK_TOL) != k {
            return Err(Error::InvalidInstance("rank(f) differs from k"));
        }
        if numerical_rank(&f.matmul(&x)?, RANK_TOL) != k {
            return Err(Error::InvalidInstance("rank(f x) differs from k"));
        }
        let gram_defect = x
            .gram()
            .sub(&DenseMatrix::identity(x.cols()))?
            .frobenius_norm();
        if gram_defect > 1e-12 {
            return Err(Error::InvalidInstance(
                "test matrix columns are not orthonormal",
            ));
        }
        if near_symmetry_delta(&f, RANK_TOL)? > delta + 1e-10 {
            return Err(Error::InvalidInstance("f is less symmetric than delta"));
        }
        Ok(Self {
            f,
            x,
            k,
            delta,
            epsilon,
        })
    }

    /// Canonical fixture: `F = U S Vᵀ` where `V` is `U` with its first
    /// column rotated by `arccos(1 − δ)` towards a direction orthogonal to
    /// `range(U)`, so that `1 − σ_min(UᵀV) = δ` exactly. Singular values are
    /// drawn from `[1, 3)` and `X` is an orthonormalized Gaussian `n × s`.
    pub fn near_symmetric(
        n: usize,
        k: usize,
        s: usize,
        delta: f64,
        epsilon: f64,
        seed: Seed,
    ) -> Result<Self> {
        if k == 0 || k >= n || s < k || s > n {
            return Err(Error::InvalidArgument("need 1 <= k < n and k <= s <= n"));
        }
        let basis = qr_factor(&seed.split(0).gaussian_matrix(n, k + 1))?.0;
        let u = basis.columns(0..k);
        let w = basis.col(k);
        let theta = acos(1.0 - delta);
        let mut v = u.clone();
        let rotated: alloc::vec::Vec<f64> = u
            .col(0)
            .iter()
            .zip(&w)
            .map(|(a, b)| cos(theta) * a + sin(theta) * b)
            .collect();
        v.set_col(0, &rotated);

        let mut sigma = seed.split(1).uniform_vec(k, 1.0, 3.0);
        sigma.sort_by(|a, b| b.total_cmp(a));
        let f = u.scale_columns(&sigma).matmul(&v.transpose())?;
        let x = qr_factor(&seed.split(2).gaussian_matrix(n, s))?.0;
        Self::new(f, x, k, delta, epsilon)
    }

    pub fn f(&self) -> &DenseMatrix {
        &self.f
    }

    pub fn x(&self) -> &DenseMatrix {
        &self.x
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> usize {
        self.f.rows()
    }

    pub fn s(&self) -> usize {
        self.x.cols()
    }

    /// Same matrices with a different prior bound.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        if !(self.delta..1.0).contains(&epsilon) {
            return Err(Error::InvalidRange {
                delta: self.delta,
                epsilon,
            });
        }
        Ok(Self {
            epsilon,
            ..self.clone()
        })
    }
}
