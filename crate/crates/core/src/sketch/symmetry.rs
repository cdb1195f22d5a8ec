use crate::error::{Error, Result};
use crate::linalg::{svd, DenseMatrix, SvdTriple};

/// Singular values below `RANK_TOL · σ_max` are treated as zero when
/// extracting singular subspaces.
pub const RANK_TOL: f64 = 1e-10;

/// Distance of `U_Fᵀ V_F` to the orthogonal group in the spectral norm,
/// `1 − σ_min(U_Fᵀ V_F)`, where `U_F`, `V_F` span the left and right
/// singular subspaces of `f` at numerical rank `rank_tol`.
///
/// Zero for symmetric positive semidefinite `f`; one when some right
/// singular direction is orthogonal to the whole column space.
pub fn near_symmetry_delta(f: &DenseMatrix, rank_tol: f64) -> Result<f64> {
    if f.rows() != f.cols() {
        return Err(Error::DimensionMismatch {
            op: "near_symmetry_delta",
            expected: (f.rows(), f.rows()),
            found: f.shape(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let t = svd(f)?;
    let (u, v) = truncated_subspaces(&t, rank_tol);
    let cosines = svd(&u.tr_matmul(&v)?)?.s;
    let smallest = cosines.last().copied().unwrap_or(0.0);
    Ok((1.0 - smallest).clamp(0.0, 1.0))
}

/// Leading `r` columns of `U` and `V`, `r` the numerical rank.
pub(crate) fn truncated_subspaces(t: &SvdTriple, rank_tol: f64) -> (DenseMatrix, DenseMatrix) {
    let r = t.rank(rank_tol);
    (t.u.columns(0..r), t.v.columns(0..r))
}

/// The orthogonal `Q₀ = Q_l Q_rᵀ` from the SVD `uᵀv = Q_l Σ Q_rᵀ`.
///
/// It attains `‖v − u Q₀‖₂² = 2 (1 − σ_min(uᵀv))`, the best orthogonal
/// alignment of `u` onto `v`.
pub fn align_rotation(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            op: "align_rotation",
            expected: u.shape(),
            found: v.shape(),
        });
    }
    let t = svd(&u.tr_matmul(v)?)?;
    t.u.matmul(&t.v.transpose())
}
