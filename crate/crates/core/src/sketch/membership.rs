use crate::error::{Error, Result};
use crate::linalg::{numerical_rank, svd, DenseMatrix};

use super::symmetry::{near_symmetry_delta, RANK_TOL};
use super::SketchInstance;

/// Default band for floating-point membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// The three defining conditions of the ambiguity set, evaluated for one
/// candidate matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MembershipReport {
    pub rank_ok: bool,
    /// `‖AX − FX‖₂`.
    pub sketch_residual: f64,
    pub symmetry_delta: f64,
    pub in_set: bool,
}

/// Checks `rank(a) = k`, `aX = FX` and `a` being `ε`-near-symmetric.
///
/// The sketch residual passes when it is at most `tol · max(1, ‖FX‖₂)`; the
/// symmetry test allows `ε + tol`.
pub fn membership_check(
    a: &DenseMatrix,
    inst: &SketchInstance,
    tol: f64,
) -> Result<MembershipReport> {
    if a.shape() != inst.f().shape() {
        return Err(Error::DimensionMismatch {
            op: "membership_check",
            expected: inst.f().shape(),
            found: a.shape(),
        });
    }
    let rank_ok = numerical_rank(a, RANK_TOL) == inst.k();
    let fx = inst.f().matmul(inst.x())?;
    let ax = a.matmul(inst.x())?;
    let sketch_residual = svd(&ax.sub(&fx)?)?.sigma_max();
    let fx_norm = svd(&fx)?.sigma_max();
    let symmetry_delta = if a.is_zero() {
        1.0
    } else {
        near_symmetry_delta(a, RANK_TOL)?
    };
    let in_set = rank_ok
        && sketch_residual <= tol * fx_norm.max(1.0)
        && symmetry_delta <= inst.epsilon() + tol;
    Ok(MembershipReport {
        rank_ok,
        sketch_residual,
        symmetry_delta,
        in_set,
    })
}
