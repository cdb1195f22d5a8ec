use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::linalg::{svd, DenseMatrix};
use crate::math::{acos, sqrt};

use super::symmetry::RANK_TOL;
use super::SketchInstance;

/// Both diameter bounds for the ambiguity set of an instance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    /// Absent when `c (√(2ε) + √(2δ)) >= 1`.
    pub upper: Option<f64>,
    pub lower: f64,
    /// `σ_max(XᵀV₀) / σ_min(XᵀV₀)²`.
    pub c_constant: f64,
    /// `‖FX‖₂`.
    pub fx_norm: f64,
}

/// Upper bound `4‖FX‖₂ · c²(√(2ε)+√(2δ)) / (1 − c(√(2ε)+√(2δ)))` on the
/// diameter, together with the lower bound for the same instance.
pub fn diameter_upper_bound(inst: &SketchInstance) -> Result<BoundReport> {
    let f = inst.f();
    let t = svd(f)?;
    let v0 = t.v.columns(0..inst.k());
    let xv = svd(&inst.x().tr_matmul(&v0)?)?;
    let smin = xv.s.last().copied().unwrap_or(0.0);
    if smin == 0.0 {
        return Err(Error::InvalidInstance("Xᵀ V₀ is singular"));
    }
    let c_constant = xv.sigma_max() / (smin * smin);
    let fx_norm = svd(&f.matmul(inst.x())?)?.sigma_max();

    let gap = sqrt(2.0 * inst.epsilon()) + sqrt(2.0 * inst.delta());
    let t_c = c_constant * gap;
    let upper = (t_c < 1.0).then(|| 4.0 * fx_norm * (c_constant * c_constant * gap) / (1.0 - t_c));
    let lower = diameter_lower_bound(f, inst.epsilon(), inst.delta())?;
    Ok(BoundReport {
        upper,
        lower,
        c_constant,
        fx_norm,
    })
}

/// `2 (σ_min²/σ_max) · (θ_ε − θ_δ) / (π/2 + θ_ε − θ_δ)` with
/// `θ_x = arccos(1 − x)`, over the nonzero singular values of `f`.
pub fn diameter_lower_bound(f: &DenseMatrix, epsilon: f64, delta: f64) -> Result<f64> {
    let (smin, smax) = extreme_singular_values(f)?;
    Ok(2.0 * (smin * smin / smax) * gap_ratio(epsilon, delta)?)
}

/// `(θ_ε − θ_δ) / (π/2 + θ_ε − θ_δ)`.
pub(crate) fn gap_ratio(epsilon: f64, delta: f64) -> Result<f64> {
    if !(0.0 <= delta && delta <= epsilon && epsilon <= 1.0) {
        return Err(Error::InvalidRange { delta, epsilon });
    }
    let gap = acos(1.0 - epsilon) - acos(1.0 - delta);
    Ok(gap / (FRAC_PI_2 + gap))
}

/// Smallest and largest nonzero singular values.
pub(crate) fn extreme_singular_values(f: &DenseMatrix) -> Result<(f64, f64)> {
    if f.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let t = svd(f)?;
    let smin = t.sigma_min_nonzero(RANK_TOL).ok_or(Error::ZeroMatrix)?;
    Ok((smin, t.sigma_max()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr_factor, Seed};

    #[test]
    fn lower_vanishes_without_gap() {
        let f = DenseMatrix::diag(&[3.0, 1.0, 0.0]);
        assert_eq!(diameter_lower_bound(&f, 0.3, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn lower_full_gap_unit_singular_values() {
        let f = DenseMatrix::diag(&[1.0, 1.0, 0.0, 0.0]);
        assert!((diameter_lower_bound(&f, 1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lower_embedded_diag() {
        // 2·(1/2)·(π/3)/(π/2 + π/3) = 2/5
        let f = DenseMatrix::diag(&[2.0, 1.0, 0.0, 0.0, 0.0]);
        let v = diameter_lower_bound(&f, 0.5, 0.0).unwrap();
        assert!((v - 0.4).abs() < 1e-14, "{v}");
    }

    #[test]
    fn lower_rejects_bad_ordering() {
        let f = DenseMatrix::identity(2);
        assert!(matches!(
            diameter_lower_bound(&f, 0.1, 0.2),
            Err(Error::InvalidRange { .. })
        ));
        assert!(diameter_lower_bound(&f, 1.5, 0.2).is_err());
        assert!(diameter_lower_bound(&f, 0.5, -0.1).is_err());
    }

    #[test]
    fn upper_zero_for_exactly_symmetric() {
        let inst = SketchInstance::near_symmetric(8, 2, 4, 0.0, 0.0, Seed(3)).unwrap();
        let r = diameter_upper_bound(&inst).unwrap();
        assert_eq!(r.upper, Some(0.0));
        assert_eq!(r.lower, 0.0);
    }

    #[test]
    fn upper_absent_when_precondition_fails() {
        let inst = SketchInstance::near_symmetric(8, 2, 4, 0.3, 0.6, Seed(3)).unwrap();
        let r = diameter_upper_bound(&inst).unwrap();
        assert!(r.c_constant * ((2.0f64 * 0.6).sqrt() + (2.0f64 * 0.3).sqrt()) >= 1.0);
        assert_eq!(r.upper, None);
        assert!(r.lower > 0.0);
    }

    #[test]
    fn upper_recomputed_from_raw_factors() {
        let inst = SketchInstance::near_symmetric(8, 2, 4, 0.0, 0.02, Seed(6)).unwrap();
        let r = diameter_upper_bound(&inst).unwrap();

        // independent route: V₀ from an orthonormalized Fᵀ-range, norms from
        // the Gram eigenvalues of the small factors
        let ft = inst.f().transpose();
        let v0 = qr_factor(&ft.matmul(&Seed(77).gaussian_matrix(8, 2)).unwrap())
            .unwrap()
            .0;
        let xv = inst.x().tr_matmul(&v0).unwrap();
        let s = svd(&xv).unwrap().s;
        let c = s[0] / (s[1] * s[1]);
        let fx = svd(&inst.f().matmul(inst.x()).unwrap()).unwrap().s[0];
        let expected = 4.0 * fx * c * c * 0.04f64.sqrt() / (1.0 - c * 0.04f64.sqrt());
        assert!((r.c_constant - c).abs() < 1e-12 * c);
        let upper = r.upper.expect("precondition holds");
        assert!(
            (upper - expected).abs() < 1e-12 * expected,
            "{upper} vs {expected}"
        );
    }
}
