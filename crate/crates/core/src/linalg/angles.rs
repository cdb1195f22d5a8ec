use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{svd, DenseMatrix};
use crate::error::{Error, Result};
use crate::math::acos;

/// Principal angles between `range(u)` and `range(v)`, ascending, in
/// `[0, π/2]`. Both inputs must have orthonormal columns of equal shape.
///
/// The result does not depend on argument order: the pair is put in a
/// canonical order before the cosines are computed.
pub fn principal_angles(u: &DenseMatrix, v: &DenseMatrix) -> Result<Vec<f64>> {
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch {
            op: "principal_angles",
            expected: u.shape(),
            found: v.shape(),
        });
    }
    let (a, b) = match cmp_entries(u, v) {
        Ordering::Greater => (v, u),
        _ => (u, v),
    };
    let cosines = svd(&a.tr_matmul(b)?)?.s;
    Ok(cosines
        .into_iter()
        .map(|c| acos(c.clamp(-1.0, 1.0)))
        .collect())
}

fn cmp_entries(u: &DenseMatrix, v: &DenseMatrix) -> Ordering {
    u.as_slice()
        .iter()
        .zip(v.as_slice())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr_factor, Seed};
    use core::f64::consts::FRAC_PI_2;

    fn orthonormal(seed: u64, n: usize, k: usize) -> DenseMatrix {
        qr_factor(&Seed(seed).gaussian_matrix(n, k)).unwrap().0
    }

    #[test]
    fn identical_subspaces() {
        let u = orthonormal(1, 6, 3);
        for a in principal_angles(&u, &u).unwrap() {
            assert!(a.abs() < 1e-7);
        }
    }

    #[test]
    fn orthogonal_complements() {
        let e = DenseMatrix::identity(4);
        let u = e.columns(0..2);
        let v = e.columns(2..4);
        for a in principal_angles(&u, &v).unwrap() {
            assert!((a - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn random_pair_matches_direct_svd() {
        let u = orthonormal(3, 6, 2);
        let v = orthonormal(103, 6, 2);
        let angles = principal_angles(&u, &v).unwrap();
        let s = svd(&u.tr_matmul(&v).unwrap()).unwrap().s;
        for (a, c) in angles.iter().zip(&s) {
            assert!((a - c.clamp(-1.0, 1.0).acos()).abs() < 1e-12);
        }
        assert!(angles[0] <= angles[1]);
    }

    #[test]
    fn mismatched_shapes() {
        let u = orthonormal(1, 5, 2);
        let v = orthonormal(2, 5, 3);
        assert!(matches!(
            principal_angles(&u, &v),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
