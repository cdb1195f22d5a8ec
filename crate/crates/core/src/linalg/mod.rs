//! Dense real linear algebra: QR, one-sided Jacobi SVD, block power
//! iteration for spectral norms, principal angles and numerical rank.

mod angles;
mod matrix;
mod norm;
mod qr;
mod rng;
mod svd;

pub use angles::principal_angles;
pub use matrix::DenseMatrix;
pub use norm::{spectral_norm, top_eigenvalue_psd};
pub use qr::qr_factor;
pub use rng::Seed;
pub use svd::{numerical_rank, svd, SvdTriple};

/// Euclidean norm of a slice.
pub fn norm2(v: &[f64]) -> f64 {
    // scaled to avoid overflow/underflow on extreme inputs
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * crate::math::sqrt(s)
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
