use alloc::vec::Vec;
use core::f64::consts::PI;

use super::Grid;
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::math::{sin, sqrt};

/// Dirichlet-Laplacian eigenpairs sampled on a grid.
///
/// Column `k` of `phis` is `φ_k` at the nodes times `√quad_weight`, so
/// Euclidean norms of coefficient vectors are discrete L² norms.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    pub grid: Grid,
    /// Ascending.
    pub lambdas: Vec<f64>,
    pub phis: DenseMatrix,
    /// Frequency pair of each mode; the second entry is 0 in 1D.
    pub frequencies: Vec<(usize, usize)>,
}

impl EigenBasis {
    pub fn modes(&self) -> usize {
        self.lambdas.len()
    }

    pub fn phi(&self, k: usize) -> Vec<f64> {
        self.phis.col(k)
    }
}

/// `φ_k(x) = √2 sin(kπx)`, `λ_k = π²k²`, `k = 1..=n_modes`.
///
/// Requires `n_modes < points_per_axis / 2`.
pub fn sine_basis_1d(n_modes: usize, grid: Grid) -> Result<EigenBasis> {
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument("sine_basis_1d needs a 1D grid"));
    }
    let m = grid.points_per_axis();
    if 2 * n_modes >= m {
        return Err(Error::Underresolved {
            modes: n_modes,
            points: m,
        });
    }
    let scale = sqrt(2.0 * grid.quad_weight());
    let phis = DenseMatrix::from_fn(m, n_modes, |i, k| {
        scale * sin((k + 1) as f64 * PI * grid.axis_coord(i))
    });
    let lambdas = (1..=n_modes).map(|k| PI * PI * (k * k) as f64).collect();
    Ok(EigenBasis {
        grid,
        lambdas,
        phis,
        frequencies: (1..=n_modes).map(|k| (k, 0)).collect(),
    })
}

/// Tensor modes `2 sin(iπx) sin(jπy)`, `λ = π²(i² + j²)`, the first
/// `n_modes` in ascending `λ` with ties broken by `(i, j)`.
///
/// Requires every used frequency to be below `points_per_axis / 2`.
pub fn sine_basis_2d(n_modes: usize, grid: Grid) -> Result<EigenBasis> {
    if grid.dim() != 2 {
        return Err(Error::InvalidArgument("sine_basis_2d needs a 2D grid"));
    }
    let m = grid.points_per_axis();
    let frequencies = lowest_tensor_frequencies(n_modes);
    let max_freq = frequencies
        .iter()
        .map(|(i, j)| *i.max(j))
        .max()
        .unwrap_or(0);
    if 2 * max_freq >= m {
        return Err(Error::Underresolved {
            modes: n_modes,
            points: m,
        });
    }
    // per-axis tables, sin(iπ x_a) for every used frequency
    let table: Vec<Vec<f64>> = (0..=max_freq)
        .map(|f| {
            (0..m)
                .map(|a| sin(f as f64 * PI * grid.axis_coord(a)))
                .collect()
        })
        .collect();
    let scale = 2.0 * grid.spacing();
    let phis = DenseMatrix::from_fn(m * m, n_modes, |idx, k| {
        let (fi, fj) = frequencies[k];
        scale * table[fi][idx / m] * table[fj][idx % m]
    });
    let lambdas = frequencies
        .iter()
        .map(|(i, j)| PI * PI * (i * i + j * j) as f64)
        .collect();
    Ok(EigenBasis {
        grid,
        lambdas,
        phis,
        frequencies,
    })
}

/// The `n` pairs `(i, j)`, `i, j >= 1`, with smallest `i² + j²`.
fn lowest_tensor_frequencies(n: usize) -> Vec<(usize, usize)> {
    if n == 0 {
        return Vec::new();
    }
    // grow the radius until the quarter disc holds n lattice points; every
    // pair with i² + j² <= R² then lies in the box [1, R]²
    let mut radius = 2usize;
    loop {
        let r2 = radius * radius;
        let mut pairs: Vec<(usize, usize)> = (1..=radius)
            .flat_map(|i| (1..=radius).map(move |j| (i, j)))
            .filter(|(i, j)| i * i + j * j <= r2)
            .collect();
        if pairs.len() >= n {
            pairs.sort_by_key(|&(i, j)| (i * i + j * j, i, j));
            pairs.truncate(n);
            return pairs;
        }
        radius *= 2;
    }
}
