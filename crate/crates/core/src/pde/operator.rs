use alloc::vec::Vec;

use super::{BandMatrix, BandedLu, Grid};
use crate::error::{Error, Result};

/// Constant coefficients of `nu Δu + c·∇u + r u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub nu: f64,
    /// `c[1]` is ignored in 1D.
    pub c: [f64; 2],
    pub r: f64,
}

/// Centered finite-difference stencil with its LU factorization.
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    grid: Grid,
    coeffs: Coefficients,
    band: BandMatrix,
    lu: BandedLu,
}

/// Residual measures of a computed solution `u` of `A u = b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResidual {
    /// `‖A u − b‖ / ‖b‖`.
    pub relative: f64,
    /// Normwise backward error `‖A u − b‖∞ / (‖A‖∞ ‖u‖∞ + ‖b‖∞)`.
    pub backward: f64,
}

impl DiscreteOperator {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn band(&self) -> &BandMatrix {
        &self.band
    }

    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.band.mul_vec(u)
    }

    pub fn residual(&self, u: &[f64], rhs: &[f64]) -> SolveResidual {
        let au = self.apply(u);
        let mut sq = 0.0;
        let mut rinf: f64 = 0.0;
        for (a, b) in au.iter().zip(rhs) {
            let d = a - b;
            sq += d * d;
            rinf = rinf.max(d.abs());
        }
        let bnorm = crate::linalg::norm2(rhs);
        let binf = rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let uinf = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let rnorm = crate::math::sqrt(sq);
        let denom = self.band.norm_inf() * uinf + binf;
        SolveResidual {
            relative: if bnorm > 0.0 { rnorm / bnorm } else { rnorm },
            backward: if denom > 0.0 { rinf / denom } else { 0.0 },
        }
    }
}

fn check_peclet(nu: f64, c: f64, h: f64) -> Result<()> {
    let peclet = c.abs() * h / (2.0 * nu.abs());
    if !(peclet < 1.0) {
        return Err(Error::PecletViolation { peclet, c });
    }
    Ok(())
}

fn check_finite(nu: f64, c: &[f64], r: f64) -> Result<()> {
    if nu == 0.0 {
        return Err(Error::InvalidArgument(
            "diffusion coefficient nu must be nonzero",
        ));
    }
    if !nu.is_finite() || !r.is_finite() || c.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("coefficients must be finite"));
    }
    Ok(())
}

/// Tridiagonal `nu D² + c D + r` on the interior of `[0, 1]`.
pub fn assemble_1d(nu: f64, c: f64, r: f64, grid: Grid) -> Result<DiscreteOperator> {
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument("assemble_1d needs a 1D grid"));
    }
    check_finite(nu, &[c], r)?;
    let h = grid.spacing();
    check_peclet(nu, c, h)?;
    let m = grid.points_per_axis();
    let diff = nu / (h * h);
    let adv = c / (2.0 * h);
    let mut band = BandMatrix::zeros(m, 1, 1);
    for i in 0..m {
        band.set(i, i, -2.0 * diff + r);
        if i > 0 {
            band.set(i, i - 1, diff - adv);
        }
        if i + 1 < m {
            band.set(i, i + 1, diff + adv);
        }
    }
    let lu = BandedLu::factor(&band)?;
    Ok(DiscreteOperator {
        grid,
        coeffs: Coefficients { nu, c: [c, 0.0], r },
        band,
        lu,
    })
}

/// Five-point `nu Δ + c·∇ + r` on the interior of `[0, 1]²`.
pub fn assemble_2d(nu: f64, c: [f64; 2], r: f64, grid: Grid) -> Result<DiscreteOperator> {
    if grid.dim() != 2 {
        return Err(Error::InvalidArgument("assemble_2d needs a 2D grid"));
    }
    check_finite(nu, &c, r)?;
    let h = grid.spacing();
    check_peclet(nu, c[0], h)?;
    check_peclet(nu, c[1], h)?;
    let m = grid.points_per_axis();
    let diff = nu / (h * h);
    let ax = c[0] / (2.0 * h);
    let ay = c[1] / (2.0 * h);
    let n = m * m;
    let mut band = BandMatrix::zeros(n, m, m);
    for i in 0..m {
        for j in 0..m {
            let p = i * m + j;
            band.set(p, p, -4.0 * diff + r);
            if i > 0 {
                band.set(p, p - m, diff - ax);
            }
            if i + 1 < m {
                band.set(p, p + m, diff + ax);
            }
            if j > 0 {
                band.set(p, p - 1, diff - ay);
            }
            if j + 1 < m {
                band.set(p, p + 1, diff + ay);
            }
        }
    }
    let lu = BandedLu::factor(&band)?;
    Ok(DiscreteOperator {
        grid,
        coeffs: Coefficients { nu, c, r },
        band,
        lu,
    })
}

/// Solves `A u = rhs` with the cached factorization.
pub fn solve(op: &DiscreteOperator, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = op.grid.num_nodes();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch {
            op: "solve",
            expected: (n, 1),
            found: (rhs.len(), 1),
        });
    }
    let mut u = rhs.to_vec();
    op.lu.solve_in_place(&mut u);
    Ok(u)
}
