use super::{EigenBasis, Grid};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::math::{exp, expm1};

/// Green's function of `−u″ + c u′ = f` on `[0, 1]` with `u(0) = u(1) = 0`:
///
/// ```text
/// G(x, y) = (e^{cx} − 1)(e^{c(1−y)} − 1) / (c (e^c − 1))        x ≤ y
///         = (1 − e^{−cy})(e^c − e^{cx}) / (c (e^c − 1))         x ≥ y
/// ```
///
/// Each branch is evaluated in a form that cannot overflow for the sign of
/// `c`. Below `|c| = 1e-8` the limit `min(x,y)(1 − max(x,y))` is returned.
pub fn greens_exact_convdiff(c: f64, x: f64, y: f64) -> f64 {
    if c.abs() < 1e-8 {
        return x.min(y) * (1.0 - x.max(y));
    }
    if c > 0.0 {
        let den = c * -expm1(-c);
        if x <= y {
            exp(c * (x - y)) * -expm1(-c * x) * -expm1(-c * (1.0 - y)) / den
        } else {
            -expm1(-c * y) * -expm1(-c * (1.0 - x)) / den
        }
    } else {
        let den = c * expm1(c);
        if x <= y {
            expm1(c * x) * expm1(c * (1.0 - y)) / den
        } else {
            exp(c * (x - y)) * expm1(c * y) * expm1(c * (1.0 - x)) / den
        }
    }
}

/// Kernel samples `values[i][j] ≈ G(x_i, y_j)` on a 1D grid.
#[derive(Debug, Clone)]
pub struct GreensSample {
    pub grid: Grid,
    pub values: DenseMatrix,
    /// Convection coefficient, when the kernel comes from `−u″ + c u′`.
    pub c: Option<f64>,
}

impl GreensSample {
    /// Samples [`greens_exact_convdiff`] at the grid nodes.
    pub fn exact(c: f64, grid: Grid) -> Self {
        let m = grid.points_per_axis();
        let values = DenseMatrix::from_fn(m, m, |i, j| {
            greens_exact_convdiff(c, grid.axis_coord(i), grid.axis_coord(j))
        });
        Self {
            grid,
            values,
            c: Some(c),
        }
    }

    /// `‖self − other‖_F / ‖other‖_F`.
    pub fn relative_error(&self, other: &GreensSample) -> Result<f64> {
        let diff = self.values.sub(&other.values)?;
        Ok(diff.frobenius_norm() / other.values.frobenius_norm())
    }
}

/// Kernel of `A P_n`, `G_n(x, y) = Σ_k (Aφ_k)(x) φ_k(y)`, from responses
/// `u_k = A φ_k` stored in the basis' `√weight` scaling.
pub fn greens_kernel_from_responses(
    basis: &EigenBasis,
    responses: &DenseMatrix,
) -> Result<GreensSample> {
    let grid = basis.grid;
    if grid.dim() != 1 {
        return Err(Error::InvalidArgument("kernel samples need a 1D grid"));
    }
    let nodes = grid.num_nodes();
    let n = responses.cols();
    if responses.rows() != nodes || n > basis.modes() {
        return Err(Error::DimensionMismatch {
            op: "greens_kernel_from_responses",
            expected: (nodes, basis.modes()),
            found: responses.shape(),
        });
    }
    let w = grid.quad_weight();
    let phis = basis.phis.columns(0..n);
    let values = responses.matmul(&phis.transpose())?.scale(1.0 / w);
    Ok(GreensSample {
        grid,
        values,
        c: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::{assemble_1d, sine_basis_1d, solve};

    #[test]
    fn zero_convection_limit() {
        assert_eq!(greens_exact_convdiff(0.0, 0.25, 0.5), 0.125);
        assert_eq!(greens_exact_convdiff(0.0, 0.5, 0.25), 0.125);
        // the expm1 branches approach the limit continuously
        for c in [1e-7, -1e-7, 1e-5] {
            let g = greens_exact_convdiff(c, 0.25, 0.5);
            assert!((g - 0.125).abs() < 1e-5, "{c}: {g}");
        }
    }

    #[test]
    fn vanishes_on_boundary() {
        for c in [-10.0, -1.0, 0.0, 3.0, 20.0] {
            for k in 0..=10 {
                let y = k as f64 / 10.0;
                assert_eq!(greens_exact_convdiff(c, 0.0, y), 0.0);
                assert!(greens_exact_convdiff(c, 1.0, y).abs() < 1e-15);
                assert!(greens_exact_convdiff(c, y, 0.0).abs() < 1e-15);
                assert!(greens_exact_convdiff(c, y, 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn branches_agree_on_diagonal() {
        for c in [-7.0, -0.5, 0.5, 7.0] {
            for k in 1..10 {
                let x = k as f64 / 10.0;
                let lo = greens_exact_convdiff(c, x, x);
                let hi = greens_exact_convdiff(c, x + 1e-13, x);
                assert!((lo - hi).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn large_convection_stays_finite() {
        for c in [-800.0, 800.0] {
            for (x, y) in [(0.3, 0.6), (0.6, 0.3), (0.5, 0.5)] {
                let g = greens_exact_convdiff(c, x, y);
                assert!(g.is_finite() && g >= 0.0);
            }
        }
    }

    #[test]
    fn adjoint_kernel_is_transpose() {
        for c in [1.0, 5.0, 10.0] {
            for i in 0..50 {
                for j in 0..50 {
                    let x = i as f64 / 49.0;
                    let y = j as f64 / 49.0;
                    let a = greens_exact_convdiff(c, x, y);
                    let b = greens_exact_convdiff(-c, y, x);
                    assert!((a - b).abs() <= 1e-12, "c={c} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn matches_delta_column_solve() {
        let m = 999;
        let g = Grid::line(m);
        let h = g.spacing();
        let c = 5.0;
        let op = assemble_1d(-1.0, c, 0.0, g).unwrap();
        for j in [199, 499, 799] {
            let mut rhs = alloc::vec![0.0; m];
            rhs[j] = 1.0 / h;
            let u = solve(&op, &rhs).unwrap();
            let y = g.axis_coord(j);
            for (i, ui) in u.iter().enumerate() {
                let x = g.axis_coord(i);
                let exact = greens_exact_convdiff(c, x, y);
                let tol = if i.abs_diff(j) <= 2 {
                    5.0 * h
                } else {
                    50.0 * h * h
                };
                assert!((ui - exact).abs() < tol, "j={j} i={i}: {ui} vs {exact}");
            }
        }
    }

    #[test]
    fn identity_responses_give_symmetric_kernel() {
        let g = Grid::line(120);
        let basis = sine_basis_1d(30, g).unwrap();
        let k = greens_kernel_from_responses(&basis, &basis.phis).unwrap();
        let v = &k.values;
        for i in 0..120 {
            for j in 0..120 {
                assert!((v.get(i, j) - v.get(j, i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pseudo_inverse_kernel() {
        let g = Grid::line(100);
        let basis = sine_basis_1d(20, g).unwrap();
        let inv: alloc::vec::Vec<f64> = basis.lambdas.iter().map(|l| 1.0 / l).collect();
        let resp = basis.phis.scale_columns(&inv);
        let k = greens_kernel_from_responses(&basis, &resp).unwrap();
        for i in 0..100 {
            let x = g.axis_coord(i);
            for j in 0..100 {
                let y = g.axis_coord(j);
                let direct: f64 = (1..=20)
                    .map(|f| {
                        let f = f as f64 * core::f64::consts::PI;
                        2.0 * (f * x).sin() * (f * y).sin() / (f * f)
                    })
                    .sum();
                assert!((k.values.get(i, j) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn laplacian_kernel_converges() {
        let g = Grid::line(1000);
        let basis = sine_basis_1d(200, g).unwrap();
        let op = assemble_1d(-1.0, 0.0, 0.0, g).unwrap();
        let cols: alloc::vec::Vec<_> = (0..200)
            .map(|k| solve(&op, &basis.phi(k)).unwrap())
            .collect();
        let resp = DenseMatrix::from_columns(1000, &cols).unwrap();
        let approx = greens_kernel_from_responses(&basis, &resp).unwrap();
        let err = approx.relative_error(&GreensSample::exact(0.0, g)).unwrap();
        assert!(err < 1e-2, "{err}");
    }

    #[test]
    fn shape_checked() {
        let g = Grid::line(40);
        let basis = sine_basis_1d(5, g).unwrap();
        let bad = DenseMatrix::zeros(39, 5);
        assert!(greens_kernel_from_responses(&basis, &bad).is_err());
    }
}
