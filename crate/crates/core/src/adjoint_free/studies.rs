use alloc::vec::Vec;

use super::curves::least_squares;
use super::{convergence_table, query_forward, LinearFit, ResponseMatrix};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::math::sqrt;
use crate::pde::{assemble_1d, sine_basis_1d, DiscreteOperator, EigenBasis, GreensSample, Grid};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    /// The convection coefficient `c` of `−u″ + c u′`.
    pub c_mag: f64,
    pub err_at_n: f64,
    pub m_norm_final: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub n_fixed: usize,
}

impl SweepTable {
    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].err_at_n > w[0].err_at_n)
    }

    /// Rank correlation of `err_at_n` with `c_mag`.
    pub fn spearman(&self) -> f64 {
        let (c, e): (Vec<f64>, Vec<f64>) = self.rows.iter().map(|r| (r.c_mag, r.err_at_n)).unzip();
        spearman(&c, &e)
    }

    /// Least-squares line of `err_at_n` against `c_mag`.
    pub fn linear_fit(&self) -> LinearFit {
        let (c, e): (Vec<f64>, Vec<f64>) = self.rows.iter().map(|r| (r.c_mag, r.err_at_n)).unzip();
        linear_fit(&c, &e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GreensErrorRow {
    pub n: usize,
    pub rel_l2_error: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    least_squares(xs, ys)
}

/// Pearson correlation of the (tie-averaged) ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = xs.len() as f64;
    let m = (n + 1.0) / 2.0;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - m) * (b - m);
        sxx += (a - m) * (a - m);
        syy += (b - m) * (b - m);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / sqrt(sxx * syy)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = alloc::vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

fn check_sweep_values(c_values: &[f64], grid: Grid) -> Result<()> {
    if c_values.is_empty() || c_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(
            "c_values must be strictly ascending",
        ));
    }
    let h = grid.spacing();
    // ascending order, so the first violation is the smallest offending c
    for &c in c_values {
        let peclet = c.abs() * h / 2.0;
        if !(peclet < 1.0) {
            return Err(Error::PecletViolation { peclet, c });
        }
    }
    Ok(())
}

/// [`perturbation_sweep`] with a caller-supplied query driver.
pub fn perturbation_sweep_with<Q>(
    c_values: &[f64],
    n_fixed: usize,
    n_queries: usize,
    grid: Grid,
    mut query: Q,
) -> Result<SweepTable>
where
    Q: FnMut(&DiscreteOperator, &EigenBasis, usize) -> Result<ResponseMatrix>,
{
    check_sweep_values(c_values, grid)?;
    if n_fixed == 0 || n_fixed >= n_queries {
        return Err(Error::InvalidArgument("need 1 <= n_fixed < n_queries"));
    }
    let basis = sine_basis_1d(n_queries, grid)?;
    let mut rows = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let op = assemble_1d(-1.0, c, 0.0, grid)?;
        let resp = query(&op, &basis, n_queries)?;
        let table = convergence_table(&resp, &[n_fixed])?;
        rows.push(SweepRow {
            c_mag: c,
            err_at_n: table.rows[0].err,
            m_norm_final: table.m_norm_final,
        });
    }
    Ok(SweepTable { rows, n_fixed })
}

/// `err(n_fixed)` and `‖M_N‖` of `−u″ + c u′` for each `c`.
pub fn perturbation_sweep(
    c_values: &[f64],
    n_fixed: usize,
    n_queries: usize,
    grid: Grid,
) -> Result<SweepTable> {
    perturbation_sweep_with(c_values, n_fixed, n_queries, grid, query_forward)
}

/// [`greens_error_study`] with a caller-supplied query driver.
pub fn greens_error_study_with<Q>(
    c: f64,
    n_list: &[usize],
    grid: Grid,
    mut query: Q,
) -> Result<Vec<GreensErrorRow>>
where
    Q: FnMut(&DiscreteOperator, &EigenBasis, usize) -> Result<ResponseMatrix>,
{
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "n_list must be strictly ascending positive counts",
        ));
    }
    let n_max = *n_list.last().unwrap_or(&0);
    let basis = sine_basis_1d(n_max, grid)?;
    let op = assemble_1d(-1.0, c, 0.0, grid)?;
    let resp = query(&op, &basis, n_max)?;
    let exact = GreensSample::exact(c, grid).values;
    let exact_norm = exact.frobenius_norm();
    let m = grid.points_per_axis();
    let w = grid.quad_weight();

    // G_n = Σ_{k<n} u_k φ_kᵀ / w, accumulated as n grows
    let mut kernel = DenseMatrix::zeros(m, m);
    let mut done = 0;
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        for k in done..n {
            let u = resp.columns().col(k);
            let phi = basis.phi(k);
            for (i, ui) in u.iter().enumerate() {
                let a = ui / w;
                for (g, p) in kernel.row_mut(i).iter_mut().zip(&phi) {
                    *g += a * p;
                }
            }
        }
        done = n;
        let diff = kernel.sub(&exact)?;
        out.push(GreensErrorRow {
            n,
            rel_l2_error: diff.frobenius_norm() / exact_norm,
        });
    }
    Ok(out)
}

/// Relative Frobenius distance between the `A P_n` kernel of `−u″ + c u′`
/// and the closed-form Green's function, for each `n` in `n_list`.
pub fn greens_error_study(c: f64, n_list: &[usize], grid: Grid) -> Result<Vec<GreensErrorRow>> {
    greens_error_study_with(c, n_list, grid, query_forward)
}
