//! Drivers that wire the core operations into the studies the CLI runs.

use adjfree_core::adjoint_free::{
    bound_certificate, convergence_table, default_n_list, greens_error_study_with, lastar_curve,
    perturbation_sweep_with, pseudo_inverse_reference, rate_fit, CertificateReport,
    ConvergenceTable, GreensErrorRow, ResponseMatrix, SweepTable,
};
use adjfree_core::pde::{
    assemble_1d, assemble_2d, greens_kernel_from_responses, sine_basis_1d, sine_basis_2d,
    Coefficients, EigenBasis, GreensSample, Grid,
};
use adjfree_core::sketch::{
    construct_extremal_pair, diameter_upper_bound, membership_check, toeplitz_from_two_queries,
    MembershipReport, SketchInstance, MEMBERSHIP_TOL,
};
use adjfree_core::{DenseMatrix, Error, Result, Seed};
use serde::Serialize;

use crate::parallel::par_query_forward;

/// Window of the decay-rate fit for each dimension.
pub fn rate_window(dim: usize) -> (usize, usize) {
    if dim == 1 {
        (32, 512)
    } else {
        (16, 256)
    }
}

#[derive(Debug, Clone)]
pub struct ConvergeConfig {
    pub dim: usize,
    /// `None` queries the pseudo-inverse of the prior instead of a PDE.
    pub coeffs: Option<Coefficients>,
    pub grid: usize,
    pub queries: usize,
    /// Defaults to [`default_n_list`].
    pub n_list: Option<Vec<usize>>,
    pub threads: usize,
}

#[derive(Debug, Clone)]
pub struct ConvergeOutcome {
    pub table: ConvergenceTable,
    pub certificate: CertificateReport,
    /// `(slope, r2)`, absent when the window holds fewer than 5 rows.
    pub rate: Option<(f64, f64)>,
    pub monotone: bool,
    pub worst_backward_error: f64,
}

fn basis_for(dim: usize, grid: usize, modes: usize) -> Result<EigenBasis> {
    match dim {
        1 => sine_basis_1d(modes, Grid::line(grid)),
        2 => sine_basis_2d(modes, Grid::square(grid)),
        _ => Err(Error::InvalidArgument("dimension must be 1 or 2")),
    }
}

/// Responses of the configured operator, or of `L†` when `coeffs` is `None`.
pub fn responses(cfg: &ConvergeConfig) -> Result<(EigenBasis, ResponseMatrix)> {
    if cfg.grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive"));
    }
    let basis = basis_for(cfg.dim, cfg.grid, cfg.queries)?;
    let resp = match cfg.coeffs {
        None => pseudo_inverse_reference(&basis, cfg.queries)?,
        Some(k) => {
            let op = if cfg.dim == 1 {
                assemble_1d(k.nu, k.c[0], k.r, basis.grid)?
            } else {
                assemble_2d(k.nu, k.c, k.r, basis.grid)?
            };
            par_query_forward(&op, &basis, cfg.queries, cfg.threads)?
        }
    };
    Ok((basis, resp))
}

pub fn run_convergence(cfg: &ConvergeConfig) -> Result<ConvergeOutcome> {
    let (_, resp) = responses(cfg)?;
    let n_list = cfg
        .n_list
        .clone()
        .unwrap_or_else(|| default_n_list(cfg.queries));
    let table = convergence_table(&resp, &n_list)?;
    let (lo, hi) = rate_window(cfg.dim);
    let rate = match rate_fit(&table, lo, hi) {
        Ok(r) => Some(r),
        Err(Error::InsufficientData { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ConvergeOutcome {
        certificate: bound_certificate(&table),
        monotone: table.is_monotone(1e-12),
        worst_backward_error: resp.worst_backward_error(),
        rate,
        table,
    })
}

/// `‖M_n‖` over `n_list`, by default [`default_n_list`] plus `N` itself.
pub fn run_lastar(cfg: &ConvergeConfig) -> Result<(Vec<usize>, Vec<f64>)> {
    let (_, resp) = responses(cfg)?;
    let n_list = cfg.n_list.clone().unwrap_or_else(|| {
        let mut l = default_n_list(cfg.queries);
        l.push(cfg.queries);
        l
    });
    let m = lastar_curve(&resp, &n_list)?;
    Ok((n_list, m))
}

pub fn run_greens(
    c: f64,
    grid: usize,
    n_list: &[usize],
    threads: usize,
) -> Result<Vec<GreensErrorRow>> {
    greens_error_study_with(c, n_list, Grid::line(grid), |op, b, n| {
        par_query_forward(op, b, n, threads)
    })
}

/// The `A P_n` kernel of `−u″ + c u′` and the exact one on the same grid.
pub fn greens_kernels(
    c: f64,
    grid: usize,
    n: usize,
    threads: usize,
) -> Result<(GreensSample, GreensSample)> {
    let g = Grid::line(grid);
    let basis = sine_basis_1d(n, g)?;
    let op = assemble_1d(-1.0, c, 0.0, g)?;
    let resp = par_query_forward(&op, &basis, n, threads)?;
    let mut approx = greens_kernel_from_responses(&basis, resp.columns())?;
    approx.c = Some(c);
    Ok((approx, GreensSample::exact(c, g)))
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub table: SweepTable,
    /// `err_at_n <= m_norm_final / λ_{n+1}` on every row.
    pub certificate_ok: bool,
}

pub fn run_sweep(
    c_values: &[f64],
    n_fixed: usize,
    queries: usize,
    grid: usize,
    threads: usize,
) -> Result<SweepOutcome> {
    let g = Grid::line(grid);
    let table = perturbation_sweep_with(c_values, n_fixed, queries, g, |op, b, n| {
        par_query_forward(op, b, n, threads)
    })?;
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let lambda_next = pi2 * ((n_fixed + 1) * (n_fixed + 1)) as f64;
    let certificate_ok = table
        .rows
        .iter()
        .all(|r| r.err_at_n <= r.m_norm_final / lambda_next * (1.0 + 1e-8));
    Ok(SweepOutcome {
        table,
        certificate_ok,
    })
}

#[derive(Debug, Clone)]
pub struct ToeplitzOutcome {
    pub recovered: DenseMatrix,
    pub queries: usize,
    pub max_abs_err: f64,
}

/// Random Toeplitz matrix with symbol entries uniform on `[−1, 1)`.
pub fn random_toeplitz(n: usize, seed: Seed) -> DenseMatrix {
    // symbol[n − 1 + d] is the entry on diagonal d = j − i
    let symbol = seed.uniform_vec(2 * n - 1, -1.0, 1.0);
    DenseMatrix::from_fn(n, n, |i, j| symbol[n - 1 + j - i])
}

pub fn toeplitz_demo(n: usize, seed: Seed) -> Result<ToeplitzOutcome> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive"));
    }
    let truth = random_toeplitz(n, seed);
    let mut queries = 0;
    let recovered = toeplitz_from_two_queries(
        |x| {
            queries += 1;
            truth.mul_vec(x)
        },
        n,
    );
    let max_abs_err = recovered.sub(&truth)?.max_abs();
    Ok(ToeplitzOutcome {
        recovered,
        queries,
        max_abs_err,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SketchConfig {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub delta: f64,
    pub epsilon: f64,
    pub seed: Seed,
}

impl SketchConfig {
    pub fn instance(&self) -> Result<SketchInstance> {
        SketchInstance::near_symmetric(self.n, self.k, self.s, self.delta, self.epsilon, self.seed)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub eta: f64,
    pub separation: f64,
    pub lower: f64,
    pub upper: Option<f64>,
    pub b_plus: MembershipReport,
    pub b_minus: MembershipReport,
    /// Both members in the set and `lower − 1e-9 <= separation <= upper + 1e-9`.
    pub passed: bool,
}

pub fn witness_report(inst: &SketchInstance) -> Result<WitnessReport> {
    let pair = construct_extremal_pair(inst)?;
    let bounds = diameter_upper_bound(inst)?;
    let separation = pair.separation()?;
    let b_plus = membership_check(&pair.b_plus, inst, MEMBERSHIP_TOL)?;
    let b_minus = membership_check(&pair.b_minus, inst, MEMBERSHIP_TOL)?;
    let passed = b_plus.in_set
        && b_minus.in_set
        && separation >= bounds.lower - 1e-9
        && bounds.upper.is_none_or(|u| separation <= u + 1e-9);
    Ok(WitnessReport {
        eta: pair.eta,
        separation,
        lower: bounds.lower,
        upper: bounds.upper,
        b_plus,
        b_minus,
        passed,
    })
}
