use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::pde::{solve, DiscreteOperator, EigenBasis, Grid, SolveResidual};

/// Largest normwise backward error accepted for a query solve.
pub const BACKWARD_TOL: f64 = 1e-10;

/// Responses `u_k = A φ_k` for the first `N` basis functions, in the
/// basis' `√weight` scaling.
#[derive(Debug, Clone)]
pub struct ResponseMatrix {
    grid: Grid,
    lambdas: Vec<f64>,
    columns: DenseMatrix,
    /// One entry per column; `None` for synthetic responses.
    residuals: Option<Vec<SolveResidual>>,
}

impl ResponseMatrix {
    /// Wraps precomputed columns. `columns.cols()` must not exceed the
    /// number of basis modes.
    pub fn from_parts(
        basis: &EigenBasis,
        columns: DenseMatrix,
        residuals: Option<Vec<SolveResidual>>,
    ) -> Result<Self> {
        let n = columns.cols();
        if columns.rows() != basis.grid.num_nodes() || n > basis.modes() {
            return Err(Error::DimensionMismatch {
                op: "ResponseMatrix",
                expected: (basis.grid.num_nodes(), basis.modes()),
                found: columns.shape(),
            });
        }
        if let Some(r) = &residuals {
            if r.len() != n {
                return Err(Error::InvalidArgument("one residual per column required"));
            }
        }
        Ok(Self {
            grid: basis.grid,
            lambdas: basis.lambdas[..n].to_vec(),
            columns,
            residuals,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn n_queries(&self) -> usize {
        self.columns.cols()
    }

    /// `λ_1..λ_N` of the queried modes.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn columns(&self) -> &DenseMatrix {
        &self.columns
    }

    pub fn residuals(&self) -> Option<&[SolveResidual]> {
        self.residuals.as_deref()
    }

    /// Worst backward error over all columns, 0 for synthetic responses.
    pub fn worst_backward_error(&self) -> f64 {
        self.residuals
            .iter()
            .flatten()
            .fold(0.0, |m, r| m.max(r.backward))
    }
}

/// Solves `A u = φ_k` (0-based `k`) and checks the residual.
pub fn query_column(
    op: &DiscreteOperator,
    basis: &EigenBasis,
    k: usize,
) -> Result<(Vec<f64>, SolveResidual)> {
    let rhs = basis.phi(k);
    let u = solve(op, &rhs)?;
    let res = op.residual(&u, &rhs);
    if !(res.backward <= BACKWARD_TOL) {
        return Err(Error::QueryFailed {
            query: k + 1,
            backward_error: res.backward,
        });
    }
    Ok((u, res))
}

/// Forward queries `u_k = A φ_k`, `k = 1..=n_queries`.
pub fn query_forward(
    op: &DiscreteOperator,
    basis: &EigenBasis,
    n_queries: usize,
) -> Result<ResponseMatrix> {
    check_query_count(op, basis, n_queries)?;
    let mut cols = Vec::with_capacity(n_queries);
    let mut residuals = Vec::with_capacity(n_queries);
    for k in 0..n_queries {
        let (u, r) = query_column(op, basis, k)?;
        cols.push(u);
        residuals.push(r);
    }
    let columns = DenseMatrix::from_columns(basis.grid.num_nodes(), &cols)?;
    ResponseMatrix::from_parts(basis, columns, Some(residuals))
}

/// Shared precondition of the sequential and parallel query drivers.
pub fn check_query_count(
    op: &DiscreteOperator,
    basis: &EigenBasis,
    n_queries: usize,
) -> Result<()> {
    if n_queries == 0 || n_queries > basis.modes() {
        return Err(Error::InvalidArgument("need 1 <= n_queries <= basis modes"));
    }
    if op.grid() != basis.grid {
        return Err(Error::InvalidArgument(
            "operator and basis live on different grids",
        ));
    }
    Ok(())
}

/// Synthetic responses of `L†`: `u_k = φ_k / λ_k`.
pub fn pseudo_inverse_reference(basis: &EigenBasis, n_queries: usize) -> Result<ResponseMatrix> {
    if n_queries == 0 || n_queries > basis.modes() {
        return Err(Error::InvalidArgument("need 1 <= n_queries <= basis modes"));
    }
    let mut inv = Vec::with_capacity(n_queries);
    for (k, l) in basis.lambdas[..n_queries].iter().enumerate() {
        if *l == 0.0 {
            return Err(Error::ZeroEigenvalue { index: k + 1 });
        }
        inv.push(1.0 / l);
    }
    let columns = basis.phis.columns(0..n_queries).scale_columns(&inv);
    ResponseMatrix::from_parts(basis, columns, None)
}
