//! Fan-out of the forward queries over a rayon pool.

use adjfree_core::adjoint_free::{check_query_count, query_column, query_forward, ResponseMatrix};
use adjfree_core::pde::{DiscreteOperator, EigenBasis};
use adjfree_core::{DenseMatrix, Error, Result};
use rayon::prelude::*;

/// [`query_forward`] with column solves spread over `threads` workers.
///
/// Each column is an independent solve against the shared factorization,
/// so the result is bitwise identical to the sequential driver. When
/// several queries fail, the one with the smallest index is reported.
pub fn par_query_forward(
    op: &DiscreteOperator,
    basis: &EigenBasis,
    n_queries: usize,
    threads: usize,
) -> Result<ResponseMatrix> {
    if threads <= 1 {
        return query_forward(op, basis, n_queries);
    }
    check_query_count(op, basis, n_queries)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|_| Error::InvalidArgument("could not start the worker pool"))?;
    let results: Vec<_> = pool.install(|| {
        (0..n_queries)
            .into_par_iter()
            .map(|k| query_column(op, basis, k))
            .collect()
    });
    let mut cols = Vec::with_capacity(n_queries);
    let mut residuals = Vec::with_capacity(n_queries);
    for r in results {
        let (u, res) = r?;
        cols.push(u);
        residuals.push(res);
    }
    let columns = DenseMatrix::from_columns(basis.grid.num_nodes(), &cols)?;
    ResponseMatrix::from_parts(basis, columns, Some(residuals))
}

/// Sequential or parallel driver, as a closure for the study functions.
pub fn query_driver(
    threads: usize,
) -> impl FnMut(&DiscreteOperator, &EigenBasis, usize) -> Result<ResponseMatrix> {
    move |op, basis, n| par_query_forward(op, basis, n, threads)
}
