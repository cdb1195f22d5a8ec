//! Approximating a solution operator `A` by `A P_n` from forward solves
//! against prior eigenfunctions, together with the computable certificate
//! `‖A − A P_n‖ ≤ ‖L A*‖ / λ_{n+1}`.
//!
//! Every norm here is taken for the truncated model: `A` restricted to the
//! span of the `N` queried eigenfunctions.

mod curves;
mod response;
mod studies;

pub use curves::{
    bound_certificate, convergence_table, default_n_list, error_curve, lastar_curve, rate_fit,
    CertificateReport, ConvergenceRow, ConvergenceTable, LinearFit, NORM_MAX_ITER, NORM_TOL,
};
pub use response::{
    check_query_count, pseudo_inverse_reference, query_column, query_forward, ResponseMatrix,
    BACKWARD_TOL,
};
pub use studies::{
    greens_error_study, greens_error_study_with, linear_fit, perturbation_sweep,
    perturbation_sweep_with, spearman, GreensErrorRow, SweepRow, SweepTable,
};
