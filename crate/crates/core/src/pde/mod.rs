//! Finite-difference infrastructure on the unit interval and unit square:
//! uniform interior grids, Dirichlet-Laplacian sine eigenbases, constant
//! coefficient advection–diffusion operators with a cached banded LU, and
//! the closed-form Green's function of `−u″ + c u′ = f`.

mod banded;
mod basis;
mod greens;
mod grid;
mod operator;

pub use banded::{BandMatrix, BandedLu};
pub use basis::{sine_basis_1d, sine_basis_2d, EigenBasis};
pub use greens::{greens_exact_convdiff, greens_kernel_from_responses, GreensSample};
pub use grid::Grid;
pub use operator::{
    assemble_1d, assemble_2d, solve, Coefficients, DiscreteOperator, SolveResidual,
};
