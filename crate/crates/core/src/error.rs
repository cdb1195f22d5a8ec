use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the numerical kernels can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not fit the operation.
    DimensionMismatch {
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// A matrix was built from NaN or infinite entries.
    NonFinite {
        row: usize,
        col: usize,
    },
    /// A QR diagonal fell below the rank tolerance.
    RankDeficient {
        column: usize,
        value: f64,
    },
    /// An iterative scheme ran out of budget.
    ConvergenceFailure {
        op: &'static str,
        iterations: usize,
        residual: f64,
    },
    ZeroMatrix,
    /// `0 <= delta <= epsilon <= 1` violated.
    InvalidRange {
        delta: f64,
        epsilon: f64,
    },
    /// The test matrix has no orthogonal complement (`s >= n`).
    NoComplement {
        n: usize,
        s: usize,
    },
    /// A sketch instance violates one of its defining invariants.
    InvalidInstance(&'static str),
    /// The grid cannot resolve the requested eigenmodes.
    Underresolved {
        modes: usize,
        points: usize,
    },
    /// Centered advection is unstable on this grid; refine it.
    PecletViolation {
        peclet: f64,
        c: f64,
    },
    SingularOperator {
        row: usize,
        pivot: f64,
    },
    /// Solving for query `query` (1-based) failed.
    QueryFailed {
        query: usize,
        backward_error: f64,
    },
    /// The error curve has no tail columns left at `n`.
    EmptyTail {
        n: usize,
    },
    InsufficientData {
        found: usize,
        needed: usize,
    },
    ZeroEigenvalue {
        index: usize,
    },
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch {
                op,
                expected,
                found,
            } => write!(
                f,
                "{op}: dimension mismatch, expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NonFinite { row, col } => write!(f, "non-finite entry at ({row}, {col})"),
            Error::RankDeficient { column, value } => {
                write!(f, "rank deficient: |r[{column},{column}]| = {value:e}")
            }
            Error::ConvergenceFailure {
                op,
                iterations,
                residual,
            } => write!(
                f,
                "{op}: no convergence after {iterations} iterations (last change {residual:e})"
            ),
            Error::ZeroMatrix => write!(f, "matrix is zero"),
            Error::InvalidRange { delta, epsilon } => write!(
                f,
                "need 0 <= delta <= epsilon <= 1, got delta = {delta}, epsilon = {epsilon}"
            ),
            Error::NoComplement { n, s } => write!(
                f,
                "test matrix with s = {s} columns in dimension n = {n} has no orthogonal complement"
            ),
            Error::InvalidInstance(why) => write!(f, "invalid sketch instance: {why}"),
            Error::Underresolved { modes, points } => write!(
                f,
                "{modes} modes cannot be resolved with {points} points per axis"
            ),
            Error::PecletViolation { peclet, c } => write!(
                f,
                "grid Peclet number {peclet:.4} >= 1 for advection {c}; refine the grid"
            ),
            Error::SingularOperator { row, pivot } => {
                write!(f, "singular operator: pivot {pivot:e} at row {row}")
            }
            Error::QueryFailed {
                query,
                backward_error,
            } => {
                write!(
                    f,
                    "query {query} failed its residual check (backward error {backward_error:e})"
                )
            }
            Error::EmptyTail { n } => write!(f, "no tail columns beyond n = {n}"),
            Error::InsufficientData { found, needed } => {
                write!(f, "need at least {needed} usable points, found {found}")
            }
            Error::ZeroEigenvalue { index } => write!(f, "eigenvalue {index} is zero"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}
