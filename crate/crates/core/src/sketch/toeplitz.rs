use alloc::vec::Vec;

use crate::linalg::DenseMatrix;

/// Reassembles an `n × n` Toeplitz matrix from two forward queries, `Te₁`
/// (its first column) and `Teₙ` (its last column, i.e. the first row
/// reversed).
///
/// Nothing checks that the oracle is Toeplitz; two queries cannot.
pub fn toeplitz_from_two_queries(
    mut oracle: impl FnMut(&[f64]) -> Vec<f64>,
    n: usize,
) -> DenseMatrix {
    if n == 0 {
        return DenseMatrix::zeros(0, 0);
    }
    let mut e = alloc::vec![0.0; n];
    e[0] = 1.0;
    let first_col = oracle(&e);
    e[0] = 0.0;
    e[n - 1] = 1.0;
    let last_col = oracle(&e);
    assert_eq!(first_col.len(), n, "oracle returned the wrong length");
    assert_eq!(last_col.len(), n, "oracle returned the wrong length");
    // t(i - j): i >= j from the first column, i < j from the last column
    DenseMatrix::from_fn(n, n, |i, j| {
        if i >= j {
            first_col[i - j]
        } else {
            last_col[n - 1 - (j - i)]
        }
    })
}
