use alloc::vec::Vec;

use super::ResponseMatrix;
use crate::error::{Error, Result};
use crate::linalg::{top_eigenvalue_psd, DenseMatrix, Seed};
use crate::math::{ln, sqrt};

/// Relative tolerance of the power iterations behind every curve.
pub const NORM_TOL: f64 = 1e-10;
pub const NORM_MAX_ITER: usize = 10_000;

/// Slack of [`bound_certificate`].
const CERT_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRow {
    pub n: usize,
    /// `λ_{n+1}`.
    pub lambda_next: f64,
    /// `‖A − A P_n‖` for the truncated model.
    pub err: f64,
    /// `‖M_n‖`, `M_n = [λ_1 u_1 … λ_n u_n]`.
    pub m_norm: f64,
    /// `‖M_N‖ / λ_{n+1}`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub n_queries: usize,
    /// `‖M_N‖`, the estimate of `‖L A*‖`.
    pub m_norm_final: f64,
}

impl ConvergenceTable {
    /// `err` nonincreasing and `m_norm` nondecreasing, up to `slack`
    /// relative to the larger neighbour.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| {
            let (a, b) = (&w[0], &w[1]);
            b.err <= a.err + slack * a.err.max(b.err)
                && b.m_norm >= a.m_norm - slack * a.m_norm.max(b.m_norm)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertificateReport {
    pub passed: bool,
    /// Largest `err / bound` over the table (0 where both vanish).
    pub worst_ratio: f64,
    pub worst_n: usize,
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// `{1, 2, 4, …, 512} ∪ {600}`, restricted to `n < n_queries`.
pub fn default_n_list(n_queries: usize) -> Vec<usize> {
    (0..10)
        .map(|p| 1usize << p)
        .chain(core::iter::once(600))
        .filter(|&n| n < n_queries)
        .collect()
}

fn check_n_list(n_list: &[usize]) -> Result<()> {
    if n_list.is_empty() || n_list[0] == 0 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "n_list must be strictly ascending positive counts",
        ));
    }
    Ok(())
}

fn block(g: &DenseMatrix, range: core::ops::Range<usize>) -> DenseMatrix {
    let off = range.start;
    let len = range.len();
    DenseMatrix::from_fn(len, len, |i, j| g.get(off + i, off + j))
}

fn psd_norm(g: &DenseMatrix, n: usize) -> Result<f64> {
    let lam = top_eigenvalue_psd(g, NORM_TOL, NORM_MAX_ITER, Seed(0).split(n as u64))?;
    Ok(sqrt(lam.max(0.0)))
}

/// `err(n) = ‖[u_{n+1} … u_N]‖₂` for every `n` in `n_list`.
pub fn error_curve(resp: &ResponseMatrix, n_list: &[usize]) -> Result<Vec<f64>> {
    let gram = resp.columns().gram();
    tail_norms(&gram, n_list)
}

fn tail_norms(gram: &DenseMatrix, n_list: &[usize]) -> Result<Vec<f64>> {
    check_n_list(n_list)?;
    let big_n = gram.rows();
    n_list
        .iter()
        .map(|&n| {
            if n >= big_n {
                return Err(Error::EmptyTail { n });
            }
            psd_norm(&block(gram, n..big_n), n)
        })
        .collect()
}

/// `‖M_n‖₂` for every `n` in `n_list` (`n <= N`).
pub fn lastar_curve(resp: &ResponseMatrix, n_list: &[usize]) -> Result<Vec<f64>> {
    let gram = scaled_gram(resp);
    leading_norms(&gram, n_list)
}

/// `D G D` with `D = diag(λ)`: the Gram matrix of `M_N`.
fn scaled_gram(resp: &ResponseMatrix) -> DenseMatrix {
    let g = resp.columns().gram();
    let lam = resp.lambdas();
    DenseMatrix::from_fn(g.rows(), g.cols(), |i, j| lam[i] * g.get(i, j) * lam[j])
}

fn leading_norms(gram: &DenseMatrix, n_list: &[usize]) -> Result<Vec<f64>> {
    check_n_list(n_list)?;
    n_list
        .iter()
        .map(|&n| {
            if n > gram.rows() {
                return Err(Error::InvalidArgument("n exceeds the number of queries"));
            }
            psd_norm(&block(gram, 0..n), n)
        })
        .collect()
}

/// Error curve, `‖M_n‖` curve and bound over `n_list` (every `n < N`).
pub fn convergence_table(resp: &ResponseMatrix, n_list: &[usize]) -> Result<ConvergenceTable> {
    let big_n = resp.n_queries();
    let gram = resp.columns().gram();
    let errs = tail_norms(&gram, n_list)?;
    let lam = resp.lambdas();
    let m_gram = DenseMatrix::from_fn(big_n, big_n, |i, j| lam[i] * gram.get(i, j) * lam[j]);
    let m_norms = leading_norms(&m_gram, n_list)?;
    let m_norm_final = psd_norm(&m_gram, big_n)?;
    let rows = n_list
        .iter()
        .zip(errs.iter().zip(&m_norms))
        .map(|(&n, (&err, &m_norm))| ConvergenceRow {
            n,
            lambda_next: lam[n],
            err,
            m_norm,
            bound: m_norm_final / lam[n],
        })
        .collect();
    Ok(ConvergenceTable {
        rows,
        n_queries: big_n,
        m_norm_final,
    })
}

/// Checks `err(n) <= ‖M_N‖/λ_{n+1} · (1 + 1e-8)` on every row.
pub fn bound_certificate(table: &ConvergenceTable) -> CertificateReport {
    let mut report = CertificateReport {
        passed: true,
        worst_ratio: 0.0,
        worst_n: table.rows.first().map_or(0, |r| r.n),
    };
    for row in &table.rows {
        if !(row.err <= row.bound * (1.0 + CERT_SLACK)) {
            report.passed = false;
        }
        let ratio = if row.err == 0.0 {
            0.0
        } else {
            row.err / row.bound
        };
        if !(ratio <= report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_n = row.n;
        }
    }
    report
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let d = y - (slope * x + intercept);
            d * d
        })
        .sum();
    let r2 = if syy > 0.0 {
        1.0 - ss_res / syy
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    LinearFit {
        slope,
        intercept,
        r2,
    }
}

/// Slope and `R²` of `log err` against `log n` over rows with
/// `n_min <= n <= n_max` and `err > 1e-13`; at least 5 such rows needed.
pub fn rate_fit(table: &ConvergenceTable, n_min: usize, n_max: usize) -> Result<(f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = table
        .rows
        .iter()
        .filter(|r| r.n >= n_min && r.n <= n_max && r.err > 1e-13)
        .map(|r| (ln(r.n as f64), ln(r.err)))
        .unzip();
    if xs.len() < 5 {
        return Err(Error::InsufficientData {
            found: xs.len(),
            needed: 5,
        });
    }
    let fit = least_squares(&xs, &ys);
    Ok((fit.slope, fit.r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint_free::pseudo_inverse_reference;
    use crate::linalg::svd;
    use crate::pde::{sine_basis_1d, Grid};

    fn synthetic(cols: DenseMatrix, lambdas: &[f64]) -> ResponseMatrix {
        let n = cols.cols();
        let g = Grid::line(cols.rows());
        let mut basis = sine_basis_1d(0, g).unwrap();
        basis.lambdas = lambdas.to_vec();
        basis.phis = DenseMatrix::zeros(cols.rows(), n);
        ResponseMatrix::from_parts(&basis, cols, None).unwrap()
    }

    #[test]
    fn default_list() {
        assert_eq!(
            default_n_list(601),
            [1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 600]
        );
        assert_eq!(default_n_list(300), [1, 2, 4, 8, 16, 32, 64, 128, 256]);
        assert_eq!(default_n_list(600), [1, 2, 4, 8, 16, 32, 64, 128, 256, 512]);
    }

    #[test]
    fn last_tail_is_last_column() {
        let y = Seed(12).gaussian_matrix(40, 6);
        let resp = synthetic(y.clone(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let err = error_curve(&resp, &[5]).unwrap()[0];
        let direct = crate::linalg::norm2(&y.col(5));
        assert!((err - direct).abs() <= 1e-14 * direct);
        assert_eq!(
            error_curve(&resp, &[6]).unwrap_err(),
            Error::EmptyTail { n: 6 }
        );
        assert!(error_curve(&resp, &[3, 2]).is_err());
    }

    #[test]
    fn tail_norms_match_svd() {
        let y = Seed(9).gaussian_matrix(60, 30);
        let lam: Vec<f64> = (1..=30).map(|k| k as f64).collect();
        let resp = synthetic(y.clone(), &lam);
        let ns: Vec<usize> = (1..30).collect();
        let errs = error_curve(&resp, &ns).unwrap();
        for (n, e) in ns.iter().zip(errs) {
            let s = svd(&y.columns(*n..30)).unwrap().sigma_max();
            assert!((e - s).abs() <= 1e-8 * s, "n={n}");
        }
    }

    #[test]
    fn m_norm_is_monotone() {
        let y = Seed(10).gaussian_matrix(50, 20);
        let lam: Vec<f64> = (1..=20).map(|k| (k * k) as f64).collect();
        let resp = synthetic(y, &lam);
        let ns: Vec<usize> = (1..=20).collect();
        let m = lastar_curve(&resp, &ns).unwrap();
        for w in m.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn pseudo_inverse_is_the_equality_case() {
        let g = Grid::line(400);
        let basis = sine_basis_1d(120, g).unwrap();
        let resp = pseudo_inverse_reference(&basis, 120).unwrap();
        let ns: Vec<usize> = (1..120).collect();
        let t = convergence_table(&resp, &ns).unwrap();
        for row in &t.rows {
            assert!(
                (row.err * row.lambda_next - 1.0).abs() <= 1e-8,
                "n={}",
                row.n
            );
            assert!((row.m_norm - 1.0).abs() <= 1e-10);
        }
        assert!((t.m_norm_final - 1.0).abs() <= 1e-10);
        let cert = bound_certificate(&t);
        assert!(cert.passed);
        assert!((cert.worst_ratio - 1.0).abs() < 1e-8);
        assert!(t.is_monotone(1e-12));
    }

    #[test]
    fn zero_operator_certificate() {
        let resp = synthetic(DenseMatrix::zeros(30, 5), &[1.0, 4.0, 9.0, 16.0, 25.0]);
        let t = convergence_table(&resp, &[1, 2, 3, 4]).unwrap();
        assert!(t.rows.iter().all(|r| r.err == 0.0 && r.bound == 0.0));
        let cert = bound_certificate(&t);
        assert!(cert.passed);
        assert_eq!(cert.worst_ratio, 0.0);
    }

    #[test]
    fn violated_certificate_is_reported() {
        let mut t = ConvergenceTable {
            rows: alloc::vec![ConvergenceRow {
                n: 3,
                lambda_next: 16.0,
                err: 2.0,
                m_norm: 1.0,
                bound: 1.0,
            }],
            n_queries: 4,
            m_norm_final: 16.0,
        };
        let cert = bound_certificate(&t);
        assert!(!cert.passed);
        assert_eq!((cert.worst_ratio, cert.worst_n), (2.0, 3));
        t.rows[0].err = 1.0 + 1e-9;
        assert!(bound_certificate(&t).passed);
    }

    #[test]
    fn exact_power_law_fit() {
        let rows = (1..=10)
            .map(|p| {
                let n = 1usize << p;
                ConvergenceRow {
                    n,
                    lambda_next: 0.0,
                    err: 1.0 / (n * n) as f64,
                    m_norm: 0.0,
                    bound: 0.0,
                }
            })
            .collect();
        let t = ConvergenceTable {
            rows,
            n_queries: 2000,
            m_norm_final: 0.0,
        };
        let (slope, r2) = rate_fit(&t, 1, 2000).unwrap();
        assert!((slope + 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
        assert_eq!(
            rate_fit(&t, 64, 256).unwrap_err(),
            Error::InsufficientData {
                found: 3,
                needed: 5
            }
        );
    }
}
