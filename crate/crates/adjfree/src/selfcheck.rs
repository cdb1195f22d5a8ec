//! Brute-force invariant suites shared by `adjfree selfcheck` and the test
//! targets.

use adjfree_core::linalg::{qr_factor, svd};
use adjfree_core::sketch::{align_rotation, diameter_upper_bound, SketchInstance};
use adjfree_core::{DenseMatrix, Result, Seed};
use serde::Serialize;

use crate::experiments::witness_report;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    /// Largest violation measure seen; the suite passes when it is at most
    /// `tolerance`.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl SuiteReport {
    fn new(name: &'static str, cases: usize, worst: f64, tolerance: f64) -> Self {
        Self {
            name,
            cases,
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }
}

/// Small integer/real draws from one seeded stream.
struct Draw {
    vals: Vec<f64>,
    at: usize,
}

impl Draw {
    fn new(seed: Seed, len: usize) -> Self {
        Self {
            vals: seed.uniform_vec(len, 0.0, 1.0),
            at: 0,
        }
    }

    fn unit(&mut self) -> f64 {
        let v = self.vals[self.at];
        self.at += 1;
        v
    }

    /// Uniform integer in `lo..=hi`.
    fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + ((self.unit() * (hi - lo + 1) as f64) as usize).min(hi - lo)
    }

    fn real(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }
}

fn orthonormal(n: usize, k: usize, seed: Seed) -> Result<DenseMatrix> {
    Ok(qr_factor(&seed.gaussian_matrix(n, k))?.0)
}

/// `|‖V − U Q₀‖₂² − 2(1 − σ_min(UᵀV))|` over random `n <= 20`, `k <= n`.
pub fn alignment_equality(cases: usize, seed: Seed) -> Result<SuiteReport> {
    let mut worst: f64 = 0.0;
    for case in 0..cases {
        let s = seed.split(case as u64);
        let mut d = Draw::new(s.split(0), 2);
        let n = d.int(1, 20);
        let k = d.int(1, n);
        let u = orthonormal(n, k, s.split(1))?;
        let v = orthonormal(n, k, s.split(2))?;
        let q0 = align_rotation(&u, &v)?;
        let lhs = svd(&v.sub(&u.matmul(&q0)?)?)?.sigma_max().powi(2);
        let cross = svd(&u.tr_matmul(&v)?)?;
        let rhs = 2.0 * (1.0 - cross.s[k - 1]);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(SuiteReport::new("alignment_equality", cases, worst, 1e-10))
}

/// Worst `‖Y_{:,>n}‖₂ λ_{n+1} / ‖Y diag(λ)‖₂ − 1` over random `Y` and
/// ascending positive `λ`, every `n`; the inequality holds when this is
/// at most `1e-12`.
pub fn truncated_identity(cases: usize, seed: Seed) -> Result<SuiteReport> {
    let mut worst = f64::NEG_INFINITY;
    for case in 0..cases {
        let s = seed.split(case as u64);
        let mut d = Draw::new(s.split(0), 3);
        let rows = d.int(2, 40);
        let big_n = d.int(2, 30);
        // spread of λ from nearly flat to six decades
        let decades = d.real(0.0, 6.0);
        let y = s.split(1).gaussian_matrix(rows, big_n);
        let mut lam = s.split(2).uniform_vec(big_n, 0.0, decades);
        lam.sort_by(f64::total_cmp);
        let lam: Vec<f64> = lam.iter().map(|e| 10f64.powf(*e)).collect();
        let full = svd(&y.scale_columns(&lam))?.sigma_max();
        for (n, l) in lam.iter().enumerate().skip(1) {
            let tail = svd(&y.columns(n..big_n))?.sigma_max();
            worst = worst.max(tail * l / full - 1.0);
        }
    }
    Ok(SuiteReport::new(
        "truncated_identity",
        cases,
        worst.max(0.0),
        1e-12,
    ))
}

/// Instances with `δ < ε` that satisfy the upper-bound precondition; the
/// extremal pair must lie in the set and between the two bounds. `worst`
/// counts failing cases.
pub fn witness_sandwich(cases: usize, seed: Seed) -> Result<SuiteReport> {
    let mut failures = 0usize;
    let mut found = 0usize;
    let mut attempt = 0u64;
    while found < cases {
        let s = seed.split(attempt);
        attempt += 1;
        assert!(
            attempt < 100 * cases as u64 + 1000,
            "witness fixture generator stalled"
        );
        let mut d = Draw::new(s.split(0), 5);
        let n = d.int(4, 14);
        let k = d.int(1, (n - 1).min(4));
        let s_cols = d.int(k.max(n - 3), n - 1);
        let delta = d.real(0.0, 0.004);
        let epsilon = delta + d.real(0.001, 0.03);
        let inst = SketchInstance::near_symmetric(n, k, s_cols, delta, epsilon, s.split(1))?;
        if diameter_upper_bound(&inst)?.upper.is_none() {
            continue;
        }
        found += 1;
        if !witness_report(&inst)?.passed {
            failures += 1;
        }
    }
    Ok(SuiteReport::new(
        "witness_sandwich",
        cases,
        failures as f64,
        0.0,
    ))
}

/// The three suites with their standard sizes.
pub fn run_all(seed: Seed) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        alignment_equality(100, seed.split(1))?,
        truncated_identity(200, seed.split(2))?,
        witness_sandwich(50, seed.split(3))?,
    ])
}
