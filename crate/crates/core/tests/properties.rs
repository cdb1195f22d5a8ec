use adjfree_core::adjoint_free::{convergence_table, ResponseMatrix};
use adjfree_core::linalg::{principal_angles, qr_factor, spectral_norm, svd, DenseMatrix, Seed};
use adjfree_core::pde::{
    assemble_1d, greens_exact_convdiff, sine_basis_1d, sine_basis_2d, solve, BandMatrix, BandedLu,
    Grid,
};
use adjfree_core::sketch::{
    align_rotation, diameter_lower_bound, near_symmetry_delta, toeplitz_from_two_queries, RANK_TOL,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn orthonormal(n: usize, k: usize, seed: u64) -> DenseMatrix {
    qr_factor(&Seed(seed).gaussian_matrix(n, k)).unwrap().0
}

fn sigma_max(m: &DenseMatrix) -> f64 {
    svd(m).unwrap().sigma_max()
}

fn random_orthogonal(n: usize, seed: u64) -> DenseMatrix {
    orthonormal(n, n, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(rows in 1usize..24, cols in 1usize..24, seed in any::<u64>()) {
        let m = Seed(seed).gaussian_matrix(rows, cols);
        let t = svd(&m).unwrap();
        let err = sigma_max(&t.reconstruct().sub(&m).unwrap());
        prop_assert!(err <= 1e-10 * t.sigma_max());
        prop_assert!(t.s.windows(2).all(|w| w[0] >= w[1]));
        let eye_u = t.u.tr_matmul(&t.u).unwrap().sub(&DenseMatrix::identity(t.s.len())).unwrap();
        let eye_v = t.v.tr_matmul(&t.v).unwrap().sub(&DenseMatrix::identity(t.s.len())).unwrap();
        prop_assert!(sigma_max(&eye_u) <= 1e-10 && sigma_max(&eye_v) <= 1e-10);
    }

    #[test]
    fn spectral_norm_agrees_with_svd(rows in 1usize..=64, cols in 1usize..=64, seed in any::<u64>()) {
        let m = Seed(seed).gaussian_matrix(rows, cols);
        let est = spectral_norm(&m, 1e-10, 10_000, Seed(seed ^ 1)).unwrap();
        let exact = sigma_max(&m);
        prop_assert!((est - exact).abs() <= 1e-8 * exact);
    }

    #[test]
    fn principal_angles_symmetric_and_rotation_invariant(
        n in 2usize..12, k in 1usize..6, seed in any::<u64>()
    ) {
        let k = k.min(n);
        let u = orthonormal(n, k, seed);
        let v = orthonormal(n, k, seed.wrapping_add(1));
        let a = principal_angles(&u, &v).unwrap();
        prop_assert_eq!(&a, &principal_angles(&v, &u).unwrap());
        prop_assert!(a.windows(2).all(|w| w[0] <= w[1]));
        let q = random_orthogonal(k, seed.wrapping_add(2));
        let b = principal_angles(&u.matmul(&q).unwrap(), &v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.cos() - y.cos()).abs() <= 1e-12);
        }
    }

    #[test]
    fn qr_idempotent_on_orthonormal(n in 1usize..20, k in 1usize..20, seed in any::<u64>()) {
        let k = k.min(n);
        let q = orthonormal(n, k, seed);
        let q2 = qr_factor(&q).unwrap().0;
        for j in 0..k {
            let (a, b) = (q.col(j), q2.col(j));
            let sign = if a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - sign * y).abs() < 1e-12);
            }
        }
    }

    /// `‖V − U Q₀‖₂² = 2(1 − σ_min(UᵀV))`.
    #[test]
    fn alignment_equality(n in 1usize..=20, k in 1usize..=20, seed in any::<u64>()) {
        let k = k.min(n);
        let u = orthonormal(n, k, seed);
        let v = orthonormal(n, k, seed.wrapping_add(7));
        let q0 = align_rotation(&u, &v).unwrap();
        let lhs = sigma_max(&v.sub(&u.matmul(&q0).unwrap()).unwrap()).powi(2);
        let smin = svd(&u.tr_matmul(&v).unwrap()).unwrap().s[k - 1];
        prop_assert!((lhs - 2.0 * (1.0 - smin)).abs() <= 1e-10);
    }

    #[test]
    fn near_symmetry_invariances(
        n in 3usize..10, k in 1usize..4, alpha in 1e-3f64..1e3, seed in any::<u64>()
    ) {
        let k = k.min(n - 1);
        let f = Seed(seed).gaussian_matrix(n, k).matmul(&Seed(seed ^ 9).gaussian_matrix(k, n)).unwrap();
        let d = near_symmetry_delta(&f, RANK_TOL).unwrap();
        prop_assert!((d - near_symmetry_delta(&f.scale(alpha), RANK_TOL).unwrap()).abs() <= 1e-14);
        let q = random_orthogonal(n, seed.wrapping_add(3));
        let conj = q.tr_matmul(&f).unwrap().matmul(&q).unwrap();
        prop_assert!((d - near_symmetry_delta(&conj, RANK_TOL).unwrap()).abs() <= 1e-10);
    }

    /// `‖Y_{:,>n}‖₂ ≤ ‖Y diag(λ)‖₂ / λ_{n+1}` for ascending positive `λ`.
    #[test]
    fn truncated_tail_bound(
        rows in 2usize..30, cols in 2usize..20, spread in 0.0f64..6.0, seed in any::<u64>()
    ) {
        let y = Seed(seed).gaussian_matrix(rows, cols);
        let mut e = Seed(seed ^ 5).uniform_vec(cols, 0.0, spread);
        e.sort_by(f64::total_cmp);
        let lam: Vec<f64> = e.iter().map(|x| 10f64.powf(*x)).collect();
        let full = sigma_max(&y.scale_columns(&lam));
        for (n, l) in lam.iter().enumerate().skip(1) {
            let tail = sigma_max(&y.columns(n..cols));
            prop_assert!(tail * l <= full * (1.0 + 1e-12));
        }
    }

    /// err nonincreasing, ‖M_n‖ nondecreasing, certificate holds.
    #[test]
    fn table_monotone_and_certified(rows in 6usize..30, cols in 3usize..12, seed in any::<u64>()) {
        let g = Grid::line(2 * cols + 2);
        let mut basis = sine_basis_1d(cols, g).unwrap();
        let y = Seed(seed).gaussian_matrix(g.num_nodes(), cols);
        basis.lambdas = (1..=cols).map(|k| (k * k) as f64 + rows as f64).collect();
        let resp = ResponseMatrix::from_parts(&basis, y, None).unwrap();
        let ns: Vec<usize> = (1..cols).collect();
        let t = convergence_table(&resp, &ns).unwrap();
        prop_assert!(t.is_monotone(1e-12));
        prop_assert!(t.rows.iter().all(|r| r.err <= r.bound * (1.0 + 1e-8)));
    }

    #[test]
    fn toeplitz_two_calls(n in 1usize..=200, seed in any::<u64>()) {
        let symbol = Seed(seed).uniform_vec(2 * n - 1, -1.0, 1.0);
        let t = DenseMatrix::from_fn(n, n, |i, j| symbol[n - 1 + j - i]);
        let mut calls = 0;
        let r = toeplitz_from_two_queries(|x| { calls += 1; t.mul_vec(x) }, n);
        prop_assert_eq!(calls, 2);
        prop_assert_eq!(r, t);
    }

    #[test]
    fn banded_lu_solves(n in 1usize..60, kl in 0usize..5, ku in 0usize..5, seed in any::<u64>()) {
        let vals = Seed(seed).uniform_matrix(n, n);
        let mut a = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                a.set(i, j, vals.get(i, j) + if i == j { 0.5 } else { 0.0 });
            }
        }
        let Ok(lu) = BandedLu::factor(&a) else { return Ok(()) };
        let x = Seed(seed ^ 3).uniform_vec(n, -1.0, 1.0);
        let mut b = a.mul_vec(&x);
        let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        lu.solve_in_place(&mut b);
        let back = a.mul_vec(&b);
        let orig = a.mul_vec(&x);
        for (p, q) in back.iter().zip(&orig) {
            prop_assert!((p - q).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn adjoint_kernel_identity(c in -30.0f64..30.0, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let a = greens_exact_convdiff(c, x, y);
        let b = greens_exact_convdiff(-c, y, x);
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn lower_bound_monotone_in_epsilon_and_delta() {
    let f = Seed(13)
        .gaussian_matrix(6, 3)
        .matmul(&Seed(14).gaussian_matrix(3, 6))
        .unwrap();
    let grid: Vec<f64> = (0..20).map(|i| 0.999 * i as f64 / 19.0).collect();
    let value = |d: f64, e: f64| diameter_lower_bound(&f, e, d).unwrap();
    for (i, &d) in grid.iter().enumerate() {
        for &e in &grid[i..] {
            for &e2 in grid.iter().filter(|&&x| x >= e) {
                assert!(value(d, e2) >= value(d, e));
            }
            for &d2 in grid.iter().filter(|&&x| x >= d && x <= e) {
                assert!(value(d2, e) <= value(d, e));
            }
        }
    }
}

#[test]
fn discrete_orthonormality_of_bases() {
    let dev = |phis: &DenseMatrix| {
        let n = phis.cols();
        sigma_max(&phis.gram().sub(&DenseMatrix::identity(n)).unwrap())
    };
    for (modes, m) in [(10, 512), (100, 400), (200, 1000)] {
        let g = Grid::line(m);
        let b = sine_basis_1d(modes, g).unwrap();
        let h = g.spacing();
        assert!(dev(&b.phis) <= 5.0 * h * h * modes as f64);
    }
    for (modes, m) in [(20, 40), (150, 80)] {
        let g = Grid::square(m);
        let b = sine_basis_2d(modes, g).unwrap();
        let h = g.spacing();
        assert!(dev(&b.phis) <= 5.0 * h * h * modes as f64);
    }
}

#[test]
fn one_dimensional_eigen_consistency() {
    let g = Grid::line(1000);
    let h = g.spacing();
    let b = sine_basis_1d(300, g).unwrap();
    let op = assemble_1d(-1.0, 0.0, 0.0, g).unwrap();
    for k in (0..300).step_by(7) {
        let phi = b.phi(k);
        let a = op.apply(&phi);
        let tol = (PI * (k + 1) as f64).powi(4) * h * h / 12.0 + 1e-9;
        for (x, p) in a.iter().zip(&phi) {
            assert!((x - b.lambdas[k] * p).abs() <= tol);
        }
    }
}

#[test]
fn weyl_laws() {
    let b1 = sine_basis_1d(600, Grid::line(1300)).unwrap();
    for (n, l) in b1.lambdas.iter().enumerate() {
        let k = (n + 1) as f64;
        assert!((l / (k * k) - PI * PI).abs() <= 2.0 * f64::EPSILON * PI * PI);
    }
    let b2 = sine_basis_2d(601, Grid::square(80)).unwrap();
    for n in 300..=600 {
        let ratio = b2.lambdas[n] / (4.0 * PI * (n + 1) as f64);
        assert!((0.9..=1.1).contains(&ratio), "n={n}: {ratio}");
    }
}

#[test]
fn solver_residual_on_moderate_grids() {
    for m in [200, 1000, 2000] {
        let g = Grid::line(m);
        let b = sine_basis_1d(50, g).unwrap();
        for (nu, c, r) in [(-1.0, 0.0, 0.0), (0.25, 5.0, 1.0), (-1.0, 20.0, 0.0)] {
            let op = assemble_1d(nu, c, r, g).unwrap();
            for k in (0..50).step_by(3) {
                let rhs = b.phi(k);
                let u = solve(&op, &rhs).unwrap();
                assert!(op.residual(&u, &rhs).relative <= 1e-10);
            }
        }
    }
}
