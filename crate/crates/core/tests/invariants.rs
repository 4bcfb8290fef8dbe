use approx::assert_relative_eq;
use proptest::prelude::*;

use vo_tfmid::esa::esa_params;
use vo_tfmid::fractional_time::{coeff_quadrature_oracle, l1plus_coeff, l1plus_row};
use vo_tfmid::linalg::{BandMatrix, LineSolver};
use vo_tfmid::qsc::{apply_theta_x, apply_theta_y, eta_matrix, inner_product, theta_matrix, SpaceGrid};

// 30-digit evaluations of the closed form at τ = 1/8, α = 0.3.
#[test]
fn frozen_weights() {
    let (tau, alpha) = (0.125, 0.3);
    for (j, want) in [
        (1, 1.208_055_338_945_668),
        (2, 1.508_872_698_066_917),
        (3, 1.177_840_267_086_250),
        (10, 0.743_936_390_782_390_6),
    ] {
        assert_relative_eq!(l1plus_coeff(j, tau, alpha), want, max_relative = 1e-14);
    }
}

#[test]
fn closed_form_matches_quadrature() {
    for j in [1, 2, 5, 40] {
        let want = coeff_quadrature_oracle(j, 0.01, 0.65, 1e-12).unwrap();
        assert_relative_eq!(l1plus_coeff(j, 0.01, 0.65), want, max_relative = 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rows_satisfy_weight_invariants(n in 1usize..400, k in 1u32..12, alpha in 0.01f64..0.99) {
        let tau = 2f64.powi(-(k as i32));
        prop_assert!(l1plus_row(n, tau, alpha).is_ok());
    }

    #[test]
    fn esa_kernel_within_eps(alpha in 0.3f64..0.8, s in 0.0f64..1.0) {
        let q = esa_params(0.3, 0.8, 1e-10, 1.0, 1.0 / 512.0).unwrap();
        let x = (s * (1.0f64 / 512.0).ln()).exp();
        let want = x.powf(-alpha);
        prop_assert!((q.kernel(alpha, x).unwrap() - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn theta_is_coercive(mx in 2usize..20, my in 2usize..20, seed in proptest::collection::vec(-1.0f64..1.0, 484)) {
        let grid = SpaceGrid::new(0.0, 1.0, 0.0, 1.0, mx, my).unwrap();
        let mut v = grid.zeros();
        for (dst, src) in v.as_mut_slice().iter_mut().zip(&seed) {
            *dst = *src;
        }
        v.set_ring(0.0);
        let n2 = inner_product(&grid, &v, &v).unwrap();
        prop_assume!(n2 > 1e-12);
        for tv in [apply_theta_x(&grid, &v).unwrap(), apply_theta_y(&grid, &v).unwrap()] {
            let q = inner_product(&grid, &tv, &v).unwrap() / n2;
            prop_assert!((3.0 / 16.0 - 1e-14..=1.0 + 1e-14).contains(&q), "ratio {q}");
        }
    }

    #[test]
    fn line_solve_inverts(m in 1usize..80, gamma in 1e-6f64..1e2, rhs in proptest::collection::vec(-1.0f64..1.0, 82)) {
        let d = 1.0 / m as f64;
        let a = BandMatrix::combine(&[(1.0, &theta_matrix(m)), (-gamma, &eta_matrix(m, d))]).unwrap();
        let b = &rhs[..m + 2];
        let mut x = b.to_vec();
        LineSolver::new(&a).unwrap().solve_rows(&mut x).unwrap();
        let n = m + 2;
        let dense = a.to_dense();
        for i in 0..n {
            let ax: f64 = (0..n).map(|j| dense[i * n + j] * x[j]).sum();
            prop_assert!((ax - b[i]).abs() <= 1e-9 * (1.0 + gamma / (d * d)));
        }
    }
}
