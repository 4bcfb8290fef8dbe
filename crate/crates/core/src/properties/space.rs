use std::f64::consts::PI;

use rand::Rng;

use crate::error::Result;
use crate::linalg::dense::{dense_solve, symmetric_eigenvalues};
use crate::linalg::{BandMatrix, LineSolver};
use crate::qsc::{
    apply_eta_x, apply_perturbation_x, apply_theta_x, apply_theta_y, apply_vartheta_x, basis_second_deriv,
    basis_value, eta_matrix, eval_at_collocation, inner_product, interpolation_error_xx, theta_matrix, Grid2,
    QscOperators, SpaceGrid,
};

use super::{Outcome, Property, PropertyContext};

const QSC: &str = "qsc_space";
const LINALG: &str = "linalg_band";

pub(super) fn properties() -> Vec<Property> {
    vec![
        Property::new(QSC, "theta_energy_bounds", theta_energy_bounds),
        Property::new(QSC, "theta_similarity_spd", theta_similarity_spd),
        Property::new(QSC, "eta_difference_identity", eta_difference_identity),
        Property::new(QSC, "interpolation_xx_constant", interpolation_xx_constant),
        Property::new(QSC, "perturbation_kills_cubics", perturbation_kills_cubics),
        Property::new(QSC, "stencils_match_basis", stencils_match_basis),
        Property::new(LINALG, "line_operator_dominance", line_operator_dominance),
        Property::new(LINALG, "banded_matches_dense", banded_matches_dense),
    ]
}

fn random_field(rng: &mut impl Rng, grid: &SpaceGrid) -> Grid2 {
    let mut g = grid.zeros();
    for v in g.as_mut_slice() {
        *v = rng.random_range(-1.0..=1.0);
    }
    g
}

/// `(3/16)‖v‖² <= (θ v, v) <= ‖v‖²` in either direction for `v = 0` on `∂Λ`.
fn theta_energy_bounds(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(11);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..500 {
        let grid = SpaceGrid::new(0.0, 1.0, 0.0, 1.0, rng.random_range(2..=24), rng.random_range(2..=24))?;
        let mut v = random_field(&mut rng, &grid);
        v.set_ring(0.0);
        let n2 = inner_product(&grid, &v, &v)?;
        for tv in [apply_theta_x(&grid, &v)?, apply_theta_y(&grid, &v)?] {
            let q = inner_product(&grid, &tv, &v)? / n2;
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    Ok(Outcome::new(
        lo >= 3.0 / 16.0 && hi <= 1.0,
        format!("(θv, v)/‖v‖² in [{lo:.4}, {hi:.4}]"),
    ))
}

/// `S⁻¹ Q S` with `S = diag(2, 1, …, 1, 2)` is symmetric positive definite.
fn theta_similarity_spd(_: &PropertyContext) -> Result<Outcome> {
    let mut min_ev = f64::INFINITY;
    let mut asym: f64 = 0.0;
    for m in 1..=64 {
        let n = m + 2;
        let q = theta_matrix(m).to_dense();
        let s = |i: usize| if i == 0 || i == n - 1 { 2.0 } else { 1.0 };
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = q[i * n + j] * s(j) / s(i);
            }
        }
        for i in 0..n {
            for j in 0..i {
                asym = asym.max((a[i * n + j] - a[j * n + i]).abs());
            }
        }
        min_ev = min_ev.min(symmetric_eigenvalues(n, &a)?[0]);
    }
    Ok(Outcome::new(
        asym == 0.0 && min_ev > 0.0,
        format!("sizes 3..=66: min eigenvalue {min_ev:.4}, asymmetry {asym:e}"),
    ))
}

/// `η c_k = (ϑ c_{k+1} - ϑ c_k) / Δ` on interior indices.
fn eta_difference_identity(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(13);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let grid = SpaceGrid::new(0.0, rng.random_range(0.5..=2.0), 0.0, 1.0, rng.random_range(2..=40), 3)?;
        let c = random_field(&mut rng, &grid);
        let e = apply_eta_x(&grid, &c)?;
        let d = apply_vartheta_x(&grid, &c)?;
        let scale = e.max_abs().max(1.0);
        for k in 1..=grid.mx {
            for j in 0..grid.ny() {
                let want = (d[(k + 1, j)] - d[(k, j)]) / grid.dx;
                worst = worst.max((e[(k, j)] - want).abs() / scale);
            }
        }
    }
    Ok(Outcome::at_most("max scaled deviation", worst, 1e-14))
}

/// `‖(I w - w)_xx‖ <= 1.25 (Δx²/12) ‖∂⁴_x w‖∞` for smooth `w`.
fn interpolation_xx_constant(_: &PropertyContext) -> Result<Outcome> {
    type Case = (&'static str, fn(f64, f64) -> f64, fn(f64, f64) -> f64, f64);
    let cases: [Case; 2] = [
        (
            "sin πx sin πy",
            |x, y| (PI * x).sin() * (PI * y).sin(),
            |x, y| -PI * PI * (PI * x).sin() * (PI * y).sin(),
            PI.powi(4),
        ),
        (
            "sin 2πx (1 + y²)",
            |x, y| (2.0 * PI * x).sin() * (1.0 + y * y),
            |x, y| -4.0 * PI * PI * (2.0 * PI * x).sin() * (1.0 + y * y),
            2.0 * (2.0 * PI).powi(4),
        ),
    ];
    let mut worst: f64 = 0.0;
    for (_, w, wxx, d4) in cases {
        for m in [32, 64] {
            let grid = SpaceGrid::unit_square(m)?;
            let bound = 1.25 * grid.dx * grid.dx / 12.0 * d4;
            worst = worst.max(interpolation_error_xx(&grid, w, wxx)? / bound);
        }
    }
    Ok(Outcome::new(worst <= 1.0, format!("max error / bound {worst:.3}")))
}

/// Interior rows of `P_S` annihilate cubic index sequences.
fn perturbation_kills_cubics(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(15);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let m = rng.random_range(6..=40);
        let grid = SpaceGrid::unit_square(m)?;
        let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        let mut c = grid.zeros();
        for i in 0..grid.nx() {
            let x = i as f64;
            for j in 0..grid.ny() {
                c[(i, j)] = k[0] + x * (k[1] + x * (k[2] + x * k[3]));
            }
        }
        let p = apply_perturbation_x(&grid, &c)?;
        // each row sums 16 magnitudes of 1/(24Δ²) times entries up to max|c|
        let scale = 16.0 * c.max_abs() / (24.0 * grid.dx * grid.dx);
        for i in 3..=m - 2 {
            for j in 0..grid.ny() {
                worst = worst.max(p[(i, j)].abs() / scale);
            }
        }
    }
    Ok(Outcome::at_most("max scaled residual", worst, 1e-13))
}

/// `θxθy c` and `ηxθy c` equal the spline and its `xx` derivative at the
/// collocation points.
fn stencils_match_basis(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(16);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let grid = SpaceGrid::new(-0.5, 1.0, 0.0, 2.0, rng.random_range(2..=12), rng.random_range(2..=12))?;
        let c = random_field(&mut rng, &grid);
        let ops = QscOperators::new(&grid, false)?;
        worst = worst.max(ops.theta_theta(&c).max_diff(&eval_at_collocation(&grid, &c)?));
        let s = crate::qsc::apply_xy(&eta_matrix(grid.mx, grid.dx), &theta_matrix(grid.my), &c);
        let scale = 1.0 / (grid.dx * grid.dx);
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let mut want = 0.0;
                for a in 0..grid.nx() {
                    let bx = basis_second_deriv(a, i, grid.dx, grid.mx)?;
                    if bx == 0.0 {
                        continue;
                    }
                    for b in 0..grid.ny() {
                        want += c[(a, b)] * bx * basis_value(b, j, grid.my)?;
                    }
                }
                worst = worst.max((s[(i, j)] - want).abs() / scale);
            }
        }
    }
    Ok(Outcome::at_most("max deviation", worst, 1e-13))
}

/// `θ - γη` is irreducibly diagonally dominant for every `γ > 0`: the
/// boundary rows `(1/2, 1/2)` are weakly dominant, interior rows strictly.
fn line_operator_dominance(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(17);
    for _ in 0..100 {
        let m = rng.random_range(1..=200);
        let d = rng.random_range(1e-3..=1.0);
        let gamma = 10f64.powf(rng.random_range(-6.0..=2.0));
        let a = BandMatrix::combine(&[(1.0, &theta_matrix(m)), (-gamma, &eta_matrix(m, d))])?;
        let n = m + 2;
        let dominant = (0..n).all(|i| {
            let off: f64 = (i.saturating_sub(1)..=(i + 1).min(n - 1)).filter(|&j| j != i).map(|j| a.get(i, j).abs()).sum();
            let diag = a.get(i, i).abs();
            if i == 0 || i == n - 1 {
                diag >= off
            } else {
                diag > off
            }
        });
        if !dominant {
            return Ok(Outcome::new(false, format!("not dominant at M = {m}, Δ = {d:.4}, γ = {gamma:e}")));
        }
    }
    Ok(Outcome::new(true, "100 random (γ, Δ, M) dominant"))
}

/// Thomas and pivoted banded LU agree with a dense solve.
fn banded_matches_dense(ctx: &PropertyContext) -> Result<Outcome> {
    let mut rng = ctx.rng(18);
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let n = rng.random_range(3..=40);
        let (kl, ku) = (rng.random_range(1..=4usize.min(n - 1)), rng.random_range(1..=4usize.min(n - 1)));
        let mut a = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                a.set(i, j, rng.random_range(-1.0..=1.0));
            }
            a.set(i, i, a.get(i, i) + 2.0 * (kl + ku) as f64);
        }
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let want = dense_solve(n, &a.to_dense(), &b)?;
        let mut got = b.clone();
        LineSolver::new(&a)?.solve_rows(&mut got)?;
        for (g, w) in got.iter().zip(&want) {
            worst = worst.max((g - w).abs());
        }
    }
    Ok(Outcome::at_most("max deviation", worst, 1e-12))
}
