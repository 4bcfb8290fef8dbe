use crate::error::{Error, Result};
use crate::qsc::{eval_at_collocation, DofGrid, Grid2, SpaceGrid};

use super::problem::Problem;

/// `(Δx Δy Σ_{i,j} w_ij^2)^{1/2}` over every collocation point.
pub fn discrete_l2(grid: &SpaceGrid, w: &Grid2) -> Result<f64> {
    w.check_shape(grid)?;
    let s: f64 = w.as_slice().iter().map(|v| v * v).sum();
    Ok((grid.dx * grid.dy * s).sqrt())
}

/// Discrete L2 distance between the spline with DOFs `c` and the exact
/// solution at time `t`, both taken at the collocation points.
pub fn error_vs_true(grid: &SpaceGrid, c: &DofGrid, problem: &Problem, t: f64) -> Result<f64> {
    let u = problem
        .exact
        .as_ref()
        .ok_or_else(|| Error::Usage(format!("{} has no exact solution; use the two-mesh estimate", problem.name)))?;
    let mut diff = eval_at_collocation(grid, c)?;
    diff.axpy(-1.0, &grid.sample(|x, y| u(x, y, t)));
    discrete_l2(grid, &diff)
}

/// Discrete L2 distance between two numerical solutions on the same mesh.
pub fn two_mesh_error(grid: &SpaceGrid, coarse: &DofGrid, fine: &DofGrid) -> Result<f64> {
    coarse
        .check_shape(grid)
        .and_then(|_| fine.check_shape(grid))
        .map_err(|_| Error::Usage("two-mesh estimate needs both solutions on the given mesh".into()))?;
    let mut diff = eval_at_collocation(grid, coarse)?;
    diff.axpy(-1.0, &eval_at_collocation(grid, fine)?);
    discrete_l2(grid, &diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::problem::InitialVariant;
    use crate::qsc::interpolate;
    use std::f64::consts::PI;

    #[test]
    fn interpolant_has_tiny_error() {
        let p = Problem::example62(InitialVariant::Corrected);
        let g = SpaceGrid::unit_square(16).unwrap();
        let t = 0.5;
        let c = interpolate(&g, |x, y| (1.0 + t * t * t) * (PI * x).sin() * (PI * y).sin()).unwrap();
        assert!(error_vs_true(&g, &c, &p, t).unwrap() < 1e-12);
    }

    #[test]
    fn zero_solution_error_is_norm_of_u() {
        let p = Problem::example62(InitialVariant::Corrected);
        let g = SpaceGrid::unit_square(8).unwrap();
        let u = g.sample(|x, y| 2.0 * (PI * x).sin() * (PI * y).sin());
        let want = discrete_l2(&g, &u).unwrap();
        assert!((error_vs_true(&g, &g.zeros(), &p, 1.0).unwrap() - want).abs() < 1e-15);
        let no_exact = Problem::example61(InitialVariant::Paper);
        assert!(error_vs_true(&g, &g.zeros(), &no_exact, 1.0).is_err());
    }

    #[test]
    fn two_mesh_of_identical_runs_is_zero() {
        let g = SpaceGrid::unit_square(6).unwrap();
        let c = interpolate(&g, |x, y| x * y).unwrap();
        assert_eq!(two_mesh_error(&g, &c, &c).unwrap(), 0.0);
        let other = SpaceGrid::unit_square(7).unwrap();
        assert!(two_mesh_error(&other, &c, &c).is_err());
    }
}
