use crate::error::{Error, Result};
use crate::linalg::LineSolver;

use super::grid::{Grid2, SpaceGrid};
use super::ops::{apply_xy, eta_matrix, theta_matrix};

/// Solves `θx θy c = w`: x-direction tridiagonal solves, then y-direction.
pub fn interpolate_dofs(grid: &SpaceGrid, w: &Grid2) -> Result<Grid2> {
    w.check_shape(grid)?;
    if !w.is_finite() {
        return Err(Error::Domain("interpolation data must be finite".into()));
    }
    let internal = |e: Error| Error::Internal(format!("collocation matrix is singular: {e}"));
    let sx = LineSolver::new(&theta_matrix(grid.mx)).map_err(internal)?;
    let sy = LineSolver::new(&theta_matrix(grid.my)).map_err(internal)?;
    let mut c = w.clone();
    sx.solve_columns(c.as_mut_slice(), grid.ny())?;
    sy.solve_rows(c.as_mut_slice())?;
    Ok(c)
}

/// Spline interpolant of `f` at the collocation points.
pub fn interpolate<F: Fn(f64, f64) -> f64>(grid: &SpaceGrid, f: F) -> Result<Grid2> {
    interpolate_dofs(grid, &grid.sample(f))
}

/// `max |(I w)_xx - w_xx|` over the collocation points with interior x
/// index, where `(I w)_xx = ηx θy c`.
pub fn interpolation_error_xx<F, G>(grid: &SpaceGrid, w: F, w_xx: G) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
    G: Fn(f64, f64) -> f64,
{
    let c = interpolate(grid, w)?;
    let s = apply_xy(&eta_matrix(grid.mx, grid.dx), &theta_matrix(grid.my), &c);
    let mut err: f64 = 0.0;
    for i in 1..=grid.mx {
        let x = grid.xi_x(i);
        for j in 0..grid.ny() {
            err = err.max((s[(i, j)] - w_xx(x, grid.xi_y(j))).abs());
        }
    }
    Ok(err)
}
