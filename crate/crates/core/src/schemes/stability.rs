use crate::error::Result;
use crate::qsc::{apply_x, apply_y, l2_norm, seminorm_1x, seminorm_1y, DofGrid, QscOperators, SpaceGrid};

/// `‖θxθy c‖² + w (|θy c|²_{1x} + |θx c|²_{1y})`.
pub fn energy(grid: &SpaceGrid, ops: &QscOperators, c: &DofGrid, w: f64) -> Result<f64> {
    let tt = l2_norm(grid, &ops.theta_theta(c))?;
    let ty = apply_y(&ops.theta_y, c);
    let tx = apply_x(&ops.theta_x, c);
    let sx = seminorm_1x(grid, &ty)?;
    let sy = seminorm_1y(grid, &tx)?;
    Ok(tt * tt + w * (sx * sx + sy * sy))
}

/// Discrete energy bounded by the stability estimate at level `n >= 1`,
/// weight `3τκ/32`.
pub fn stability_functional(grid: &SpaceGrid, ops: &QscOperators, c: &DofGrid, tau: f64, kappa: f64) -> Result<f64> {
    energy(grid, ops, c, 3.0 * tau * kappa / 32.0)
}

/// Initial-data side of the estimate, weight `τκ/2`.
pub fn stability_initial_bound(grid: &SpaceGrid, ops: &QscOperators, c0: &DofGrid, tau: f64, kappa: f64) -> Result<f64> {
    energy(grid, ops, c0, tau * kappa / 2.0)
}
