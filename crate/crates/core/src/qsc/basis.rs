use crate::error::{Error, Result};

use super::grid::{Grid2, SpaceGrid};

/// Reference quadratic B-spline supported on `[0, 3]`.
#[inline]
pub fn phi(x: f64) -> f64 {
    if !(0.0..=3.0).contains(&x) {
        0.0
    } else if x <= 1.0 {
        0.5 * x * x
    } else if x <= 2.0 {
        let s = x - 1.0;
        0.5 * (-2.0 * s * s + 2.0 * s + 1.0)
    } else {
        let s = 3.0 - x;
        0.5 * s * s
    }
}

fn check_index(k: usize, m: usize, what: &str) -> Result<()> {
    if k > m + 1 {
        return Err(Error::Usage(format!("{what} index {k} outside 0..={}", m + 1)));
    }
    Ok(())
}

/// `φ_j(ξ_i)` from the 1/8-scaled collocation tables.
pub fn basis_value(j: usize, i: usize, m: usize) -> Result<f64> {
    check_index(j, m, "basis")?;
    check_index(i, m, "collocation")?;
    let v = if i == 0 || i == m + 1 {
        let edge = if i == 0 { [0, 1] } else { [m, m + 1] };
        if edge.contains(&j) {
            4.0
        } else {
            0.0
        }
    } else if i == j {
        6.0
    } else if i.abs_diff(j) == 1 {
        1.0
    } else {
        0.0
    };
    Ok(v / 8.0)
}

/// `φ_j''(ξ_i)`; boundary collocation rows are zero by convention.
pub fn basis_second_deriv(j: usize, i: usize, d: f64, m: usize) -> Result<f64> {
    check_index(j, m, "basis")?;
    check_index(i, m, "collocation")?;
    let v = if i == 0 || i == m + 1 {
        0.0
    } else if i == j {
        -2.0
    } else if i.abs_diff(j) == 1 {
        1.0
    } else {
        0.0
    };
    Ok(v / (d * d))
}

/// The at most three nonzero `(j, φ_j(x))` at a point of `[lo, lo + m d]`.
fn local_basis(lo: f64, d: f64, m: usize, x: f64) -> [(usize, f64); 3] {
    let s = (x - lo) / d;
    // cell index in 0..m; the right endpoint belongs to the last cell
    let cell = (s.floor().max(0.0) as usize).min(m - 1);
    let mut out = [(0, 0.0); 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let j = cell + k;
        *slot = (j, phi(s - j as f64 + 2.0));
    }
    out
}

/// `u_h(x, y) = Σ_ij c_ij φ_i(x) φ_j(y)`.
pub fn eval_spline(grid: &SpaceGrid, c: &Grid2, x: f64, y: f64) -> Result<f64> {
    c.check_shape(grid)?;
    let tol = 1e-12;
    if x < grid.xl - tol || x > grid.xr + tol || y < grid.yl - tol || y > grid.yr + tol {
        return Err(Error::Usage(format!("point ({x}, {y}) lies outside the domain")));
    }
    let bx = local_basis(grid.xl, grid.dx, grid.mx, x.clamp(grid.xl, grid.xr));
    let by = local_basis(grid.yl, grid.dy, grid.my, y.clamp(grid.yl, grid.yr));
    let mut s = 0.0;
    for &(i, px) in &bx {
        for &(j, py) in &by {
            s += c[(i, j)] * px * py;
        }
    }
    Ok(s)
}

/// Spline values at every collocation point, by direct evaluation.
pub fn eval_at_collocation(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    let mut out = grid.zeros();
    for i in 0..grid.nx() {
        let x = grid.xi_x(i);
        for j in 0..grid.ny() {
            out[(i, j)] = eval_spline(grid, c, x, grid.xi_y(j))?;
        }
    }
    Ok(out)
}
