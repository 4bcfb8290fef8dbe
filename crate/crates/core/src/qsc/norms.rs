use crate::error::Result;

use super::grid::{Grid2, SpaceGrid};
use super::ops::{apply_x, apply_y, vartheta_matrix};

/// `(u, v) = Δx Δy Σ_{i,j} u_ij v_ij` over all of `Λ̄`.
pub fn inner_product(grid: &SpaceGrid, u: &Grid2, v: &Grid2) -> Result<f64> {
    u.check_shape(grid)?;
    v.check_shape(grid)?;
    let s: f64 = u.as_slice().iter().zip(v.as_slice()).map(|(a, b)| a * b).sum();
    Ok(grid.dx * grid.dy * s)
}

pub fn l2_norm(grid: &SpaceGrid, u: &Grid2) -> Result<f64> {
    Ok(inner_product(grid, u, u)?.sqrt())
}

/// `|u|_{1x} = sqrt(Δx Δy Σ_{i=1}^{Mx+1} Σ_j (ϑx u)_ij²)`.
pub fn seminorm_1x(grid: &SpaceGrid, u: &Grid2) -> Result<f64> {
    u.check_shape(grid)?;
    // row 0 of the difference field is identically zero
    let d = apply_x(&vartheta_matrix(grid.mx, grid.dx), u);
    l2_norm(grid, &d)
}

pub fn seminorm_1y(grid: &SpaceGrid, u: &Grid2) -> Result<f64> {
    u.check_shape(grid)?;
    let d = apply_y(&vartheta_matrix(grid.my, grid.dy), u);
    l2_norm(grid, &d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_identities() {
        let g = SpaceGrid::unit_square(8).unwrap();
        let one = Grid2::filled(10, 10, 1.0);
        let n2 = inner_product(&g, &one, &one).unwrap();
        assert!((n2 - g.dx * g.dy * 100.0).abs() < 1e-15);
        assert_eq!(seminorm_1x(&g, &one).unwrap(), 0.0);

        let mut a = g.zeros();
        let mut b = g.zeros();
        a[(1, 1)] = 3.0;
        b[(5, 5)] = 2.0;
        assert_eq!(inner_product(&g, &a, &b).unwrap(), 0.0);
        let n = l2_norm(&g, &a).unwrap();
        assert!((n * n - inner_product(&g, &a, &a).unwrap()).abs() < 1e-15);
    }
}
