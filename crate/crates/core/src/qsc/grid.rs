use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Uniform rectangle mesh and its collocation abscissae.
///
/// Collocation points in x are `ξ_0 = x_L`, `ξ_i = x_L + (i - 1/2) Δx` for
/// `i = 1..=Mx`, and `ξ_{Mx+1} = x_R`; likewise in y.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceGrid {
    pub xl: f64,
    pub xr: f64,
    pub yl: f64,
    pub yr: f64,
    pub mx: usize,
    pub my: usize,
    pub dx: f64,
    pub dy: f64,
}

impl SpaceGrid {
    pub fn new(xl: f64, xr: f64, yl: f64, yr: f64, mx: usize, my: usize) -> Result<Self> {
        if mx < 2 || my < 2 {
            return Err(Error::Config(format!("cell counts must be >= 2, got Mx = {mx}, My = {my}")));
        }
        if !(xr > xl && yr > yl) {
            return Err(Error::Domain("rectangle bounds must satisfy xl < xr and yl < yr".into()));
        }
        Ok(Self {
            xl,
            xr,
            yl,
            yr,
            mx,
            my,
            dx: (xr - xl) / mx as f64,
            dy: (yr - yl) / my as f64,
        })
    }

    /// `(0, 1)^2` with `m x m` cells.
    pub fn unit_square(m: usize) -> Result<Self> {
        Self::new(0.0, 1.0, 0.0, 1.0, m, m)
    }

    /// Number of collocation points (and DOFs) along x, `Mx + 2`.
    #[inline]
    pub fn nx(&self) -> usize {
        self.mx + 2
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.my + 2
    }

    #[inline]
    pub fn dof_count(&self) -> usize {
        self.nx() * self.ny()
    }

    #[inline]
    pub fn xi_x(&self, i: usize) -> f64 {
        collocation(self.xl, self.xr, self.dx, self.mx, i)
    }

    #[inline]
    pub fn xi_y(&self, j: usize) -> f64 {
        collocation(self.yl, self.yr, self.dy, self.my, j)
    }

    pub fn abscissae_x(&self) -> Vec<f64> {
        (0..self.nx()).map(|i| self.xi_x(i)).collect()
    }

    pub fn abscissae_y(&self) -> Vec<f64> {
        (0..self.ny()).map(|j| self.xi_y(j)).collect()
    }

    /// Index in `∂Λ`; corners included.
    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.mx + 1 || j == self.my + 1
    }

    pub fn zeros(&self) -> Grid2 {
        Grid2::zeros(self.nx(), self.ny())
    }

    /// Samples `f` at every collocation point of `Λ̄`.
    pub fn sample<F: Fn(f64, f64) -> f64>(&self, f: F) -> Grid2 {
        let xs = self.abscissae_x();
        let ys = self.abscissae_y();
        let mut g = self.zeros();
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in ys.iter().enumerate() {
                g[(i, j)] = f(x, y);
            }
        }
        g
    }

    pub fn same_mesh(&self, other: &SpaceGrid) -> bool {
        self == other
    }
}

#[inline]
fn collocation(lo: f64, hi: f64, d: f64, m: usize, i: usize) -> f64 {
    if i == 0 {
        lo
    } else if i == m + 1 {
        hi
    } else {
        lo + (i as f64 - 0.5) * d
    }
}

/// Row-major `nx x ny` field; entry `(i, j)` lives at `i * ny + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2 {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

/// Spline coefficients `c_ij` at one time level.
pub type DofGrid = Grid2;
/// Values at the collocation points.
pub type GridFunction = Grid2;

impl Grid2 {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        Self {
            nx,
            ny,
            data: vec![0.0; nx * ny],
        }
    }

    pub fn filled(nx: usize, ny: usize, v: f64) -> Self {
        Self {
            nx,
            ny,
            data: vec![v; nx * ny],
        }
    }

    pub fn from_vec(nx: usize, ny: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != nx * ny {
            return Err(Error::Usage(format!("{} values for a {nx} x {ny} grid", data.len())));
        }
        Ok(Self { nx, ny, data })
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn check_shape(&self, grid: &SpaceGrid) -> Result<()> {
        if self.shape() != (grid.nx(), grid.ny()) {
            return Err(Error::Usage(format!(
                "field is {} x {}, mesh needs {} x {}",
                self.nx,
                self.ny,
                grid.nx(),
                grid.ny()
            )));
        }
        Ok(())
    }

    pub fn same_shape(&self, other: &Grid2) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::Usage(format!(
                "field shapes {:?} and {:?} differ",
                self.shape(),
                other.shape()
            )));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |self - other|`.
    pub fn max_diff(&self, other: &Grid2) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: f64, other: &Grid2) {
        debug_assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `self - other`.
    pub fn sub(&self, other: &Grid2) -> Grid2 {
        let mut out = self.clone();
        out.axpy(-1.0, other);
        out
    }

    /// Sets every entry on the outer ring to `v`.
    pub fn set_ring(&mut self, v: f64) {
        let (nx, ny) = (self.nx, self.ny);
        for i in 0..nx {
            if i == 0 || i + 1 == nx {
                self.data[i * ny..(i + 1) * ny].fill(v);
            } else {
                self.data[i * ny] = v;
                self.data[i * ny + ny - 1] = v;
            }
        }
    }

    /// Largest absolute value on the outer ring.
    pub fn ring_max_abs(&self) -> f64 {
        let (nx, ny) = (self.nx, self.ny);
        let mut m: f64 = 0.0;
        for i in 0..nx {
            for j in 0..ny {
                if i == 0 || j == 0 || i + 1 == nx || j + 1 == ny {
                    m = m.max(self.data[i * ny + j].abs());
                }
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Grid2 {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.ny + j]
    }
}

impl IndexMut<(usize, usize)> for Grid2 {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.ny + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abscissae() {
        let g = SpaceGrid::unit_square(4).unwrap();
        assert_eq!(g.abscissae_x(), vec![0.0, 0.125, 0.375, 0.625, 0.875, 1.0]);
        assert_eq!(g.dof_count(), 36);
        assert!(g.is_boundary(0, 3) && g.is_boundary(5, 5) && !g.is_boundary(1, 4));
        assert!(SpaceGrid::unit_square(1).is_err());
    }

    #[test]
    fn ring_helpers() {
        let mut f = Grid2::filled(4, 5, 2.0);
        f.set_ring(0.0);
        assert_eq!(f.ring_max_abs(), 0.0);
        assert_eq!(f[(1, 1)], 2.0);
        assert_eq!(f[(2, 3)], 2.0);
        assert_eq!(f.as_slice().iter().filter(|&&v| v == 2.0).count(), 6);
    }
}
