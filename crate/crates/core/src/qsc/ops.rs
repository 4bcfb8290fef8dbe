use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::BandMatrix;

use super::grid::{Grid2, SpaceGrid};

/// Smallest cell count for which the fourth-order perturbation is defined.
pub const MIN_CELLS_PERTURBED: usize = 6;

/// Matrix of `θ`: boundary rows `(4, 4)/8`, interior rows `(1, 6, 1)/8`.
pub fn theta_matrix(m: usize) -> BandMatrix {
    let n = m + 2;
    let mut a = BandMatrix::zeros(n, 1, 1);
    a.set(0, 0, 0.5);
    a.set(0, 1, 0.5);
    a.set(n - 1, n - 2, 0.5);
    a.set(n - 1, n - 1, 0.5);
    for i in 1..n - 1 {
        a.set(i, i - 1, 0.125);
        a.set(i, i, 0.75);
        a.set(i, i + 1, 0.125);
    }
    a
}

/// Matrix of `η`: zero boundary rows, interior rows `(1, -2, 1)/Δ²`.
pub fn eta_matrix(m: usize, d: f64) -> BandMatrix {
    let n = m + 2;
    let s = 1.0 / (d * d);
    let mut a = BandMatrix::zeros(n, 1, 1);
    for i in 1..n - 1 {
        a.set(i, i - 1, s);
        a.set(i, i, -2.0 * s);
        a.set(i, i + 1, s);
    }
    a
}

/// Matrix of the first difference `ϑ c_k = (c_k - c_{k-1})/Δ`, `k = 1..=M+1`;
/// row 0 is zero.
pub fn vartheta_matrix(m: usize, d: f64) -> BandMatrix {
    let n = m + 2;
    let mut a = BandMatrix::zeros(n, 1, 0);
    for k in 1..n {
        a.set(k, k - 1, -1.0 / d);
        a.set(k, k, 1.0 / d);
    }
    a
}

/// Fourth-order perturbation `P_S`, scaled by `1/(24 Δ²)`.
pub fn perturbation_matrix(m: usize, d: f64) -> Result<BandMatrix> {
    if m < MIN_CELLS_PERTURBED {
        return Err(Error::Config(format!(
            "the fourth-order perturbation needs at least {MIN_CELLS_PERTURBED} cells per direction, got {m}"
        )));
    }
    let s = 1.0 / (24.0 * d * d);
    let mut a = BandMatrix::zeros(m + 2, 4, 4);
    let near = [-11.0, 16.0, -14.0, 6.0, -1.0];
    let next = [-5.0, 6.0, -4.0, 1.0];
    for (k, &v) in near.iter().enumerate() {
        a.set(1, 1 + k, s * v);
        a.set(m, m - k, s * v);
    }
    for (k, &v) in next.iter().enumerate() {
        a.set(2, 1 + k, s * v);
        a.set(m - 1, m - k, s * v);
    }
    let five = [1.0, -4.0, 6.0, -4.0, 1.0];
    for i in 3..=m - 2 {
        for (k, &v) in five.iter().enumerate() {
            a.set(i, i - 2 + k, s * v);
        }
    }
    Ok(a)
}

/// `(A ⊗ I) c`: applies `a` along the first (x) index.
pub fn apply_x(a: &BandMatrix, c: &Grid2) -> Grid2 {
    let (nx, ny) = c.shape();
    assert_eq!(a.dim(), nx, "operator size does not match x extent");
    let src = c.as_slice();
    let mut out = Grid2::zeros(nx, ny);
    out.as_mut_slice()
        .par_chunks_mut(ny)
        .enumerate()
        .for_each(|(i, row)| {
            let (lo, vals) = a.row(i);
            for (k, &v) in vals.iter().enumerate() {
                if v != 0.0 {
                    let s = &src[(lo + k) * ny..(lo + k + 1) * ny];
                    for (o, x) in row.iter_mut().zip(s) {
                        *o += v * x;
                    }
                }
            }
        });
    out
}

/// `(I ⊗ B) c`: applies `b` along the second (y) index.
pub fn apply_y(b: &BandMatrix, c: &Grid2) -> Grid2 {
    let (nx, ny) = c.shape();
    assert_eq!(b.dim(), ny, "operator size does not match y extent");
    let mut out = Grid2::zeros(nx, ny);
    out.as_mut_slice()
        .par_chunks_mut(ny)
        .zip(c.as_slice().par_chunks(ny))
        .for_each(|(o, s)| {
            for (j, oj) in o.iter_mut().enumerate() {
                let (lo, vals) = b.row(j);
                *oj = vals.iter().zip(&s[lo..]).map(|(p, q)| p * q).sum();
            }
        });
    out
}

/// `(A ⊗ B) c`.
pub fn apply_xy(a: &BandMatrix, b: &BandMatrix, c: &Grid2) -> Grid2 {
    apply_x(a, &apply_y(b, c))
}

/// Prebuilt one-dimensional operators of a mesh.
#[derive(Debug, Clone)]
pub struct QscOperators {
    pub theta_x: BandMatrix,
    pub theta_y: BandMatrix,
    pub eta_x: BandMatrix,
    pub eta_y: BandMatrix,
    /// `ηx + P_Sx` when perturbed, otherwise `ηx`.
    pub h_x: BandMatrix,
    pub h_y: BandMatrix,
    pub perturbed: bool,
}

impl QscOperators {
    pub fn new(grid: &SpaceGrid, perturbed: bool) -> Result<Self> {
        let eta_x = eta_matrix(grid.mx, grid.dx);
        let eta_y = eta_matrix(grid.my, grid.dy);
        let (h_x, h_y) = if perturbed {
            let px = perturbation_matrix(grid.mx, grid.dx)?;
            let py = perturbation_matrix(grid.my, grid.dy)?;
            (
                BandMatrix::combine(&[(1.0, &eta_x), (1.0, &px)])?,
                BandMatrix::combine(&[(1.0, &eta_y), (1.0, &py)])?,
            )
        } else {
            (eta_x.clone(), eta_y.clone())
        };
        Ok(Self {
            theta_x: theta_matrix(grid.mx),
            theta_y: theta_matrix(grid.my),
            eta_x,
            eta_y,
            h_x,
            h_y,
            perturbed,
        })
    }

    /// `θx θy c`.
    pub fn theta_theta(&self, c: &Grid2) -> Grid2 {
        apply_xy(&self.theta_x, &self.theta_y, c)
    }

    /// `(Hx θy + θx Hy) c`.
    pub fn mixed(&self, c: &Grid2) -> Grid2 {
        let mut out = apply_xy(&self.h_x, &self.theta_y, c);
        out.axpy(1.0, &apply_xy(&self.theta_x, &self.h_y, c));
        out
    }

    /// `Hx Hy c`.
    pub fn hh(&self, c: &Grid2) -> Grid2 {
        apply_xy(&self.h_x, &self.h_y, c)
    }
}

pub fn apply_theta_x(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_x(&theta_matrix(grid.mx), c))
}

pub fn apply_theta_y(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_y(&theta_matrix(grid.my), c))
}

pub fn apply_eta_x(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_x(&eta_matrix(grid.mx, grid.dx), c))
}

pub fn apply_eta_y(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_y(&eta_matrix(grid.my, grid.dy), c))
}

/// Forward difference along x; row `i = 0` of the result is zero.
pub fn apply_vartheta_x(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_x(&vartheta_matrix(grid.mx, grid.dx), c))
}

pub fn apply_vartheta_y(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_y(&vartheta_matrix(grid.my, grid.dy), c))
}

pub fn apply_perturbation_x(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_x(&perturbation_matrix(grid.mx, grid.dx)?, c))
}

pub fn apply_perturbation_y(grid: &SpaceGrid, c: &Grid2) -> Result<Grid2> {
    c.check_shape(grid)?;
    Ok(apply_y(&perturbation_matrix(grid.my, grid.dy)?, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(grid: &SpaceGrid, f: impl Fn(usize) -> f64) -> Grid2 {
        let mut c = grid.zeros();
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                c[(i, j)] = f(i);
            }
        }
        c
    }

    #[test]
    fn theta_stencils() {
        let g = SpaceGrid::unit_square(5).unwrap();
        let ones = Grid2::filled(7, 7, 1.0);
        assert!(apply_theta_x(&g, &ones).unwrap().max_diff(&ones) < 1e-15);
        let mut e = g.zeros();
        e[(3, 2)] = 1.0;
        let t = apply_theta_x(&g, &e).unwrap();
        assert_eq!((t[(2, 2)], t[(3, 2)], t[(4, 2)]), (0.125, 0.75, 0.125));
        assert_eq!(t.as_slice().iter().filter(|v| **v != 0.0).count(), 3);
    }

    #[test]
    fn eta_and_vartheta() {
        let g = SpaceGrid::unit_square(6).unwrap();
        let d2 = 1.0 / (g.dx * g.dx);
        let lin = line(&g, |i| i as f64);
        let sq = line(&g, |i| (i * i) as f64);
        let el = apply_eta_x(&g, &lin).unwrap();
        let es = apply_eta_x(&g, &sq).unwrap();
        for i in 1..=g.mx {
            assert!(el[(i, 3)].abs() < 1e-9);
            assert!((es[(i, 3)] - 2.0 * d2).abs() < 1e-9);
        }
        assert_eq!(es[(0, 3)], 0.0);
        assert_eq!(es[(g.mx + 1, 3)], 0.0);
        let v = apply_vartheta_x(&g, &lin).unwrap();
        for k in 1..=g.mx + 1 {
            assert!((v[(k, 1)] - 1.0 / g.dx).abs() < 1e-12);
        }
    }

    #[test]
    fn perturbation_rows() {
        let g = SpaceGrid::unit_square(8).unwrap();
        let cube = line(&g, |i| (i as f64).powi(3));
        let p = apply_perturbation_x(&g, &cube).unwrap();
        for i in 3..=g.mx - 2 {
            assert!(p[(i, 0)].abs() < 1e-9);
        }
        let mut e = g.zeros();
        for j in 0..g.ny() {
            e[(1, j)] = 1.0;
        }
        let p = apply_perturbation_x(&g, &e).unwrap();
        assert!((p[(1, 4)] + 11.0 / (24.0 * g.dx * g.dx)).abs() < 1e-9);
        assert!(perturbation_matrix(5, 0.2).is_err());
    }

    #[test]
    fn y_application_matches_transpose() {
        let g = SpaceGrid::new(0.0, 1.0, 0.0, 2.0, 4, 5).unwrap();
        let mut c = g.zeros();
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                c[(i, j)] = ((i * 13 + j * 7) % 5) as f64;
            }
        }
        let t = apply_theta_y(&g, &c).unwrap();
        let th = theta_matrix(g.my);
        for i in 0..g.nx() {
            let row: Vec<f64> = (0..g.ny()).map(|j| c[(i, j)]).collect();
            let want = th.matvec(&row).unwrap();
            for j in 0..g.ny() {
                assert_eq!(t[(i, j)], want[j]);
            }
        }
    }
}
