use rayon::prelude::*;

use crate::error::{Error, Result};

use super::band::PIVOT_FLOOR;

/// Tridiagonal matrix given by its three diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() + 1 != n || sup.len() + 1 != n {
            return Err(Error::Usage(format!(
                "diagonal lengths ({}, {n}, {}) are inconsistent",
                sub.len(),
                sup.len()
            )));
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sub: vec![0.0; n.saturating_sub(1)],
            diag: vec![1.0; n],
            sup: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::Usage(format!("vector of length {} for dimension {n}", x.len())));
        }
        Ok((0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.sup[i] * x[i + 1];
                }
                s
            })
            .collect())
    }

    /// Strict row diagonal dominance `|d_i| > |l_i| + |u_i|`.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            let off = if i > 0 { self.sub[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.sup[i].abs() } else { 0.0 };
            self.diag[i].abs() > off
        })
    }

    /// Thomas elimination without pivoting.
    pub fn factor(&self) -> Result<ThomasFactor> {
        let n = self.dim();
        let mut inv = vec![0.0; n];
        let mut up = vec![0.0; n.saturating_sub(1)];
        let mut d = self.diag[0];
        for i in 0..n {
            if i > 0 {
                d = self.diag[i] - self.sub[i - 1] * up[i - 1];
            }
            if !(d.abs() >= PIVOT_FLOOR) {
                return Err(Error::Singular(format!("zero pivot at row {i} of tridiagonal system")));
            }
            inv[i] = 1.0 / d;
            if i + 1 < n {
                up[i] = self.sup[i] * inv[i];
            }
        }
        Ok(ThomasFactor {
            sub: self.sub.clone(),
            inv,
            up,
        })
    }
}

/// Precomputed Thomas sweep; reusable for many right-hand sides.
#[derive(Debug, Clone)]
pub struct ThomasFactor {
    sub: Vec<f64>,
    inv: Vec<f64>,
    up: Vec<f64>,
}

impl ThomasFactor {
    pub fn dim(&self) -> usize {
        self.inv.len()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::Usage(format!("rhs of length {} for dimension {n}", x.len())));
        }
        x[0] *= self.inv[0];
        for i in 1..n {
            x[i] = (x[i] - self.sub[i - 1] * x[i - 1]) * self.inv[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.up[i] * x[i + 1];
        }
        Ok(())
    }

    /// Solves every column of a row-major `n x m` block at once.
    pub fn solve_columns(&self, data: &mut [f64], m: usize) -> Result<()> {
        let n = self.dim();
        if data.len() != n * m {
            return Err(Error::Usage(format!("block of {} entries is not {n} x {m}", data.len())));
        }
        data[..m].iter_mut().for_each(|v| *v *= self.inv[0]);
        for i in 1..n {
            let (head, tail) = data.split_at_mut(i * m);
            let prev = &head[(i - 1) * m..];
            let (l, inv) = (self.sub[i - 1], self.inv[i]);
            for (d, p) in tail[..m].iter_mut().zip(prev) {
                *d = (*d - l * p) * inv;
            }
        }
        for i in (0..n - 1).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * m);
            let u = self.up[i];
            for (d, nx) in head[i * m..].iter_mut().zip(&tail[..m]) {
                *d -= u * nx;
            }
        }
        Ok(())
    }

    /// Solves each contiguous row of length `n` independently.
    pub fn solve_rows(&self, data: &mut [f64]) -> Result<()> {
        if data.len() % self.dim() != 0 {
            return Err(Error::Usage("row block is not a multiple of the dimension".into()));
        }
        data.par_chunks_mut(self.dim())
            .try_for_each(|row| self.solve_in_place(row))
    }
}

/// One-shot Thomas solve.
pub fn tridiag_solve(sys: &TridiagonalSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    if sys.dim() < 2 {
        return Err(Error::Usage("tridiagonal solve needs n >= 2".into()));
    }
    let mut x = rhs.to_vec();
    sys.factor()?.solve_in_place(&mut x)?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let b = vec![1.0, 2.0, -3.0];
        assert_eq!(tridiag_solve(&TridiagonalSystem::identity(3), &b).unwrap(), b);
    }

    #[test]
    fn zero_pivot_is_singular() {
        let s = TridiagonalSystem::new(vec![1.0], vec![0.0, 1.0], vec![1.0]).unwrap();
        assert!(matches!(tridiag_solve(&s, &[1.0, 1.0]), Err(Error::Singular(_))));
    }

    #[test]
    fn column_and_row_solves_agree() {
        let n = 6;
        let s = TridiagonalSystem::new(vec![-1.0; n - 1], vec![4.0; n], vec![-0.5; n - 1]).unwrap();
        let f = s.factor().unwrap();
        let m = 4;
        let mut cols = vec![0.0; n * m];
        let mut rows = vec![0.0; n * m];
        for i in 0..n {
            for c in 0..m {
                let v = (i * m + c) as f64 * 0.37 - 1.0;
                cols[i * m + c] = v;
                rows[c * n + i] = v;
            }
        }
        f.solve_columns(&mut cols, m).unwrap();
        f.solve_rows(&mut rows).unwrap();
        for i in 0..n {
            for c in 0..m {
                assert_eq!(cols[i * m + c], rows[c * n + i]);
            }
        }
    }
}
