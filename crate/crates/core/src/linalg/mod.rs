//! Deterministic direct solvers: Thomas, banded LU with partial pivoting,
//! and a Kronecker-assembled sparse 2D operator.

mod band;
pub mod dense;
mod sparse;
mod tridiag;

pub use band::{BandMatrix, BandedLu, PIVOT_FLOOR};
pub use sparse::{assemble_2d, sparse_solve, KronTerm, SparseOperator2D, SPARSE_DOF_LIMIT};
pub use tridiag::{tridiag_solve, ThomasFactor, TridiagonalSystem};

use crate::error::Result;

/// Alias kept for the banded-system vocabulary; bandwidth is not capped by type.
pub type BandedSystem = BandMatrix;

pub fn banded_lu_solve(sys: &BandedSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    sys.factor()?.solve(rhs)
}

/// Factorization of a 1D line operator, chosen by its bandwidth.
#[derive(Debug, Clone)]
pub enum LineSolver {
    Thomas(ThomasFactor),
    Banded(BandedLu),
}

impl LineSolver {
    /// Thomas elimination for tridiagonal input, pivoted banded LU otherwise.
    pub fn new(a: &BandMatrix) -> Result<Self> {
        if a.lower_bandwidth() <= 1 && a.upper_bandwidth() <= 1 {
            Ok(Self::Thomas(a.to_tridiagonal()?.factor()?))
        } else {
            Ok(Self::Banded(a.factor()?))
        }
    }

    pub fn solve_columns(&self, data: &mut [f64], m: usize) -> Result<()> {
        match self {
            Self::Thomas(f) => f.solve_columns(data, m),
            Self::Banded(f) => f.solve_columns(data, m),
        }
    }

    pub fn solve_rows(&self, data: &mut [f64]) -> Result<()> {
        match self {
            Self::Thomas(f) => f.solve_rows(data),
            Self::Banded(f) => f.solve_rows(data),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn banded_agrees_with_thomas_on_tridiagonal_input() {
        let n = 9;
        let mut a = BandMatrix::zeros(n, 1, 1);
        for i in 0..n {
            a.set(i, i, 3.0 + i as f64 * 0.1);
            if i > 0 {
                a.set(i, i - 1, -1.0);
            }
            if i + 1 < n {
                a.set(i, i + 1, 0.7);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let x1 = banded_lu_solve(&a, &b).unwrap();
        let x2 = tridiag_solve(&a.to_tridiagonal().unwrap(), &b).unwrap();
        for (p, q) in x1.iter().zip(&x2) {
            assert!((p - q).abs() <= 1e-13);
        }
        let d = dense::dense_solve(n, &a.to_dense(), &b).unwrap();
        for (p, q) in x1.iter().zip(&d) {
            assert!((p - q).abs() <= 1e-12);
        }
    }
}
