//! Dense reference solvers used as oracles in tests.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn matrix(n: usize, a: &[f64]) -> Result<DMatrix<f64>> {
    if a.len() != n * n {
        return Err(Error::Usage(format!("{} entries is not {n} x {n}", a.len())));
    }
    Ok(DMatrix::from_row_slice(n, n, a))
}

/// Solves a dense row-major system with LU and partial pivoting.
pub fn dense_solve(n: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let m = matrix(n, a)?;
    let rhs = nalgebra::DVector::from_column_slice(b);
    m.lu()
        .solve(&rhs)
        .map(|x| x.as_slice().to_vec())
        .ok_or_else(|| Error::Singular("dense LU failed".into()))
}

/// Eigenvalues of a symmetric dense matrix, ascending.
pub fn symmetric_eigenvalues(n: usize, a: &[f64]) -> Result<Vec<f64>> {
    let m = matrix(n, a)?;
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.as_slice().to_vec();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn dense_matvec(n: usize, a: &[f64], x: &[f64]) -> Vec<f64> {
    (0..n).map(|i| a[i * n..(i + 1) * n].iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let a = [2.0, 1.0, 1.0, 3.0];
        let x = dense_solve(2, &a, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
        let ev = symmetric_eigenvalues(2, &a).unwrap();
        assert!((ev[0] * ev[1] - 5.0).abs() < 1e-13);
    }
}
