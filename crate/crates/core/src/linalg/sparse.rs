use crate::error::{Error, Result};

use super::band::{BandMatrix, BandedLu};

/// Largest DOF count accepted by the direct sparse path.
pub const SPARSE_DOF_LIMIT: usize = 1 << 14;

/// One Kronecker term `c (A ⊗ B)` acting on a row-major `nx x ny` field,
/// with `A` along the first (x) index and `B` along the second (y) index.
#[derive(Debug, Clone, Copy)]
pub struct KronTerm<'a> {
    pub coeff: f64,
    pub ax: &'a BandMatrix,
    pub by: &'a BandMatrix,
}

impl<'a> KronTerm<'a> {
    pub fn new(coeff: f64, ax: &'a BandMatrix, by: &'a BandMatrix) -> Self {
        Self { coeff, ax, by }
    }
}

/// Compressed-row sparse operator over the `nx * ny` DOF vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator2D {
    nx: usize,
    ny: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Sums Kronecker terms. When `boundary` is given, every row whose index
/// touches the outer ring (`i ∈ {0, nx-1}` or `j ∈ {0, ny-1}`) is taken from
/// the `boundary` terms instead of `terms`.
pub fn assemble_2d(terms: &[KronTerm<'_>], boundary: Option<&[KronTerm<'_>]>) -> Result<SparseOperator2D> {
    let Some(first) = terms.first() else {
        return Err(Error::Usage("no operator terms".into()));
    };
    let (nx, ny) = (first.ax.dim(), first.by.dim());
    let all = terms.iter().chain(boundary.unwrap_or(&[]));
    if all.clone().any(|t| t.ax.dim() != nx || t.by.dim() != ny) {
        return Err(Error::Usage("Kronecker factors differ in size".into()));
    }
    let n = nx * ny;
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    let mut acc: Vec<f64> = Vec::new();
    let mut touched: Vec<usize> = Vec::new();
    let mut mark = vec![usize::MAX; n];
    for i in 0..nx {
        for j in 0..ny {
            let on_ring = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
            let src = match boundary {
                Some(b) if on_ring => b,
                _ => terms,
            };
            touched.clear();
            acc.clear();
            let row = i * ny + j;
            for t in src {
                let (kx, ax) = t.ax.row(i);
                let (ly, by) = t.by.row(j);
                for (dk, &a) in ax.iter().enumerate() {
                    if a == 0.0 {
                        continue;
                    }
                    for (dl, &b) in by.iter().enumerate() {
                        if b == 0.0 {
                            continue;
                        }
                        let col = (kx + dk) * ny + ly + dl;
                        if mark[col] != row {
                            mark[col] = row;
                            touched.push(col);
                            acc.push(0.0);
                        }
                        let slot = touched.iter().rposition(|&c| c == col).unwrap();
                        acc[slot] += t.coeff * a * b;
                    }
                }
            }
            let mut entries: Vec<(usize, f64)> = touched.iter().copied().zip(acc.iter().copied()).collect();
            entries.sort_by_key(|e| e.0);
            for (c, v) in entries {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
    }
    Ok(SparseOperator2D {
        nx,
        ny,
        row_ptr,
        cols,
        vals,
    })
}

impl SparseOperator2D {
    pub fn dim(&self) -> usize {
        self.nx * self.ny
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn max_row_nnz(&self) -> usize {
        self.row_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|&(col, _)| col == c).map_or(0.0, |e| e.1)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Usage(format!("vector of length {} for {} DOFs", x.len(), self.dim())));
        }
        Ok((0..self.dim()).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut d = vec![0.0; n * n];
        for r in 0..n {
            for (c, v) in self.row(r) {
                d[r * n + c] = v;
            }
        }
        d
    }

    /// Natural-order band representation.
    pub fn to_band(&self) -> BandMatrix {
        let n = self.dim();
        let (mut kl, mut ku) = (0, 0);
        for r in 0..n {
            for (c, _) in self.row(r) {
                kl = kl.max(r.saturating_sub(c));
                ku = ku.max(c.saturating_sub(r));
            }
        }
        let mut b = BandMatrix::zeros(n, kl, ku);
        for r in 0..n {
            for (c, v) in self.row(r) {
                b.set(r, c, v);
            }
        }
        b
    }

    /// Direct factorization through banded LU in natural ordering.
    pub fn factor(&self) -> Result<BandedLu> {
        if self.dim() > SPARSE_DOF_LIMIT {
            return Err(Error::Config(format!(
                "{} DOFs exceed the direct-solver limit {SPARSE_DOF_LIMIT}; use an ADI scheme",
                self.dim()
            )));
        }
        self.to_band().factor()
    }
}

pub fn sparse_solve(op: &SparseOperator2D, rhs: &[f64]) -> Result<Vec<f64>> {
    op.factor()?.solve(rhs)
}
