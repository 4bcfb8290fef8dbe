use rayon::prelude::*;

use crate::error::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
///
/// Row `i` stores columns `i - kl ..= i + ku` contiguously; entries that
/// fall outside the matrix are kept as zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        m.data.fill(1.0);
        m
    }

    /// Builds a band matrix from a dense row-major square array, keeping
    /// only the entries inside the requested band.
    pub fn from_dense(n: usize, kl: usize, ku: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::Usage(format!("dense input has {} entries, expected {}", dense.len(), n * n)));
        }
        let mut m = Self::zeros(n, kl, ku);
        for i in 0..n {
            for j in 0..n {
                let v = dense[i * n + j];
                if v != 0.0 {
                    if !m.in_band(i, j) {
                        return Err(Error::Usage(format!("entry ({i}, {j}) lies outside the band")));
                    }
                    m.set(i, j, v);
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    #[inline]
    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    #[inline]
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && j + self.kl >= i && j <= i + self.ku
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + j + self.kl - i]
        } else {
            0.0
        }
    }

    /// Panics when `(i, j)` lies outside the band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band ({}, {})", self.kl, self.ku);
        let w = self.width();
        self.data[i * w + j + self.kl - i] = v;
    }

    /// Column range and values of row `i` restricted to the matrix.
    pub fn row(&self, i: usize) -> (usize, &[f64]) {
        let w = self.width();
        let lo = i.saturating_sub(self.kl);
        let hi = (i + self.ku).min(self.n - 1);
        let base = i * w + lo + self.kl - i;
        (lo, &self.data[base..base + hi + 1 - lo])
    }

    /// Same matrix stored with wider bands.
    pub fn widen(&self, kl: usize, ku: usize) -> Self {
        assert!(kl >= self.kl && ku >= self.ku);
        let mut m = Self::zeros(self.n, kl, ku);
        for i in 0..self.n {
            let (lo, vals) = self.row(i);
            for (k, &v) in vals.iter().enumerate() {
                m.set(i, lo + k, v);
            }
        }
        m
    }

    /// `Σ c_k M_k` over matrices of equal dimension.
    pub fn combine(terms: &[(f64, &BandMatrix)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::Usage("empty linear combination".into()));
        };
        let n = first.n;
        if terms.iter().any(|(_, m)| m.n != n) {
            return Err(Error::Usage("dimension mismatch in linear combination".into()));
        }
        let kl = terms.iter().map(|(_, m)| m.kl).max().unwrap_or(0);
        let ku = terms.iter().map(|(_, m)| m.ku).max().unwrap_or(0);
        let mut out = Self::zeros(n, kl, ku);
        let w = out.width();
        for (c, m) in terms {
            for i in 0..n {
                let (lo, vals) = m.row(i);
                for (k, &v) in vals.iter().enumerate() {
                    out.data[i * w + lo + k + kl - i] += c * v;
                }
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            let (lo, vals) = self.row(i);
            d[i * self.n + lo..i * self.n + lo + vals.len()].copy_from_slice(vals);
        }
        d
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::Usage(format!("vector of length {} for a {}x{} matrix", x.len(), self.n, self.n)));
        }
        Ok((0..self.n)
            .map(|i| {
                let (lo, vals) = self.row(i);
                vals.iter().zip(&x[lo..]).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Tridiagonal view; fails unless `kl, ku <= 1`.
    pub fn to_tridiagonal(&self) -> Result<super::TridiagonalSystem> {
        if self.kl > 1 || self.ku > 1 {
            return Err(Error::Usage("matrix is not tridiagonal".into()));
        }
        let n = self.n;
        let sub = (1..n).map(|i| self.get(i, i - 1)).collect();
        let diag = (0..n).map(|i| self.get(i, i)).collect();
        let sup = (0..n.saturating_sub(1)).map(|i| self.get(i, i + 1)).collect();
        super::TridiagonalSystem::new(sub, diag, sup)
    }

    pub fn factor(&self) -> Result<BandedLu> {
        BandedLu::new(self)
    }
}

/// LU factors of a band matrix with partial (row) pivoting.
///
/// Row `i` of the working storage covers columns `i - kl ..= i + kl + ku`,
/// which holds both the pivoted `U` fill-in and the multipliers of `L`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
    piv: Vec<usize>,
}

impl BandedLu {
    fn new(a: &BandMatrix) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let w = 2 * kl + ku + 1;
        let mut data = vec![0.0; n * w];
        for i in 0..n {
            let (lo, vals) = a.row(i);
            for (k, &v) in vals.iter().enumerate() {
                data[i * w + lo + k + kl - i] = v;
            }
        }
        // column j of row i lives at i * w + j + kl - i
        let at = |i: usize, j: usize| i * w + j + kl - i;
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = data[at(k, k)].abs();
            for i in k + 1..=last {
                let v = data[at(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best >= PIVOT_FLOOR) {
                return Err(Error::Singular(format!("pivot {best:e} in column {k}")));
            }
            piv[k] = p;
            let hi = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=hi {
                    data.swap(at(k, j), at(p, j));
                }
            }
            let inv = 1.0 / data[at(k, k)];
            for i in k + 1..=last {
                let l = data[at(i, k)] * inv;
                data[at(i, k)] = l;
                if l != 0.0 {
                    for j in k + 1..=hi {
                        data[at(i, j)] -= l * data[at(k, j)];
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, data, piv })
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * (2 * self.kl + self.ku + 1) + j + self.kl - i]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::Usage(format!("rhs of length {} for dimension {n}", b.len())));
        }
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            for i in k + 1..=(k + self.kl).min(n - 1) {
                b[i] -= self.at(i, k) * bk;
            }
        }
        for k in (0..n).rev() {
            let hi = (k + self.kl + self.ku).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=hi {
                s -= self.at(k, j) * b[j];
            }
            b[k] = s / self.at(k, k);
        }
        Ok(())
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }

    /// Solves `A X = B` for every column of the row-major `n x m` array.
    pub fn solve_columns(&self, data: &mut [f64], m: usize) -> Result<()> {
        let n = self.n;
        if data.len() != n * m {
            return Err(Error::Usage(format!("block of {} entries is not {n} x {m}", data.len())));
        }
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                for c in 0..m {
                    data.swap(k * m + c, p * m + c);
                }
            }
            for i in k + 1..=(k + self.kl).min(n - 1) {
                let l = self.at(i, k);
                if l != 0.0 {
                    let (head, tail) = data.split_at_mut(i * m);
                    let src = &head[k * m..k * m + m];
                    for (d, s) in tail[..m].iter_mut().zip(src) {
                        *d -= l * s;
                    }
                }
            }
        }
        for k in (0..n).rev() {
            let hi = (k + self.kl + self.ku).min(n - 1);
            let (head, tail) = data.split_at_mut((k + 1) * m);
            let row = &mut head[k * m..];
            for j in k + 1..=hi {
                let u = self.at(k, j);
                let src = &tail[(j - k - 1) * m..(j - k) * m];
                for (d, s) in row.iter_mut().zip(src) {
                    *d -= u * s;
                }
            }
            let inv = 1.0 / self.at(k, k);
            row.iter_mut().for_each(|v| *v *= inv);
        }
        Ok(())
    }

    /// Solves `A x = b` independently for every contiguous row of length `n`.
    pub fn solve_rows(&self, data: &mut [f64]) -> Result<()> {
        if data.len() % self.n != 0 {
            return Err(Error::Usage("row block is not a multiple of the dimension".into()));
        }
        data.par_chunks_mut(self.n)
            .try_for_each(|row| self.solve_in_place(row))
    }
}
