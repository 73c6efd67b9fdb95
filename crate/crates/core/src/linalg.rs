//! Small dense matrices over [`BigReal`].

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigReal>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, prec: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BigReal::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: usize) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = BigReal::one(prec);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn diagonal(d: &[BigReal]) -> Self {
        let prec = d.first().map_or(1, BigReal::precision);
        let mut m = Self::zeros(d.len(), d.len(), prec);
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigReal] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Leading `r × c` block.
    pub fn leading(&self, r: usize, c: usize) -> Self {
        assert!(r <= self.rows && c <= self.cols);
        Self::from_fn(r, c, |i, j| self[(i, j)].clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let prec = self.data.first().map_or(1, BigReal::precision);
        let mut out = Matrix::zeros(self.rows, rhs.cols, prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigReal]) -> Vec<BigReal> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigReal::zero(v.first().map_or(1, BigReal::precision));
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &BigReal) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self + s·I`.
    pub fn shift_diagonal(&self, s: &BigReal) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += s;
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigReal {
        max_abs(&self.data)
    }

    /// Inverse of a lower unitriangular matrix by forward substitution.
    pub fn unit_lower_inverse(&self) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let prec = self.data.first().map_or(1, BigReal::precision);
        let mut inv = Matrix::identity(n, prec);
        for i in 0..n {
            for j in (0..i).rev() {
                let mut acc = BigReal::zero(prec);
                for k in j..i {
                    let l = &self[(i, k)];
                    if !l.is_zero() {
                        acc += l * &inv[(k, j)];
                    }
                }
                inv[(i, j)] = -acc;
            }
        }
        inv
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = BigReal;
    fn index(&self, (i, j): (usize, usize)) -> &BigReal {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigReal {
        &mut self.data[i * self.cols + j]
    }
}

pub fn max_abs(xs: &[BigReal]) -> BigReal {
    let prec = xs.first().map_or(1, BigReal::precision);
    xs.iter()
        .map(BigReal::abs)
        .fold(BigReal::zero(prec), |m, x| if x > m { x } else { m })
}

/// `max|a_i - b_i| / max|b_i|`, or the absolute difference when `b` vanishes.
pub fn relative_residual(a: &[BigReal], b: &[BigReal]) -> BigReal {
    assert_eq!(a.len(), b.len());
    let diffs: Vec<BigReal> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let num = max_abs(&diffs);
    let den = max_abs(b);
    if den.is_zero() {
        num
    } else {
        num / den
    }
}

pub fn matrix_relative_residual(a: &Matrix, b: &Matrix) -> BigReal {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    relative_residual(&a.data, &b.data)
}

/// Square-root-free symmetric factorisation `A = L D Lᵀ`.
///
/// Fails when a pivot is not larger than `rel_threshold · |A_jj|` in magnitude.
pub fn ldl(a: &Matrix, rel_threshold: &BigReal) -> Result<(Matrix, Vec<BigReal>)> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let prec = a.data.first().map_or(1, BigReal::precision);
    let mut l = Matrix::identity(n, prec);
    let mut d: Vec<BigReal> = Vec::with_capacity(n);
    for j in 0..n {
        let mut dj = a[(j, j)].clone();
        for k in 0..j {
            dj -= l[(j, k)].square() * &d[k];
        }
        if dj.abs() <= rel_threshold * a[(j, j)].abs() {
            return Err(Error::NumericBreakdown(alloc::format!(
                "pivot {j} = {dj:.6} is indistinguishable from zero"
            )));
        }
        for i in j + 1..n {
            let mut acc = a[(i, j)].clone();
            for k in 0..j {
                acc -= &l[(i, k)] * &l[(j, k)] * &d[k];
            }
            l[(i, j)] = acc / &dj;
        }
        d.push(dj);
    }
    Ok((l, d))
}

/// Solves `A x = rhs` by Gaussian elimination with partial pivoting.
///
/// Pivots not exceeding `threshold` in magnitude report [`Error::SingularBlock`].
pub fn solve(a: &Matrix, rhs: &[BigReal], threshold: &BigReal) -> Result<Vec<BigReal>> {
    assert_eq!(a.rows, a.cols);
    assert_eq!(a.rows, rhs.len());
    let n = a.rows;
    let mut m = a.clone();
    let mut x: Vec<BigReal> = rhs.to_vec();
    for col in 0..n {
        let (piv, _) = (col..n)
            .map(|r| (r, m[(r, col)].abs()))
            .max_by(|p, q| p.1.cmp(&q.1))
            .expect("non-empty column");
        if m[(piv, col)].abs() <= *threshold {
            return Err(Error::SingularBlock);
        }
        if piv != col {
            for j in 0..n {
                let tmp = m[(col, j)].clone();
                m[(col, j)] = m[(piv, j)].clone();
                m[(piv, j)] = tmp;
            }
            x.swap(col, piv);
        }
        for r in col + 1..n {
            let f = &m[(r, col)] / &m[(col, col)];
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let delta = &f * &m[(col, j)];
                m[(r, j)] -= delta;
            }
            let delta = &f * &x[col];
            x[r] -= delta;
        }
    }
    for i in (0..n).rev() {
        let mut acc = x[i].clone();
        for j in i + 1..n {
            acc -= &m[(i, j)] * &x[j];
        }
        x[i] = acc / &m[(i, i)];
    }
    Ok(x)
}
