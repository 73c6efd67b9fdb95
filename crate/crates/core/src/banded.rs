//! Square matrices stored by diagonals.

use alloc::vec;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::linalg::{self, Matrix};

/// `size × size` matrix whose nonzero entries lie on diagonals
/// `-lower ..= upper`; diagonal `d` holds entries `(i, i + d)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    size: usize,
    lower: usize,
    upper: usize,
    diags: Vec<Vec<BigReal>>,
    prec: usize,
}

impl BandedMatrix {
    pub fn zeros(size: usize, lower: usize, upper: usize, prec: usize) -> Self {
        let lower = lower.min(size.saturating_sub(1));
        let upper = upper.min(size.saturating_sub(1));
        let diags = (-(lower as isize)..=upper as isize)
            .map(|d| vec![BigReal::zero(prec); size - d.unsigned_abs()])
            .collect();
        BandedMatrix {
            size,
            lower,
            upper,
            diags,
            prec,
        }
    }

    pub fn identity(size: usize, prec: usize) -> Self {
        let mut m = Self::zeros(size, 0, 0, prec);
        m.diags[0] = vec![BigReal::one(prec); size];
        m
    }

    /// Copies the band of a dense matrix; entries outside it are dropped.
    pub fn from_dense(m: &Matrix, lower: usize, upper: usize) -> Self {
        assert_eq!(m.rows(), m.cols());
        let prec = if m.rows() == 0 { 1 } else { m[(0, 0)].precision() };
        let mut b = Self::zeros(m.rows(), lower, upper, prec);
        for d in -(b.lower as isize)..=b.upper as isize {
            for (t, slot) in b.diag_mut(d).iter_mut().enumerate() {
                let (i, j) = Self::position(d, t);
                *slot = m[(i, j)].clone();
            }
        }
        b
    }

    /// Tridiagonal matrix from its three diagonals.
    pub fn tridiagonal(sub: &[BigReal], diag: &[BigReal], sup: &[BigReal]) -> Self {
        let n = diag.len();
        assert!(sub.len() + 1 == n && sup.len() + 1 == n);
        let prec = diag[0].precision();
        let mut b = Self::zeros(n, 1, 1, prec);
        if n > 1 {
            b.diag_mut(-1).clone_from_slice(sub);
            b.diag_mut(1).clone_from_slice(sup);
        }
        b.diag_mut(0).clone_from_slice(diag);
        b
    }

    fn position(d: isize, t: usize) -> (usize, usize) {
        if d >= 0 {
            (t, t + d as usize)
        } else {
            (t + d.unsigned_abs(), t)
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Entries `(i, i + d)` in order of `i`.
    pub fn diag(&self, d: isize) -> &[BigReal] {
        assert!(-(self.lower as isize) <= d && d <= self.upper as isize);
        &self.diags[(d + self.lower as isize) as usize]
    }

    pub fn diag_mut(&mut self, d: isize) -> &mut [BigReal] {
        assert!(-(self.lower as isize) <= d && d <= self.upper as isize);
        &mut self.diags[(d + self.lower as isize) as usize]
    }

    pub fn get(&self, i: usize, j: usize) -> BigReal {
        assert!(i < self.size && j < self.size);
        let d = j as isize - i as isize;
        if d < -(self.lower as isize) || d > self.upper as isize {
            return BigReal::zero(self.prec);
        }
        self.diag(d)[i.min(j)].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigReal) {
        let d = j as isize - i as isize;
        let t = i.min(j);
        self.diag_mut(d)[t] = v;
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.size, self.size, self.prec);
        for d in -(self.lower as isize)..=self.upper as isize {
            for (t, v) in self.diag(d).iter().enumerate() {
                m[Self::position(d, t)] = v.clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.size, self.upper, self.lower, self.prec);
        for d in -(self.lower as isize)..=self.upper as isize {
            out.diag_mut(-d).clone_from_slice(self.diag(d));
        }
        out
    }

    /// Leading `size × size` block.
    pub fn leading(&self, size: usize) -> Self {
        assert!(size <= self.size);
        let mut out = Self::zeros(size, self.lower, self.upper, self.prec);
        for d in -(out.lower as isize)..=out.upper as isize {
            let len = out.diag(d).len();
            let src = &self.diag(d)[..len];
            out.diag_mut(d).clone_from_slice(src);
        }
        out
    }

    /// Product of truncations; the band widths add.
    pub fn mul(&self, rhs: &BandedMatrix) -> BandedMatrix {
        assert_eq!(self.size, rhs.size);
        let n = self.size;
        let prec = self.prec.max(rhs.prec);
        let mut out = Self::zeros(n, self.lower + rhs.lower, self.upper + rhs.upper, prec);
        for d1 in -(self.lower as isize)..=self.upper as isize {
            for (t1, a) in self.diag(d1).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (i, k) = Self::position(d1, t1);
                for d2 in -(rhs.lower as isize)..=rhs.upper as isize {
                    let j = k as isize + d2;
                    if j < 0 || j >= n as isize {
                        continue;
                    }
                    let b = &rhs.diag(d2)[k.min(j as usize)];
                    if b.is_zero() {
                        continue;
                    }
                    let d = d1 + d2;
                    out.diag_mut(d)[i.min(j as usize)] += a * b;
                }
            }
        }
        out
    }

    fn combine(&self, rhs: &BandedMatrix, sub: bool) -> BandedMatrix {
        assert_eq!(self.size, rhs.size);
        let prec = self.prec.max(rhs.prec);
        let mut out = Self::zeros(
            self.size,
            self.lower.max(rhs.lower),
            self.upper.max(rhs.upper),
            prec,
        );
        for d in -(self.lower as isize)..=self.upper as isize {
            for (o, v) in out.diag_mut(d).iter_mut().zip(self.diag(d)) {
                *o += v;
            }
        }
        for d in -(rhs.lower as isize)..=rhs.upper as isize {
            for (o, v) in out.diag_mut(d).iter_mut().zip(rhs.diag(d)) {
                if sub {
                    *o -= v;
                } else {
                    *o += v;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &BandedMatrix) -> BandedMatrix {
        self.combine(rhs, false)
    }

    pub fn sub(&self, rhs: &BandedMatrix) -> BandedMatrix {
        self.combine(rhs, true)
    }

    pub fn scale(&self, s: &BigReal) -> BandedMatrix {
        let mut out = self.clone();
        for diag in &mut out.diags {
            for v in diag.iter_mut() {
                *v = &*v * s;
            }
        }
        out
    }

    /// `self + s·I`.
    pub fn shift_diagonal(&self, s: &BigReal) -> BandedMatrix {
        let mut out = self.clone();
        for v in out.diag_mut(0) {
            *v += s;
        }
        out
    }

    /// `p(self)` for ascending coefficients `p`, by Horner in the matrix argument.
    pub fn poly_eval(&self, coeffs: &[BigReal]) -> BandedMatrix {
        let n = self.size;
        let Some((lead, rest)) = coeffs.split_last() else {
            return Self::zeros(n, 0, 0, self.prec);
        };
        let mut acc = Self::identity(n, self.prec).scale(lead);
        for c in rest.iter().rev() {
            acc = acc.mul(self).shift_diagonal(c);
        }
        acc
    }

    pub fn max_abs(&self) -> BigReal {
        self.diags
            .iter()
            .map(|d| linalg::max_abs(d))
            .fold(BigReal::zero(self.prec), |m, x| if x > m { x } else { m })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 64;

    fn int(v: i64) -> BigReal {
        BigReal::from_i64(v, P)
    }

    fn sample(n: usize) -> BandedMatrix {
        let dense = Matrix::from_fn(n, n, |i, j| {
            if j + 1 >= i && j <= i + 2 {
                int((3 * i + 2 * j) as i64 - 4)
            } else {
                int(0)
            }
        });
        BandedMatrix::from_dense(&dense, 1, 2)
    }

    #[test]
    fn dense_roundtrip_and_access() {
        let b = sample(5);
        assert_eq!(b.get(2, 1), int(4));
        assert_eq!(b.get(0, 4), int(0));
        assert_eq!(BandedMatrix::from_dense(&b.to_dense(), 1, 2), b);
        assert_eq!(b.transpose().to_dense(), b.to_dense().transpose());
    }

    #[test]
    fn product_matches_dense() {
        let a = sample(6);
        let b = sample(6).transpose();
        let p = a.mul(&b);
        assert_eq!((p.lower(), p.upper()), (3, 3));
        assert_eq!(p.to_dense(), a.to_dense().mul(&b.to_dense()));
    }

    #[test]
    fn horner_in_matrix_argument() {
        let a = sample(5);
        // 2 - 3x + x²
        let got = a.poly_eval(&[int(2), int(-3), int(1)]).to_dense();
        let d = a.to_dense();
        let expect = d.mul(&d).sub(&d.scale(&int(3))).shift_diagonal(&int(2));
        assert_eq!(got, expect);
    }

    #[test]
    fn leading_block() {
        let a = sample(6);
        assert_eq!(a.leading(4).to_dense(), a.to_dense().leading(4, 4));
    }
}
