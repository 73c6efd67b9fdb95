//! Forward shifts as Christoffel transformations.
//!
//! A forward shift multiplies the weight by a linear factor: for `IT_i` and
//! `TJ_j`, `c · Tw(z) = (z - r) w(z)`; for the total shift
//! `c · Tw(z - 1) = z w(z)` with `c = ηκ`. Root `r` and constant `c` come
//! from [`PearsonWeight::christoffel_data`].

use alloc::format;
use alloc::vec::Vec;

use super::{half_precision, poly_translate, synthetic_division, worst};
use crate::banded::BandedMatrix;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg;
use crate::orthopoly::{horner, OrthoSystem};
use crate::weights::{ShiftKind, ShiftSpec};

/// Connection matrices between a family and its forward shift:
/// `ω P(z) = (z - r) TP(z)` and `Ω TP(z) = P(z)` (total shift:
/// `ω P(z) = z TP(z - 1)` and `Ω TP(z) = P(z + 1)`).
#[derive(Clone, Debug)]
pub struct ConnectionPair {
    /// upper bidiagonal, unit superdiagonal
    pub omega: BandedMatrix,
    /// lower bidiagonal, unit diagonal
    pub big_omega: BandedMatrix,
    pub shift: ShiftSpec,
    pub root: BigReal,
    pub constant: BigReal,
}

fn check_forward(spec: ShiftSpec) -> Result<ShiftKind> {
    if !spec.is_forward() {
        return Err(Error::Domain(format!(
            "{} is an inverse shift; use the Geronimus formulas",
            spec.label()
        )));
    }
    Ok(spec.kind)
}

/// Builds `ω` and `Ω` from the norms of both families.
pub fn connection_matrices(
    sys: &OrthoSystem,
    shifted: &OrthoSystem,
    spec: ShiftSpec,
) -> Result<ConnectionPair> {
    let kind = check_forward(spec)?;
    let data = sys.weight().christoffel_data(kind)?;
    let size = sys.size().min(shifted.size());
    let wp = sys.working_precision();
    let (h, th) = (sys.h(), shifted.h());
    if let Some(n) = (0..size).find(|&n| h[n].is_zero() || th[n].is_zero()) {
        return Err(Error::ZeroDenominator(format!("H_{n} or TH_{n}")));
    }
    let mut omega = BandedMatrix::zeros(size, 0, 1, wp);
    let mut big_omega = BandedMatrix::zeros(size, 1, 0, wp);
    for n in 0..size {
        omega.set(n, n, &data.constant * &th[n] / &h[n]);
        big_omega.set(n, n, BigReal::one(wp));
        if n + 1 < size {
            omega.set(n, n + 1, BigReal::one(wp));
            big_omega.set(n + 1, n, &h[n + 1] / (&data.constant * &th[n]));
        }
    }
    Ok(ConnectionPair {
        omega,
        big_omega,
        shift: spec,
        root: data.root,
        constant: data.constant,
    })
}

impl ConnectionPair {
    /// `ω H` against `c · TH · Ωᵀ`.
    pub fn omega_identity_residual(&self, sys: &OrthoSystem, shifted: &OrthoSystem) -> BigReal {
        let size = self.omega.size();
        let h = linalg::Matrix::diagonal(&sys.h()[..size]);
        let th = linalg::Matrix::diagonal(&shifted.h()[..size]);
        let lhs = self.omega.to_dense().mul(&h);
        let rhs = th.mul(&self.big_omega.to_dense().transpose()).scale(&self.constant);
        linalg::matrix_relative_residual(&lhs, &rhs)
    }

    /// Diagonal of `ω` against `-P_{n+1}(r)/P_n(r)`.
    pub fn diagonal_zero_residual(&self, sys: &OrthoSystem, nmax: usize) -> BigReal {
        let p = sys.p_all(nmax + 1, &self.root);
        let got: Vec<BigReal> = (0..=nmax).map(|n| self.omega.get(n, n)).collect();
        let expect: Vec<BigReal> = (0..=nmax).map(|n| -(&p[n + 1] / &p[n])).collect();
        linalg::relative_residual(&got, &expect)
    }

    /// Worst residual of the two connection identities over the samples,
    /// degrees `n ≤ nmax`.
    pub fn connection_residual(
        &self,
        sys: &OrthoSystem,
        shifted: &OrthoSystem,
        z_samples: &[BigReal],
        nmax: usize,
    ) -> BigReal {
        let total = self.shift.kind == ShiftKind::Total;
        let wp = sys.working_precision();
        let one = BigReal::one(wp);
        let mut out = Vec::new();
        for z in z_samples {
            let z = z.with_precision(wp);
            let p = sys.p_all(nmax + 1, &z);
            let (factor, targ) = if total {
                (z.clone(), &z - &one)
            } else {
                (&z - &self.root, z.clone())
            };
            let tp = shifted.p_all(nmax, &targ);
            let lhs: Vec<BigReal> = (0..=nmax)
                .map(|n| &self.omega.get(n, n) * &p[n] + &p[n + 1])
                .collect();
            let rhs: Vec<BigReal> = tp.iter().map(|t| &factor * t).collect();
            out.push(linalg::relative_residual(&lhs, &rhs));

            let tpz = shifted.p_all(nmax, &z);
            let p_target = if total { sys.p_all(nmax, &(&z + &one)) } else { p[..=nmax].to_vec() };
            let lhs2: Vec<BigReal> = (0..=nmax)
                .map(|n| {
                    if n == 0 {
                        tpz[0].clone()
                    } else {
                        &tpz[n] + self.big_omega.get(n, n - 1) * &tpz[n - 1]
                    }
                })
                .collect();
            out.push(linalg::relative_residual(&lhs2, &p_target));
        }
        worst(out)
    }
}

/// Ratio `P_{n+1}(r)/P_n(r)` with the non-vanishing hypothesis checked.
fn kernel_ratio(p_n: &BigReal, p_n1: &BigReal, prec: usize, what: &str) -> Result<BigReal> {
    if p_n.abs() < half_precision(prec) {
        return Err(Error::HypothesisViolated(format!(
            "{what} vanishes at the Christoffel root"
        )));
    }
    Ok(p_n1 / p_n)
}

/// Value of the forward-shifted polynomial from the kernel formula
/// `TP_n(z) = [P_{n+1}(z) - (P_{n+1}(r)/P_n(r)) P_n(z)] / (z - r)`.
///
/// For the total shift the root is `0` and the value returned is
/// `TP_n(z - 1) = [P_{n+1}(z) - (P_{n+1}(0)/P_n(0)) P_n(z)] / z`.
pub fn christoffel_poly(sys: &OrthoSystem, spec: ShiftSpec, n: usize, z: &BigReal) -> Result<BigReal> {
    let kind = check_forward(spec)?;
    let data = sys.weight().christoffel_data(kind)?;
    let wp = sys.working_precision();
    let z = z.with_precision(wp);
    let d = &z - &data.root;
    if d.abs() < half_precision(sys.precision()) {
        return Err(Error::PointOnDivisor(format!("{:.12}", data.root)));
    }
    let pr = sys.p_all(n + 1, &data.root);
    let ratio = kernel_ratio(&pr[n], &pr[n + 1], sys.precision(), "P_n")?;
    let pz = sys.p_all(n + 1, &z);
    Ok((&pz[n + 1] - ratio * &pz[n]) / d)
}

/// Kernel formula on coefficient vectors: `p_n`, `p_n1` are the ascending
/// coefficients of `P_n`, `P_{n+1}`. Returns the coefficients of `TP_n`.
pub fn christoffel_from_coeffs(
    p_n: &[BigReal],
    p_n1: &[BigReal],
    root: &BigReal,
    total: bool,
    prec: usize,
) -> Result<Vec<BigReal>> {
    let ratio = kernel_ratio(&horner(p_n, root), &horner(p_n1, root), prec, "P_n")?;
    let mut num: Vec<BigReal> = p_n1.to_vec();
    for (k, c) in p_n.iter().enumerate() {
        num[k] -= &ratio * c;
    }
    // the remainder vanishes by construction of the ratio
    let (q, _) = synthetic_division(&num, root);
    Ok(if total { poly_translate(&q, 1) } else { q })
}

/// Coefficients of `TP_0, …, TP_nmax` from the kernel formula.
pub fn christoffel_coeffs(sys: &OrthoSystem, spec: ShiftSpec, nmax: usize) -> Result<Vec<Vec<BigReal>>> {
    let kind = check_forward(spec)?;
    let data = sys.weight().christoffel_data(kind)?;
    let cp = sys.cholesky();
    if nmax + 1 >= cp.size() {
        return Err(Error::WindowTooSmall {
            needed: nmax + 2,
            have: cp.size(),
        });
    }
    (0..=nmax)
        .map(|n| {
            christoffel_from_coeffs(
                cp.coeffs(n),
                cp.coeffs(n + 1),
                &data.root,
                kind == ShiftKind::Total,
                sys.precision(),
            )
        })
        .collect()
}

/// Worst relative coefficient mismatch between the kernel formula and the
/// shifted family's own Cholesky polynomials, `n ≤ nmax`.
pub fn christoffel_coeff_residual(
    sys: &OrthoSystem,
    shifted: &OrthoSystem,
    spec: ShiftSpec,
    nmax: usize,
) -> Result<BigReal> {
    let formula = christoffel_coeffs(sys, spec, nmax)?;
    Ok(worst(formula.iter().enumerate().map(|(n, c)| {
        super::coeff_residual(c, shifted.cholesky().coeffs(n))
    })))
}
