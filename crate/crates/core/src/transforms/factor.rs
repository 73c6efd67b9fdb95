//! LU and UL factorisations of shifted Jacobi matrices.
//!
//! For a forward shift with Christoffel root `r`, `J - rI = L U` with
//! `L = Ω`, `U = ω`, and reversing the factors gives the shifted Jacobi
//! matrix: `U L = TJ - rI`, except for the total shift where `U L = TJ + I`
//! (`r = 0`). For an inverse shift with Geronimus root `r`, the factors come
//! from second-kind functions: `J - rI = Û L̂` and `L̂ Û = Ĵ - r̂ I`, with `r̂`
//! the Christoffel root of the reverse (forward) shift.

use alloc::format;
use alloc::vec::Vec;

use super::{connection_matrices, geronimus::GeronimusTransform, worst};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::orthopoly::{tridiag_ldl_cf, OrthoSystem};
use crate::weights::{ShiftKind, ShiftSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorMode {
    Lu,
    Ul,
}

/// Bidiagonal factors of a shifted Jacobi truncation.
#[derive(Clone, Debug)]
pub struct JacobiFactorization {
    pub spec: ShiftSpec,
    pub mode: FactorMode,
    /// unit lower bidiagonal
    pub lower: Matrix,
    /// upper bidiagonal with unit superdiagonal
    pub upper: Matrix,
    /// `s` in `J - s I` being factored
    pub shift: BigReal,
}

/// Doolittle elimination of a tridiagonal matrix without pivoting.
pub fn lu_tridiagonal(a: &Matrix) -> Result<(Matrix, Matrix)> {
    let n = a.rows();
    let prec = a[(0, 0)].precision();
    let mut l = Matrix::identity(n, prec);
    let mut u = Matrix::zeros(n, n, prec);
    u[(0, 0)] = a[(0, 0)].clone();
    for i in 0..n {
        if i > 0 {
            if u[(i - 1, i - 1)].is_zero() {
                return Err(Error::NumericBreakdown(format!("zero pivot {}", i - 1)));
            }
            l[(i, i - 1)] = &a[(i, i - 1)] / &u[(i - 1, i - 1)];
            u[(i, i)] = &a[(i, i)] - &l[(i, i - 1)] * &a[(i - 1, i)];
        }
        if i + 1 < n {
            u[(i, i + 1)] = a[(i, i + 1)].clone();
        }
    }
    if u[(n - 1, n - 1)].is_zero() {
        return Err(Error::NumericBreakdown("zero final pivot".into()));
    }
    Ok((l, u))
}

/// `J - rI = L U` for a forward shift, on a `size × size` window.
pub fn jacobi_factorize(sys: &OrthoSystem, spec: ShiftSpec, size: usize) -> Result<JacobiFactorization> {
    if !spec.is_forward() {
        return Err(Error::Domain(format!(
            "{} is an inverse shift; use geronimus_factorize",
            spec.label()
        )));
    }
    let data = sys.weight().christoffel_data(spec.kind)?;
    let j = sys.jacobi().matrix(size);
    let (lower, upper) = lu_tridiagonal(&j.shift_diagonal(&-&data.root))?;
    Ok(JacobiFactorization {
        spec,
        mode: FactorMode::Lu,
        lower,
        upper,
        shift: data.root,
    })
}

impl JacobiFactorization {
    pub fn product(&self) -> Matrix {
        match self.mode {
            FactorMode::Lu => self.lower.mul(&self.upper),
            FactorMode::Ul => self.upper.mul(&self.lower),
        }
    }

    /// Reverse-order product on the leading `size - 1` rows, where it does
    /// not see the truncation.
    pub fn reversed(&self) -> Matrix {
        let k = self.lower.rows() - 1;
        let m = match self.mode {
            FactorMode::Lu => self.upper.mul(&self.lower),
            FactorMode::Ul => self.lower.mul(&self.upper),
        };
        m.leading(k, k)
    }
}

/// `‖LU - (J - rI)‖ / ‖J‖`.
pub fn lu_reconstruction_residual(sys: &OrthoSystem, f: &JacobiFactorization) -> BigReal {
    let size = f.lower.rows();
    let j = sys.jacobi().matrix(size);
    let target = j.shift_diagonal(&-&f.shift);
    f.product().sub(&target).max_abs() / j.max_abs()
}

/// Factors against the connection matrices built from the norms:
/// `L = Ω`, `U = ω`.
pub fn lu_connection_residual(sys: &OrthoSystem, shifted: &OrthoSystem, f: &JacobiFactorization) -> Result<BigReal> {
    let size = f.lower.rows();
    let pair = connection_matrices(sys, shifted, f.spec)?;
    let l = pair.big_omega.to_dense().leading(size, size);
    let u = pair.omega.to_dense().leading(size, size);
    Ok(worst([
        linalg::matrix_relative_residual(&f.lower, &l),
        linalg::matrix_relative_residual(&f.upper, &u),
    ]))
}

/// Shift `s` with `U L = TJ + s I` for a forward shift.
pub fn ul_target_shift(sys: &OrthoSystem, spec: ShiftSpec) -> Result<BigReal> {
    let data = sys.weight().christoffel_data(spec.kind)?;
    Ok(if spec.kind == ShiftKind::Total {
        BigReal::one(sys.working_precision())
    } else {
        -data.root
    })
}

/// `U L` against the Jacobi matrix of the shifted family, leading `window`.
pub fn ul_residual(sys: &OrthoSystem, shifted: &OrthoSystem, f: &JacobiFactorization, window: usize) -> Result<BigReal> {
    let ul = f.reversed();
    if window > ul.rows() {
        return Err(Error::WindowTooSmall {
            needed: window + 1,
            have: f.lower.rows(),
        });
    }
    let s = ul_target_shift(sys, f.spec)?;
    let target = shifted.jacobi().matrix(window).shift_diagonal(&s);
    Ok(linalg::matrix_relative_residual(&ul.leading(window, window), &target))
}

/// Continued-fraction LDLᵀ of the symmetric tridiagonal `(J - rI) H`,
/// against dense elimination and against `(Ω, c·TH)`.
pub fn cf_residual(sys: &OrthoSystem, shifted: &OrthoSystem, spec: ShiftSpec, size: usize) -> Result<BigReal> {
    let data = sys.weight().christoffel_data(spec.kind)?;
    let h = sys.h();
    let jac = sys.jacobi();
    let r: Vec<BigReal> = (0..size).map(|n| (&jac.beta[n] - &data.root) * &h[n]).collect();
    let s: Vec<BigReal> = (0..size - 1).map(|n| h[n + 1].clone()).collect();
    let (l, delta) = tridiag_ldl_cf(&r, &s)?;

    let dense = jac
        .matrix(size)
        .shift_diagonal(&-&data.root)
        .mul(&Matrix::diagonal(&h[..size]));
    let (ld, dd) = linalg::ldl(&dense, &BigReal::zero(1))?;
    let ld_sub: Vec<BigReal> = (0..size - 1).map(|n| ld[(n + 1, n)].clone()).collect();

    let pair = connection_matrices(sys, shifted, spec)?;
    let om: Vec<BigReal> = (0..size - 1).map(|n| pair.big_omega.get(n + 1, n)).collect();
    let cth: Vec<BigReal> = (0..size).map(|n| &data.constant * &shifted.h()[n]).collect();
    Ok(worst([
        linalg::relative_residual(&l, &ld_sub),
        linalg::relative_residual(&delta, &dd),
        linalg::relative_residual(&l, &om),
        linalg::relative_residual(&delta, &cth),
    ]))
}

/// `J - rI = Û L̂` from the Geronimus data, `Û = c H L̂ᵀ Ĥ⁻¹`.
pub fn geronimus_factorize(sys: &OrthoSystem, t: &GeronimusTransform, size: usize) -> Result<JacobiFactorization> {
    if size > t.nmax() + 1 {
        return Err(Error::WindowTooSmall {
            needed: size,
            have: t.nmax() + 1,
        });
    }
    let wp = sys.working_precision();
    let mut lower = Matrix::identity(size, wp);
    for n in 1..size {
        lower[(n, n - 1)] = t.omega_sub(n);
    }
    let h = Matrix::diagonal(&sys.h()[..size]);
    let h_hat_inv: Vec<BigReal> = t.h_hat[..size].iter().map(BigReal::recip).collect();
    let upper = h
        .mul(&lower.transpose())
        .mul(&Matrix::diagonal(&h_hat_inv))
        .scale(&t.constant);
    Ok(JacobiFactorization {
        spec: ShiftSpec::inverse(t.kind),
        mode: FactorMode::Ul,
        lower,
        upper,
        shift: t.root.clone(),
    })
}

/// `Û L̂` against `J - rI`, and `L̂ Û` against the transformed family's
/// Jacobi matrix, on the leading `size - 1` rows.
pub fn geronimus_factor_residuals(
    sys: &OrthoSystem,
    oracle: &OrthoSystem,
    f: &JacobiFactorization,
) -> (BigReal, BigReal) {
    let k = f.lower.rows() - 1;
    let j = sys.jacobi().matrix(k);
    let ul = f.product().leading(k, k);
    let r1 = linalg::matrix_relative_residual(&ul, &j.shift_diagonal(&-&f.shift));
    let back_root = if f.spec.kind == ShiftKind::Total {
        BigReal::zero(1)
    } else {
        f.shift.clone()
    };
    let target = oracle.jacobi().matrix(k).shift_diagonal(&-back_root);
    let r2 = linalg::matrix_relative_residual(&f.reversed(), &target);
    (r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::geronimus_transform;
    use crate::weights::{ParameterSet, PearsonWeight};

    const P: usize = 160;

    fn weight(a: &[&str], b: &[&str], eta: &str) -> PearsonWeight {
        PearsonWeight::new(ParameterSet::parse(a, b, eta, P).unwrap())
    }

    fn tiny(x: &BigReal) -> bool {
        *x < BigReal::pow2(-(P as isize) / 2, P)
    }

    #[test]
    fn forward_factorizations() {
        let cases = [
            (weight(&["2"], &[], "0.4"), ShiftKind::A(0)),
            (weight(&["1.7"], &["2.3"], "0.4"), ShiftKind::B(0)),
            (weight(&["1.7"], &["2.3"], "0.4"), ShiftKind::Total),
            (weight(&[], &[], "1"), ShiftKind::Total),
        ];
        for (w, kind) in cases {
            let spec = ShiftSpec::forward(kind);
            let sys = OrthoSystem::build(&w, 14, P).unwrap();
            let sh = OrthoSystem::build(&w.shift(spec).unwrap(), 14, P).unwrap();
            let f = jacobi_factorize(&sys, spec, 12).unwrap();
            assert!(tiny(&lu_reconstruction_residual(&sys, &f)), "{kind:?}");
            assert!(tiny(&lu_connection_residual(&sys, &sh, &f).unwrap()), "{kind:?}");
            assert!(tiny(&ul_residual(&sys, &sh, &f, 8).unwrap()), "{kind:?}");
            assert!(tiny(&cf_residual(&sys, &sh, spec, 12).unwrap()), "{kind:?}");
        }
    }

    #[test]
    fn first_pivot() {
        let w = weight(&["2"], &[], "0.4");
        let sys = OrthoSystem::build(&w, 8, P).unwrap();
        let f = jacobi_factorize(&sys, ShiftSpec::forward(ShiftKind::A(0)), 6).unwrap();
        let expect = &sys.jacobi().beta[0] + BigReal::from_i64(2, P);
        assert!(tiny(&(&f.upper[(0, 0)] - expect).abs()));
    }

    #[test]
    fn geronimus_factorizations() {
        let cases = [
            (weight(&["2.5"], &[], "0.4"), ShiftKind::A(0)),
            (weight(&[], &["1.5"], "0.7"), ShiftKind::B(0)),
            (weight(&[], &["1.5"], "0.7"), ShiftKind::Total),
        ];
        for (w, kind) in cases {
            let sys = OrthoSystem::build(&w, 14, P).unwrap();
            let hat = w.shift(ShiftSpec::inverse(kind)).unwrap();
            let oracle = OrthoSystem::build(&hat, 14, P).unwrap();
            let t = geronimus_transform(&sys, kind, 10).unwrap();
            let f = geronimus_factorize(&sys, &t, 10).unwrap();
            let (r1, r2) = geronimus_factor_residuals(&sys, &oracle, &f);
            assert!(tiny(&r1), "{kind:?} {r1:?}");
            assert!(tiny(&r2), "{kind:?} {r2:?}");
        }
    }
}
