//! Contiguous transformations of the orthogonal family: Christoffel
//! (forward shifts), massless Geronimus (inverse shifts), the Jacobi LU/UL
//! factorisations they induce, quasi-determinant shift formulas and the
//! second-kind identities behind the Geronimus–Uvarov picture.

use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::orthopoly::OrthoSystem;
use crate::weights::{PearsonWeight, ShiftKind, ShiftSpec};

mod christoffel;
mod factor;
mod geronimus;
mod quasidet;
mod uvarov;

pub use christoffel::*;
pub use factor::*;
pub use geronimus::*;
pub use quasidet::*;
pub use uvarov::*;

/// Coefficients of `p(z + s)` from those of `p(z)`.
pub fn poly_translate(coeffs: &[BigReal], s: i64) -> Vec<BigReal> {
    let n = coeffs.len();
    let mut out: Vec<BigReal> = coeffs.to_vec();
    if n == 0 || s == 0 {
        return out;
    }
    let prec = coeffs[0].precision();
    let shift = BigReal::from_i64(s, prec);
    // repeated synthetic division by (z - s) gives the Taylor coefficients at s
    for i in 0..n {
        for k in (i..n - 1).rev() {
            let t = &out[k + 1] * &shift;
            out[k] += t;
        }
    }
    out
}

/// `(quotient, remainder)` of `p(z) / (z - r)`, ascending coefficients.
pub fn synthetic_division(coeffs: &[BigReal], r: &BigReal) -> (Vec<BigReal>, BigReal) {
    let n = coeffs.len();
    assert!(n >= 1);
    let mut q = Vec::with_capacity(n.saturating_sub(1));
    let mut carry = BigReal::zero(coeffs[0].precision());
    for c in coeffs.iter().rev() {
        let v = c + &carry * r;
        q.push(v.clone());
        carry = v;
    }
    let rem = q.pop().expect("non-empty");
    q.reverse();
    (q, rem)
}

/// Relative coefficient-wise mismatch `max|p - q| / max|q|`.
pub fn coeff_residual(p: &[BigReal], q: &[BigReal]) -> BigReal {
    crate::linalg::relative_residual(p, q)
}

/// The pair `(base, shifted)` on which a forward shift can be checked. When
/// the shift cannot be applied to `w` itself (a parameter would leave the
/// admissible region) the check is made from the other side, with `w`
/// playing the shifted role.
pub fn forward_pair(w: &PearsonWeight, kind: ShiftKind) -> Result<(PearsonWeight, PearsonWeight)> {
    let spec = ShiftSpec::forward(kind);
    match w.shift(spec) {
        Ok(s) => Ok((w.clone(), s)),
        Err(Error::Domain(_)) => Ok((w.shift(spec.inverted())?, w.clone())),
        Err(e) => Err(e),
    }
}

/// Same as [`forward_pair`] for an inverse shift.
pub fn inverse_pair(w: &PearsonWeight, kind: ShiftKind) -> Result<(PearsonWeight, PearsonWeight)> {
    let spec = ShiftSpec::inverse(kind);
    match w.shift(spec) {
        Ok(s) => Ok((w.clone(), s)),
        Err(Error::Domain(_)) => Ok((w.shift(spec.inverted())?, w.clone())),
        Err(e) => Err(e),
    }
}

/// Both systems built on the same window.
pub fn system_pair(
    base: &PearsonWeight,
    shifted: &PearsonWeight,
    size: usize,
    prec: usize,
) -> Result<(OrthoSystem, OrthoSystem)> {
    Ok((
        OrthoSystem::build(base, size, prec)?,
        OrthoSystem::build(shifted, size, prec)?,
    ))
}

/// Absolute threshold `2^(-prec/2)` used for hypothesis checks.
pub(crate) fn half_precision(prec: usize) -> BigReal {
    BigReal::pow2(-((prec / 2) as isize), prec)
}

/// Maximum of a list, zero when empty.
pub(crate) fn worst(xs: impl IntoIterator<Item = BigReal>) -> BigReal {
    xs.into_iter().fold(BigReal::zero(1), |a, b| a.max(b))
}
