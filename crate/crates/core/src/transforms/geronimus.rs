//! Inverse shifts as massless Geronimus transformations.
//!
//! `IT_i⁻¹` and `TJ_j⁻¹` divide the weight by a linear factor,
//! `ŵ(z) = c · w(z) / (z - r)`, with the masses chosen so that nothing is
//! added at the root; the transformed polynomials are two-term combinations
//! weighted by second-kind functions at `r`. The total inverse shift also
//! relabels the lattice, and its formulas involve `ΥQ_n(-1) - P_n(-1)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{half_precision, poly_translate, worst};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg;
use crate::orthopoly::OrthoSystem;
use crate::weights::ShiftKind;

/// Everything the Geronimus formulas need for one inverse shift.
#[derive(Clone, Debug)]
pub struct GeronimusTransform {
    pub kind: ShiftKind,
    pub root: BigReal,
    pub constant: BigReal,
    /// `d_n = Q_n(r)`, or `ΥQ_n(-1) - P_n(-1)` for the total shift
    pub d: Vec<BigReal>,
    /// `α_n = d_n / d_{n-1}`; `alpha[0]` is zero
    pub alpha: Vec<BigReal>,
    /// norms of the transformed family
    pub h_hat: Vec<BigReal>,
}

/// Evaluates the data of the inverse shift `kind` up to degree `nmax`.
pub fn geronimus_transform(sys: &OrthoSystem, kind: ShiftKind, nmax: usize) -> Result<GeronimusTransform> {
    let data = sys.weight().geronimus_data(kind)?;
    let prec = sys.precision();
    let total = kind == ShiftKind::Total;
    let q = sys.q_all(nmax, &data.root).map_err(|e| match e {
        Error::Pole(z) => Error::HypothesisViolated(format!("Geronimus root {z} lies on the lattice")),
        other => other,
    })?;
    let d: Vec<BigReal> = if total {
        let p = sys.p_all(nmax, &data.root);
        q.iter().zip(&p).map(|(qn, pn)| &data.constant * qn - pn).collect()
    } else {
        q
    };
    let mut alpha = vec![BigReal::zero(sys.working_precision())];
    for n in 1..=nmax {
        if d[n - 1].abs() < half_precision(prec) {
            return Err(Error::HypothesisViolated(format!(
                "Geronimus denominator of degree {} vanishes",
                n - 1
            )));
        }
        alpha.push(&d[n] / &d[n - 1]);
    }
    let h = sys.h();
    let mut h_hat = Vec::with_capacity(nmax + 1);
    h_hat.push(if total { -&d[0] } else { -(&data.constant * &d[0]) });
    for n in 1..=nmax {
        h_hat.push(-(&data.constant * &h[n - 1] * &alpha[n]));
    }
    Ok(GeronimusTransform {
        kind,
        root: data.root,
        constant: data.constant,
        d,
        alpha,
        h_hat,
    })
}

impl GeronimusTransform {
    pub fn nmax(&self) -> usize {
        self.alpha.len() - 1
    }

    /// Subdiagonal of the unit lower bidiagonal connection matrix, `-α_n`.
    pub fn omega_sub(&self, n: usize) -> BigReal {
        -&self.alpha[n]
    }

    /// `P̂_n(z)`; degree 0 is 1.
    pub fn eval(&self, sys: &OrthoSystem, n: usize, z: &BigReal) -> BigReal {
        let wp = sys.working_precision();
        let mut z = z.with_precision(wp.max(z.precision()));
        if self.kind == ShiftKind::Total {
            z -= BigReal::one(wp);
        }
        let p = sys.p_all(n, &z);
        if n == 0 {
            return p[0].clone();
        }
        &p[n] - &self.alpha[n] * &p[n - 1]
    }

    /// Coefficients of `P̂_0, …, P̂_nmax`.
    pub fn coeffs(&self, sys: &OrthoSystem) -> Vec<Vec<BigReal>> {
        let total = self.kind == ShiftKind::Total;
        let cp = sys.cholesky();
        let base: Vec<Vec<BigReal>> = (0..=self.nmax())
            .map(|n| {
                let c = cp.coeffs(n);
                if total {
                    poly_translate(c, -1)
                } else {
                    c.to_vec()
                }
            })
            .collect();
        (0..=self.nmax())
            .map(|n| {
                let mut c = base[n].clone();
                if n > 0 {
                    for (k, x) in base[n - 1].iter().enumerate() {
                        c[k] -= &self.alpha[n] * x;
                    }
                }
                c
            })
            .collect()
    }
}

/// `T̂P_n(z)` for an inverse shift, from the Geronimus formula.
pub fn geronimus_poly(sys: &OrthoSystem, kind: ShiftKind, n: usize, z: &BigReal) -> Result<BigReal> {
    if n == 0 {
        return Ok(BigReal::one(sys.working_precision()));
    }
    Ok(geronimus_transform(sys, kind, n)?.eval(sys, n, z))
}

/// Coefficient mismatch against the inverse-shifted family's own polynomials.
pub fn geronimus_coeff_residual(t: &GeronimusTransform, sys: &OrthoSystem, oracle: &OrthoSystem) -> BigReal {
    let c = t.coeffs(sys);
    worst(
        c.iter()
            .enumerate()
            .map(|(n, cn)| super::coeff_residual(cn, oracle.cholesky().coeffs(n))),
    )
}

/// Norms from the formula against the oracle's.
pub fn geronimus_norm_residual(t: &GeronimusTransform, oracle: &OrthoSystem) -> BigReal {
    let n = t.h_hat.len();
    linalg::relative_residual(&t.h_hat, &oracle.h()[..n])
}

/// Christoffel formula applied to the Geronimus polynomials must give back
/// the original family: the forward shift undoes the inverse one.
pub fn round_trip_residual(t: &GeronimusTransform, sys: &OrthoSystem) -> Result<BigReal> {
    let hat = t.coeffs(sys);
    let total = t.kind == ShiftKind::Total;
    // Christoffel root of the forward shift taken from the transformed weight
    let root = if total {
        BigReal::zero(sys.working_precision())
    } else {
        t.root.clone()
    };
    let mut out = Vec::new();
    for n in 0..t.nmax() {
        let back = super::christoffel_from_coeffs(&hat[n], &hat[n + 1], &root, total, sys.precision())?;
        out.push(super::coeff_residual(&back, sys.cholesky().coeffs(n)));
    }
    Ok(worst(out))
}

/// Second-kind relations between the family and its inverse shift, at the
/// samples. For `IT_i⁻¹`, `TJ_j⁻¹`:
/// `c (Q_n(z) - α_n Q_{n-1}(z)) = (z - r) Q̂_n(z) - δ_{n0} Ĥ_0`; for the
/// total shift, with `R_n(z) = ΥQ_n(z-1) - P_n(z-1)`,
/// `R_n(z) - α_n R_{n-1}(z) = z Q̂_n(z) - P̂_n(z) - δ_{n0} Ĥ_0`.
pub fn geronimus_second_kind_residual(
    t: &GeronimusTransform,
    sys: &OrthoSystem,
    oracle: &OrthoSystem,
    z_samples: &[BigReal],
) -> Result<BigReal> {
    let nmax = t.nmax();
    let wp = sys.working_precision();
    let one = BigReal::one(wp);
    let total = t.kind == ShiftKind::Total;
    let mut out = Vec::new();
    for z in z_samples {
        let z = z.with_precision(wp);
        let q_hat = oracle.q_all(nmax, &z)?;
        let (lhs_base, rhs): (Vec<BigReal>, Vec<BigReal>) = if total {
            let zm = &z - &one;
            let q = sys.q_all(nmax, &zm)?;
            let p = sys.p_all(nmax, &zm);
            let r: Vec<BigReal> = q.iter().zip(&p).map(|(qn, pn)| &t.constant * qn - pn).collect();
            let p_hat = oracle.p_all(nmax, &z);
            let rhs = (0..=nmax).map(|n| &z * &q_hat[n] - &p_hat[n]).collect();
            (r, rhs)
        } else {
            let q = sys.q_all(nmax, &z)?;
            let r = q.iter().map(|qn| &t.constant * qn).collect();
            let rhs = (0..=nmax).map(|n| (&z - &t.root) * &q_hat[n]).collect();
            (r, rhs)
        };
        let mut rhs = rhs;
        rhs[0] -= &t.h_hat[0];
        let lhs: Vec<BigReal> = (0..=nmax)
            .map(|n| {
                if n == 0 {
                    lhs_base[0].clone()
                } else {
                    &lhs_base[n] - &t.alpha[n] * &lhs_base[n - 1]
                }
            })
            .collect();
        out.push(linalg::relative_residual(&lhs, &rhs));
    }
    Ok(worst(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{ParameterSet, PearsonWeight, ShiftSpec};

    const P: usize = 160;

    fn weight(a: &[&str], b: &[&str], eta: &str) -> PearsonWeight {
        PearsonWeight::new(ParameterSet::parse(a, b, eta, P).unwrap())
    }

    fn tiny(x: &BigReal) -> bool {
        *x < BigReal::pow2(-(P as isize) / 2, P)
    }

    fn check(w: &PearsonWeight, kind: ShiftKind) {
        let sys = OrthoSystem::build(w, 12, P).unwrap();
        let hat = w.shift(ShiftSpec::inverse(kind)).unwrap();
        let oracle = OrthoSystem::build(&hat, 12, P).unwrap();
        let t = geronimus_transform(&sys, kind, 7).unwrap();
        assert!(tiny(&geronimus_coeff_residual(&t, &sys, &oracle)), "{kind:?} coeffs");
        assert!(tiny(&geronimus_norm_residual(&t, &oracle)), "{kind:?} norms");
        assert!(tiny(&round_trip_residual(&t, &sys).unwrap()), "{kind:?} round trip");
        let zs: Vec<BigReal> = ["2.5", "-3.25"].iter().map(|s| BigReal::parse(s, P).unwrap()).collect();
        let r = geronimus_second_kind_residual(&t, &sys, &oracle, &zs).unwrap();
        assert!(tiny(&r), "{kind:?} second kind {r:?}");
        let z = BigReal::parse("1.5", P).unwrap();
        let v = geronimus_poly(&sys, kind, 5, &z).unwrap();
        let direct = oracle.p(5, &z);
        assert!(tiny(&((v - &direct).abs() / direct.abs())));
    }

    #[test]
    fn meixner_a_inverse() {
        check(&weight(&["3"], &[], "0.4"), ShiftKind::A(0));
        check(&weight(&["2.5"], &[], "0.4"), ShiftKind::A(0));
    }

    #[test]
    fn b_inverse() {
        check(&weight(&[], &["1.5"], "0.7"), ShiftKind::B(0));
        check(&weight(&["1.7"], &["2.3"], "0.4"), ShiftKind::B(0));
    }

    #[test]
    fn total_inverse() {
        check(&weight(&[], &[], "0.5"), ShiftKind::Total);
        check(&weight(&[], &["1.5"], "0.7"), ShiftKind::Total);
        check(&weight(&["1.7"], &["2.3"], "0.4"), ShiftKind::Total);
    }

    #[test]
    fn charlier_total_norm_start() {
        // T⁻¹ leaves Charlier unchanged, so 1 - ηQ_0(-1) = ρ_0 = e^η
        let w = weight(&[], &[], "0.5");
        let sys = OrthoSystem::build(&w, 6, P).unwrap();
        let t = geronimus_transform(&sys, ShiftKind::Total, 3).unwrap();
        let e = BigReal::parse("0.5", P).unwrap().exp();
        assert!(tiny(&(&t.h_hat[0] - &e).abs()));
        assert_eq!(geronimus_poly(&sys, ShiftKind::Total, 0, &e).unwrap(), 1);
    }
}
