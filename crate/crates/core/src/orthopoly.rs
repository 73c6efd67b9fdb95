//! Monic orthogonal polynomials from the LDLᵀ factorisation of the moment
//! matrix, their recurrence coefficients and the second-kind functions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::moments::{self, HankelTruncation, SeriesControl, TailRule};
use crate::weights::PearsonWeight;
use crate::GUARD_BITS;

/// `S G Sᵀ = diag(H)` with `S` lower unitriangular; row `n` of `S` holds the
/// coefficients of `P_n` in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct CholeskyPair {
    pub s: Matrix,
    pub h: Vec<BigReal>,
}

impl CholeskyPair {
    pub fn size(&self) -> usize {
        self.h.len()
    }

    /// Ascending coefficients of `P_n`.
    pub fn coeffs(&self, n: usize) -> &[BigReal] {
        &self.s.row(n)[..=n]
    }

    /// `max |S G Sᵀ - H| / max|G|`.
    pub fn reconstruction_residual(&self, g: &HankelTruncation) -> BigReal {
        let gm = g.to_matrix();
        let sgs = self.s.mul(&gm).mul(&self.s.transpose());
        let hm = Matrix::diagonal(&self.h);
        let diff = sgs.sub(&hm);
        diff.max_abs() / gm.max_abs()
    }
}

/// Symmetric elimination of the Hankel window.
pub fn cholesky_hankel(g: &HankelTruncation) -> Result<CholeskyPair> {
    let gm = g.to_matrix();
    let prec = gm[(0, 0)].precision();
    let (l, d) = linalg::ldl(&gm, &BigReal::pow2(-(prec as isize) + 8, prec))?;
    if let Some(j) = d.iter().position(|x| !x.is_positive()) {
        return Err(Error::NumericBreakdown(format!("non-positive pivot H_{j}")));
    }
    Ok(CholeskyPair {
        s: l.unit_lower_inverse(),
        h: d,
    })
}

/// Recurrence `z P_n = P_{n+1} + β_n P_n + γ_n P_{n-1}`; `gamma[0]` is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct JacobiCoeffs {
    pub beta: Vec<BigReal>,
    pub gamma: Vec<BigReal>,
}

impl JacobiCoeffs {
    /// Number of trusted rows.
    pub fn len(&self) -> usize {
        self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta.is_empty()
    }

    /// Leading `size × size` block of the tridiagonal Jacobi matrix.
    pub fn matrix(&self, size: usize) -> Matrix {
        assert!(size <= self.len());
        let prec = self.beta[0].precision();
        let mut j = Matrix::zeros(size, size, prec);
        for n in 0..size {
            j[(n, n)] = self.beta[n].clone();
            if n + 1 < size {
                j[(n, n + 1)] = BigReal::one(prec);
                j[(n + 1, n)] = self.gamma[n + 1].clone();
            }
        }
        j
    }

    /// `P_0(z), …, P_nmax(z)` by the three-term recurrence.
    pub fn eval_all(&self, nmax: usize, z: &BigReal) -> Vec<BigReal> {
        assert!(nmax <= self.len(), "degree {nmax} beyond the recurrence window");
        let prec = self.beta[0].precision().max(z.precision());
        let mut out = Vec::with_capacity(nmax + 1);
        out.push(BigReal::one(prec));
        if nmax == 0 {
            return out;
        }
        out.push(z - &self.beta[0]);
        for n in 1..nmax {
            let next = (z - &self.beta[n]) * &out[n] - &self.gamma[n] * &out[n - 1];
            out.push(next);
        }
        out
    }

    pub fn eval(&self, n: usize, z: &BigReal) -> BigReal {
        self.eval_all(n, z).pop().expect("non-empty")
    }
}

/// β and γ read off the entries of `S` and `H`.
pub fn recurrence_coeffs(cp: &CholeskyPair) -> Result<JacobiCoeffs> {
    let k = cp.size();
    if k < 2 {
        return Err(Error::WindowTooSmall { needed: 2, have: k });
    }
    let prec = cp.h[0].precision();
    let mut beta = Vec::with_capacity(k - 1);
    let mut gamma = Vec::with_capacity(k - 1);
    for n in 0..k - 1 {
        let upper = if n == 0 {
            BigReal::zero(prec)
        } else {
            cp.s[(n, n - 1)].clone()
        };
        beta.push(upper - &cp.s[(n + 1, n)]);
        gamma.push(if n == 0 {
            BigReal::zero(prec)
        } else {
            &cp.h[n] / &cp.h[n - 1]
        });
    }
    Ok(JacobiCoeffs { beta, gamma })
}

/// β and γ read off the band of `J = S Λ S⁻¹`; the last row is dropped since
/// it sees the truncation.
pub fn recurrence_by_conjugation(cp: &CholeskyPair) -> Result<JacobiCoeffs> {
    let k = cp.size();
    if k < 2 {
        return Err(Error::WindowTooSmall { needed: 2, have: k });
    }
    let prec = cp.h[0].precision();
    let s_lambda = Matrix::from_fn(k, k, |i, j| {
        if j == 0 {
            BigReal::zero(prec)
        } else {
            cp.s[(i, j - 1)].clone()
        }
    });
    let j = s_lambda.mul(&cp.s.unit_lower_inverse());
    let beta = (0..k - 1).map(|n| j[(n, n)].clone()).collect();
    let gamma = (0..k - 1)
        .map(|n| {
            if n == 0 {
                BigReal::zero(prec)
            } else {
                j[(n, n - 1)].clone()
            }
        })
        .collect();
    Ok(JacobiCoeffs { beta, gamma })
}

/// `P_n(z)` by Horner on row `n` of `S`.
pub fn eval_horner(cp: &CholeskyPair, n: usize, z: &BigReal) -> BigReal {
    horner(cp.coeffs(n), z)
}

/// Horner evaluation of ascending coefficients.
pub fn horner(coeffs: &[BigReal], z: &BigReal) -> BigReal {
    let prec = coeffs.first().map_or(z.precision(), BigReal::precision);
    coeffs
        .iter()
        .rev()
        .fold(BigReal::zero(prec), |acc, c| acc * z + c)
}

/// LDLᵀ of the symmetric tridiagonal with diagonal `r` and off-diagonal `s`,
/// written as the continued-fraction recursion
/// `δ_0 = r_0`, `l_{n+1} = s_n / δ_n`, `δ_{n+1} = r_{n+1} - s_n² / δ_n`.
///
/// Returns `(l, δ)` with `l[n]` the entry below pivot `n`.
pub fn tridiag_ldl_cf(r: &[BigReal], s: &[BigReal]) -> Result<(Vec<BigReal>, Vec<BigReal>)> {
    assert!(!r.is_empty() && s.len() + 1 == r.len());
    let mut delta = vec![r[0].clone()];
    let mut l = Vec::with_capacity(s.len());
    for (n, sn) in s.iter().enumerate() {
        let dn = &delta[n];
        if dn.is_zero() {
            return Err(Error::NumericBreakdown(format!("zero pivot δ_{n}")));
        }
        l.push(sn / dn);
        delta.push(&r[n + 1] - sn.square() / dn);
    }
    if delta.last().is_some_and(BigReal::is_zero) {
        return Err(Error::NumericBreakdown("zero final pivot".into()));
    }
    Ok((l, delta))
}

/// Internal precision used for a window of `size`: Hankel elimination loses
/// roughly a handful of bits per row.
pub fn working_precision(prec: usize, size: usize) -> usize {
    prec + GUARD_BITS + 8 * size
}

/// Everything derived from one weight on one window, computed at a
/// precision with enough guard bits for the Hankel elimination.
#[derive(Clone, Debug)]
pub struct OrthoSystem {
    weight: PearsonWeight,
    prec: usize,
    wp: usize,
    moments: HankelTruncation,
    cp: CholeskyPair,
    jacobi: JacobiCoeffs,
    control: SeriesControl,
}

impl OrthoSystem {
    pub fn build(w: &PearsonWeight, size: usize, prec: usize) -> Result<Self> {
        Self::build_with(w, size, prec, SeriesControl::default())
    }

    pub fn build_with(
        w: &PearsonWeight,
        size: usize,
        prec: usize,
        control: SeriesControl,
    ) -> Result<Self> {
        if size < 2 {
            return Err(Error::WindowTooSmall { needed: 2, have: size });
        }
        let wp = working_precision(prec, size);
        let moments = moments::moment_matrix(w, size, wp, control)?;
        let cp = cholesky_hankel(&moments)?;
        let jacobi = recurrence_coeffs(&cp)?;
        Ok(OrthoSystem {
            weight: w.clone(),
            prec,
            wp,
            moments,
            cp,
            jacobi,
            control,
        })
    }

    pub fn weight(&self) -> &PearsonWeight {
        &self.weight
    }

    /// Requested output precision.
    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Precision the system is held at.
    pub fn working_precision(&self) -> usize {
        self.wp
    }

    /// Size of the Hankel window; polynomials are available up to degree `size - 1`.
    pub fn size(&self) -> usize {
        self.cp.size()
    }

    pub fn moments(&self) -> &HankelTruncation {
        &self.moments
    }

    pub fn cholesky(&self) -> &CholeskyPair {
        &self.cp
    }

    pub fn h(&self) -> &[BigReal] {
        &self.cp.h
    }

    pub fn jacobi(&self) -> &JacobiCoeffs {
        &self.jacobi
    }

    pub fn control(&self) -> SeriesControl {
        self.control
    }

    /// Constant at working precision.
    pub fn int(&self, v: i64) -> BigReal {
        BigReal::from_i64(v, self.wp)
    }

    /// `P_0(z), …, P_nmax(z)`.
    pub fn p_all(&self, nmax: usize, z: &BigReal) -> Vec<BigReal> {
        self.jacobi.eval_all(nmax, &z.with_precision(self.wp.max(z.precision())))
    }

    pub fn p(&self, n: usize, z: &BigReal) -> BigReal {
        self.p_all(n, z).pop().expect("non-empty")
    }

    /// Second-kind functions `Q_n(z) = Σ_k P_n(k) w(k) / (z - k)`, `n ≤ nmax`.
    pub fn q_all(&self, nmax: usize, z: &BigReal) -> Result<Vec<BigReal>> {
        second_kind_all(self, nmax, z)
    }

    pub fn q(&self, n: usize, z: &BigReal) -> Result<BigReal> {
        Ok(self.q_all(n, z)?.pop().expect("non-empty"))
    }
}

/// Rejects points within `2^(-prec/2)` of a lattice point.
pub fn check_off_lattice(z: &BigReal, prec: usize) -> Result<()> {
    if z.is_negative() {
        let half = BigReal::pow2(-1, prec);
        if *z > -half {
            let near = BigReal::pow2(-((prec / 2) as isize), prec);
            if z.abs() < near {
                return Err(Error::Pole(format!("{z:.12}")));
            }
        }
        return Ok(());
    }
    if let Some(k) = z.round_to_i64() {
        let d = (z - BigReal::from_i64(k, prec)).abs();
        if d < BigReal::pow2(-((prec / 2) as isize), prec) {
            return Err(Error::Pole(format!("{z:.12}")));
        }
    }
    Ok(())
}

/// `Q_0(z), …, Q_nmax(z)` by summing over the lattice.
pub fn second_kind_all(sys: &OrthoSystem, nmax: usize, z: &BigReal) -> Result<Vec<BigReal>> {
    let wp = sys.working_precision();
    check_off_lattice(z, sys.precision())?;
    let z = z.with_precision(wp.max(z.precision()));
    let control = sys.control();
    let mut sums = vec![BigReal::zero(wp); nmax + 1];
    let mut rules: Vec<TailRule> = (0..=nmax)
        .map(|_| TailRule::new(wp - GUARD_BITS, control.run))
        .collect();
    for (k, wk) in sys.weight().terms(wp) {
        if k as usize > control.k_max {
            return Err(Error::SlowConvergence {
                k_max: control.k_max,
            });
        }
        let kk = BigReal::from_u64(k, wp);
        let factor = wk / (&z - &kk);
        let ps = sys.jacobi().eval_all(nmax, &kk);
        let mut done = true;
        for ((sum, rule), p) in sums.iter_mut().zip(rules.iter_mut()).zip(&ps) {
            let term = p * &factor;
            *sum += &term;
            if !rule.observe(&term.abs(), sum) {
                done = false;
            }
        }
        // the hump of k^n w(k) must be passed before trusting the tail
        if done && kk > z.abs() {
            break;
        }
    }
    Ok(sums)
}

/// Lattice Gram matrix `Σ_k P_n(k) P_m(k) w(k)` for `n, m ≤ nmax`, summed
/// directly over the lattice.
pub fn lattice_gram(sys: &OrthoSystem, nmax: usize) -> Result<Matrix> {
    let wp = sys.working_precision();
    let control = sys.control();
    let mut g = Matrix::zeros(nmax + 1, nmax + 1, wp);
    let mut rule = TailRule::new(wp - GUARD_BITS, control.run);
    let mut total = BigReal::zero(wp);
    for (k, wk) in sys.weight().terms(wp) {
        if k as usize > control.k_max {
            return Err(Error::SlowConvergence {
                k_max: control.k_max,
            });
        }
        let kk = BigReal::from_u64(k, wp);
        let ps = sys.jacobi().eval_all(nmax, &kk);
        let mut biggest = BigReal::zero(wp);
        for n in 0..=nmax {
            let pw = &ps[n] * &wk;
            for m in 0..=n {
                let t = &pw * &ps[m];
                if n == m {
                    biggest = biggest.max(t.abs());
                }
                g[(n, m)] += t;
            }
        }
        total += &biggest;
        if rule.observe(&biggest, &total) {
            break;
        }
    }
    for n in 0..=nmax {
        for m in n + 1..=nmax {
            g[(n, m)] = g[(m, n)].clone();
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ParameterSet;

    const P: usize = 192;

    fn w(a: &[&str], b: &[&str], eta: &str) -> PearsonWeight {
        PearsonWeight::new(ParameterSet::parse(a, b, eta, P).unwrap())
    }

    fn int(v: i64) -> BigReal {
        BigReal::from_i64(v, P)
    }

    fn num(s: &str) -> BigReal {
        BigReal::parse(s, P).unwrap()
    }

    fn small(x: &BigReal, bits: isize) -> bool {
        x.abs() < BigReal::pow2(-bits, P)
    }

    #[test]
    fn hand_cholesky() {
        let g = HankelTruncation::from_moments(vec![int(1), int(1), int(2)], 2).unwrap();
        let cp = cholesky_hankel(&g).unwrap();
        assert_eq!(cp.s[(1, 0)], -1);
        assert_eq!(cp.h, vec![int(1), int(1)]);
        let one = HankelTruncation::from_moments(vec![int(3)], 1).unwrap();
        let cp1 = cholesky_hankel(&one).unwrap();
        assert_eq!(cp1.h, vec![int(3)]);
        assert_eq!(cp1.s[(0, 0)], 1);
    }

    #[test]
    fn charlier_recurrence() {
        let eta = num("0.7");
        let sys = OrthoSystem::build(&w(&[], &[], "0.7"), 16, P).unwrap();
        let jc = sys.jacobi();
        for n in 0..=12 {
            let b = &jc.beta[n] - (int(n as i64) + &eta);
            assert!(small(&b, 170), "β_{n}");
            let g = &jc.gamma[n] - int(n as i64) * &eta;
            assert!(small(&g, 170), "γ_{n}");
        }
        let rho = sys.moments().moments();
        assert!(small(&(&jc.beta[0] - &rho[1] / &rho[0]), 180));
    }

    #[test]
    fn charlier_unit_norms() {
        let sys = OrthoSystem::build(&w(&[], &[], "1"), 2, P).unwrap();
        let e = BigReal::one(P).exp();
        assert!(small(&(&sys.h()[0] - &e), 180));
        assert!(small(&(&sys.h()[1] - &e), 180));
    }

    #[test]
    fn conjugation_path_agrees() {
        let sys = OrthoSystem::build(&w(&["2"], &[], "0.4"), 12, P).unwrap();
        let other = recurrence_by_conjugation(sys.cholesky()).unwrap();
        for n in 0..other.len() {
            assert!(small(&(&other.beta[n] - &sys.jacobi().beta[n]), 170));
            assert!(small(&(&other.gamma[n] - &sys.jacobi().gamma[n]), 170));
        }
    }

    #[test]
    fn horner_matches_recurrence() {
        let sys = OrthoSystem::build(&w(&[], &["1.5"], "0.7"), 12, P).unwrap();
        for z in ["-0.3", "2.5", "7"] {
            let z = num(z);
            let ps = sys.p_all(10, &z);
            for (n, p) in ps.iter().enumerate() {
                let h = eval_horner(sys.cholesky(), n, &z);
                let scale = p.abs().max(BigReal::one(P));
                assert!(small(&((p - h) / scale), 160), "n = {n}");
            }
        }
        assert_eq!(sys.p(0, &num("3.3")), 1);
        assert_eq!(sys.p(1, &num("3.3")), num("3.3") - &sys.jacobi().beta[0]);
    }

    #[test]
    fn continued_fraction_steps() {
        let (l, d) = tridiag_ldl_cf(&[int(2), int(2)], &[int(1)]).unwrap();
        assert_eq!(l[0], num("0.5"));
        assert_eq!(d, vec![int(2), num("1.5")]);
        assert!(tridiag_ldl_cf(&[int(0), int(1)], &[int(1)]).is_err());
    }

    #[test]
    fn second_kind_at_minus_one() {
        let eta = num("0.5");
        let sys = OrthoSystem::build(&w(&[], &[], "0.5"), 4, P).unwrap();
        let q0 = sys.q(0, &int(-1)).unwrap();
        // Σ η^k/(k!(-1-k)) = -(e^η - 1)/η
        let expect = -((eta.exp() - int(1)) / &eta);
        assert!(small(&(q0 - expect), 180));
        assert!(matches!(sys.q(0, &int(3)), Err(Error::Pole(_))));
    }

    #[test]
    fn residue_at_lattice_point() {
        let sys = OrthoSystem::build(&w(&[], &["1.5"], "0.7"), 8, P).unwrap();
        let d = BigReal::pow2(-(P as isize) / 4, P);
        let z = int(2) + &d;
        let q = sys.q_all(4, &z).unwrap();
        let w2 = sys.weight().eval(2, P);
        for (n, qn) in q.iter().enumerate() {
            let lim = sys.p(n, &int(2)) * &w2;
            let rel = ((&d * qn) - &lim).abs() / lim.abs().max(BigReal::one(P));
            assert!(rel < BigReal::pow2(-(P as isize) / 4 + 8, P), "n = {n}");
        }
    }

    #[test]
    fn lattice_orthogonality() {
        let sys = OrthoSystem::build(&w(&["2"], &[], "0.4"), 12, P).unwrap();
        let g = lattice_gram(&sys, 8).unwrap();
        for n in 0..=8 {
            for m in 0..=8 {
                let target = if n == m { sys.h()[n].clone() } else { int(0) };
                let err = (&g[(n, m)] - target).abs() / &sys.h()[n.max(m)];
                assert!(err < BigReal::pow2(-150, P), "({n}, {m})");
            }
        }
    }
}
