//! Moment series `ρ_n = Σ_k kⁿ w(k)` and Hankel windows of the moment matrix.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::{identity_tolerance, VerificationReport};
use crate::structure::pascal_matrix;
use crate::weights::{PearsonWeight, ShiftKind, ShiftSpec};
use crate::GUARD_BITS;

/// Termination settings shared by every lattice series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesControl {
    /// hard limit on the number of lattice points summed
    pub k_max: usize,
    /// consecutive negligible terms required before stopping
    pub run: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            k_max: 1_000_000,
            run: 4,
        }
    }
}

/// Tail controller: a term is negligible when it is below
/// `2^(-prec-32)` of the partial sum and smaller than its predecessor.
#[derive(Clone, Debug)]
pub(crate) struct TailRule {
    threshold: BigReal,
    needed: usize,
    streak: usize,
    prev: Option<BigReal>,
    done: bool,
}

impl TailRule {
    pub(crate) fn new(prec: usize, needed: usize) -> Self {
        TailRule {
            threshold: BigReal::pow2(-(prec as isize) - 32, prec + GUARD_BITS),
            needed,
            streak: 0,
            prev: None,
            done: false,
        }
    }

    /// Feed `|term|` and the partial sum including it; returns `true` once converged.
    pub(crate) fn observe(&mut self, term_abs: &BigReal, partial: &BigReal) -> bool {
        if self.done {
            return true;
        }
        let decreasing = self.prev.as_ref().is_some_and(|p| term_abs < p);
        let small = *term_abs < &self.threshold * partial.abs()
            || (term_abs.is_zero() && !partial.is_zero());
        if small && decreasing {
            self.streak += 1;
        } else {
            self.streak = 0;
        }
        self.prev = Some(term_abs.clone());
        self.done = self.streak >= self.needed;
        self.done
    }

    pub(crate) fn is_done(&self) -> bool {
        self.done
    }
}

/// `ρ_0, …, ρ_{count-1}` from a single sweep over the lattice.
pub fn moments(
    w: &PearsonWeight,
    count: usize,
    prec: usize,
    control: SeriesControl,
) -> Result<Vec<BigReal>> {
    let wp = prec + GUARD_BITS;
    let mut sums = vec![BigReal::zero(wp); count];
    let mut rules: Vec<TailRule> = (0..count).map(|_| TailRule::new(prec, control.run)).collect();
    for (k, wk) in w.terms(wp) {
        if k as usize > control.k_max {
            return Err(Error::SlowConvergence {
                k_max: control.k_max,
            });
        }
        let kk = BigReal::from_u64(k, wp);
        let mut term = wk;
        let mut all_done = true;
        for (n, (sum, rule)) in sums.iter_mut().zip(rules.iter_mut()).enumerate() {
            if n > 0 {
                term = &term * &kk;
            }
            *sum += &term;
            if !rule.observe(&term.abs(), sum) {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    debug_assert!(rules.iter().all(TailRule::is_done));
    Ok(sums.into_iter().map(|s| s.with_precision(prec)).collect())
}

/// Single moment `ρ_n`.
pub fn moment(w: &PearsonWeight, n: usize, prec: usize, control: SeriesControl) -> Result<BigReal> {
    let mut all = moments(w, n + 1, prec, control)?;
    Ok(all.pop().expect("at least one moment"))
}

/// Leading `K × K` window of the moment matrix, `G_{n,m} = ρ_{n+m}`.
///
/// The window is backed by the single moment array, so the Hankel symmetry
/// holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelTruncation {
    size: usize,
    rho: Vec<BigReal>,
}

impl HankelTruncation {
    /// Wraps moments `ρ_0..ρ_{2K-2}` (extra moments are kept but unused).
    pub fn from_moments(rho: Vec<BigReal>, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Domain("window size must be at least 1".into()));
        }
        if rho.len() < 2 * size - 1 {
            return Err(Error::WindowTooSmall {
                needed: 2 * size - 1,
                have: rho.len(),
            });
        }
        Ok(HankelTruncation { size, rho })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn moments(&self) -> &[BigReal] {
        &self.rho
    }

    pub fn get(&self, n: usize, m: usize) -> &BigReal {
        assert!(n < self.size && m < self.size);
        &self.rho[n + m]
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(self.size, self.size, |i, j| self.rho[i + j].clone())
    }
}

/// Moment window of size `K`, all moments from one sweep.
pub fn moment_matrix(
    w: &PearsonWeight,
    size: usize,
    prec: usize,
    control: SeriesControl,
) -> Result<HankelTruncation> {
    if size == 0 {
        return Err(Error::Domain("window size must be at least 1".into()));
    }
    let rho = moments(w, 2 * size - 1, prec, control)?;
    HankelTruncation::from_moments(rho, size)
}

/// Hankel determinants `Δ_1..Δ_K` as running products of the LDLᵀ pivots.
pub fn hankel_dets(g: &HankelTruncation) -> Result<Vec<BigReal>> {
    let m = g.to_matrix();
    let prec = m[(0, 0)].precision();
    let (_, d) = linalg::ldl(&m, &BigReal::pow2(-(prec as isize) + 8, prec))?;
    let mut out = Vec::with_capacity(d.len());
    let mut acc = BigReal::one(prec);
    for pivot in &d {
        acc *= pivot;
        out.push(acc.clone());
    }
    Ok(out)
}

/// Residual of `(Λ + c I) G = c · G'` on the leading window, where `G'` is the
/// moment matrix of the contiguous weight.
pub fn contiguous_residual(
    rho: &[BigReal],
    shifted_rho: &[BigReal],
    c: &BigReal,
    window: usize,
) -> BigReal {
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for n in 0..window {
        for m in 0..window {
            lhs.push(&rho[n + m + 1] + c * &rho[n + m]);
            rhs.push(c * &shifted_rho[n + m]);
        }
    }
    linalg::relative_residual(&lhs, &rhs)
}

/// Residual of the total-shift relation `Λ G = η κ B (T G) Bᵀ`.
pub fn total_shift_residual(
    w: &PearsonWeight,
    rho: &[BigReal],
    shifted_rho: &[BigReal],
    window: usize,
) -> BigReal {
    let prec = rho[0].precision();
    let lhs = Matrix::from_fn(window, window, |n, m| rho[n + m + 1].clone());
    let tg = Matrix::from_fn(window, window, |n, m| shifted_rho[n + m].clone());
    let b = pascal_matrix(window, prec).to_dense();
    let c = w.params().eta() * w.params().kappa();
    let rhs = b.mul(&tg).mul(&b.transpose()).scale(&c);
    linalg::matrix_relative_residual(&lhs, &rhs)
}

/// Residual of `θ(Λ) G = B σ(Λ) G Bᵀ`; needs `2K - 1 + N + 1` moments.
pub fn gram_symmetry_residual(w: &PearsonWeight, rho: &[BigReal], window: usize) -> BigReal {
    let prec = rho[0].precision();
    let theta = w.theta_coeffs();
    let sigma = w.sigma_coeffs();
    let apply = |coeffs: &[BigReal], n: usize, m: usize| {
        coeffs
            .iter()
            .enumerate()
            .fold(BigReal::zero(prec), |acc, (j, c)| acc + c * &rho[n + m + j])
    };
    let lhs = Matrix::from_fn(window, window, |n, m| apply(theta, n, m));
    let sg = Matrix::from_fn(window, window, |n, m| apply(sigma, n, m));
    let b = pascal_matrix(window, prec).to_dense();
    let rhs = b.mul(&sg).mul(&b.transpose());
    linalg::matrix_relative_residual(&lhs, &rhs)
}

/// Checks the contiguous hypergeometric relations and the Pearson symmetry of
/// the moment matrix on a `K × K` window.
///
/// For `b_j ≤ 1` the lowering shift is unavailable, so the `b_j` relation is
/// checked between `b_j + 1` and `b_j` instead.
pub fn verify_moment_symmetries(
    w: &PearsonWeight,
    window: usize,
    prec: usize,
    control: SeriesControl,
) -> Result<Vec<VerificationReport>> {
    if window < 2 {
        return Err(Error::WindowTooSmall {
            needed: 2,
            have: window,
        });
    }
    let params = w.params();
    let (m_deg, n_deg) = (params.m(), params.n());
    let count = 2 * (window + n_deg + m_deg + 2);
    let wp = prec + GUARD_BITS;
    let tol = identity_tolerance(prec);
    let rho = moments(w, count, wp, control)?;
    let report = |name: alloc::string::String, residual: BigReal| {
        VerificationReport::new(name, params, window, prec, residual.with_precision(prec), tol.clone())
    };
    let mut out = Vec::new();

    for i in 0..m_deg {
        let shifted = w.shift(ShiftSpec::forward(ShiftKind::A(i)))?;
        let srho = moments(&shifted, count, wp, control)?;
        let c = params.a()[i].clone();
        out.push(report(
            format!("gram-hyper-a{}", i + 1),
            contiguous_residual(&rho, &srho, &c, window),
        ));
    }
    for j in 0..n_deg {
        let fwd = ShiftSpec::forward(ShiftKind::B(j));
        let residual = match w.shift(fwd) {
            Ok(shifted) => {
                let srho = moments(&shifted, count, wp, control)?;
                let c = &params.b()[j] - BigReal::one(prec);
                contiguous_residual(&rho, &srho, &c, window)
            }
            Err(Error::Domain(_)) => {
                let raised = w.shift(fwd.inverted())?;
                let rrho = moments(&raised, count, wp, control)?;
                let c = params.b()[j].clone();
                contiguous_residual(&rrho, &rho, &c, window)
            }
            Err(e) => return Err(e),
        };
        out.push(report(format!("gram-hyper-b{}", j + 1), residual));
    }
    let total = w.shift(ShiftSpec::forward(ShiftKind::Total))?;
    let trho = moments(&total, count, wp, control)?;
    out.push(report(
        "gram-hyper-total".into(),
        total_shift_residual(w, &rho, &trho, window),
    ));
    out.push(report(
        "gram-symmetry".into(),
        gram_symmetry_residual(w, &rho, window),
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::ParameterSet;

    const P: usize = 256;

    fn w(a: &[&str], b: &[&str], eta: &str) -> PearsonWeight {
        PearsonWeight::new(ParameterSet::parse(a, b, eta, P).unwrap())
    }

    fn tol(bits: isize) -> BigReal {
        BigReal::pow2(-bits, P)
    }

    fn rel(a: &BigReal, b: &BigReal) -> BigReal {
        crate::bigreal::relative_diff(a, b, &BigReal::pow2(-4000, P))
    }

    #[test]
    fn charlier_unit_moments_are_bell_multiples_of_e() {
        let c = w(&[], &[], "1");
        let e = BigReal::one(P).exp();
        let rho = moments(&c, 5, P, SeriesControl::default()).unwrap();
        for (n, bell) in [1, 1, 2, 5, 15].into_iter().enumerate() {
            let expect = &e * BigReal::from_i64(bell, P);
            assert!(rel(&rho[n], &expect) < tol(P as isize - 4), "n = {n}");
        }
    }

    #[test]
    fn charlier_first_moment() {
        let c = w(&[], &[], "0.5");
        let eta = BigReal::parse("0.5", P).unwrap();
        let expect = &eta * eta.exp();
        let got = moment(&c, 1, P, SeriesControl::default()).unwrap();
        assert!(rel(&got, &expect) < tol(P as isize - 4));
    }

    #[test]
    fn tiny_eta_is_dominated_by_first_term() {
        let g = w(&[], &["1.5"], "1e-30");
        let r = moment(&g, 0, P, SeriesControl::default()).unwrap();
        let dev = (r - BigReal::one(P)).to_f64();
        assert!(dev > 0.0 && dev < 1e-29);
    }

    #[test]
    fn slow_convergence_is_reported() {
        let m = w(&["1"], &[], "0.999");
        let ctl = SeriesControl { k_max: 50, run: 4 };
        assert!(matches!(
            moment(&m, 0, P, ctl),
            Err(Error::SlowConvergence { k_max: 50 })
        ));
    }

    #[test]
    fn hankel_window_and_determinants() {
        let c = w(&[], &[], "1");
        let g = moment_matrix(&c, 2, P, SeriesControl::default()).unwrap();
        assert_eq!(g.get(1, 0), g.get(0, 1));
        let e = BigReal::one(P).exp();
        assert!(rel(g.get(1, 1), &(&e * BigReal::from_i64(2, P))) < tol(P as isize - 4));
        let d = hankel_dets(&g).unwrap();
        assert_eq!(d[0], *g.get(0, 0));
        assert!(rel(&d[1], &e.square()) < tol(P as isize - 8));

        let single = moment_matrix(&c, 1, P, SeriesControl::default()).unwrap();
        assert_eq!(single.to_matrix().rows(), 1);
    }

    #[test]
    fn determinants_are_positive() {
        let g = w(&[], &["1.5"], "0.7");
        let h = moment_matrix(&g, 16, P, SeriesControl::default()).unwrap();
        assert!(hankel_dets(&h).unwrap().iter().all(BigReal::is_positive));
    }

    #[test]
    fn moment_symmetries_hold() {
        let g = w(&[], &["1.5"], "0.7");
        let reports = verify_moment_symmetries(&g, 8, P, SeriesControl::default()).unwrap();
        assert_eq!(reports.len(), 3);
        for r in &reports {
            assert!(r.residual < tol(192), "{}: {:?}", r.identity, r.residual);
        }
    }

    #[test]
    fn perturbed_moment_is_flagged() {
        let c = w(&[], &[], "1");
        let mut rho = moments(&c, 8, P, SeriesControl::default()).unwrap();
        assert!(gram_symmetry_residual(&c, &rho, 2) < tol(200));
        rho[1] += BigReal::parse("1e-6", P).unwrap();
        let r = gram_symmetry_residual(&c, &rho, 2).to_f64();
        assert!(r > 1e-8 && r < 1e-5, "{r}");
    }
}
