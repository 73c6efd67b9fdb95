//! Pascal matrices and the Laguerre–Freud structure matrix Ψ.

use alloc::format;
use alloc::vec::Vec;

use crate::banded::BandedMatrix;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::orthopoly::{CholeskyPair, OrthoSystem};

fn binomial_rows(size: usize, prec: usize, signed: bool) -> BandedMatrix {
    let mut b = BandedMatrix::zeros(size, size.saturating_sub(1), 0, prec);
    let mut row: Vec<BigReal> = Vec::with_capacity(size);
    for n in 0..size {
        // Pascal rule on the previous row
        let mut next = Vec::with_capacity(n + 1);
        for m in 0..=n {
            let left = if m > 0 { row[m - 1].clone() } else { BigReal::zero(prec) };
            let up = if m < n { row[m].clone() } else { BigReal::zero(prec) };
            next.push(if m == 0 || m == n { BigReal::one(prec) } else { left + up });
        }
        for (m, v) in next.iter().enumerate() {
            let v = if signed && (n - m) % 2 == 1 { -v } else { v.clone() };
            b.set(n, m, v);
        }
        row = next;
    }
    b
}

/// Lower Pascal matrix `B_{n,m} = C(n, m)`, so that `B χ(z) = χ(z + 1)`.
pub fn pascal_matrix(size: usize, prec: usize) -> BandedMatrix {
    binomial_rows(size, prec, false)
}

/// `B⁻¹` with entries `(-1)^(n-m) C(n, m)`.
pub fn pascal_inverse(size: usize, prec: usize) -> BandedMatrix {
    binomial_rows(size, prec, true)
}

/// `Π = S B S⁻¹` and `Π⁻¹ = S B⁻¹ S⁻¹`; `P(z + 1) = Π P(z)`.
///
/// Products of lower-triangular truncations are exact, so no padding is needed.
pub fn dressed_pascal(cp: &CholeskyPair) -> (Matrix, Matrix) {
    let k = cp.size();
    let prec = cp.h[0].precision();
    let s_inv = cp.s.unit_lower_inverse();
    let b = pascal_matrix(k, prec).to_dense();
    let b_inv = pascal_inverse(k, prec).to_dense();
    (
        cp.s.mul(&b).mul(&s_inv),
        cp.s.mul(&b_inv).mul(&s_inv),
    )
}

/// Every construction of Ψ on the trusted window, before any zeroing.
#[derive(Clone, Debug)]
pub struct PsiConstruction {
    /// trusted window
    pub window: usize,
    pub lower: usize,
    pub upper: usize,
    /// `Π⁻¹ H θ(Jᵀ)` restricted to the window
    pub psi: Matrix,
    /// remaining constructions, labelled
    pub alternatives: Vec<(&'static str, Matrix)>,
    /// `H θ(Jᵀ)` and `σ(J) H` on the window
    pub h_theta: Matrix,
    pub sigma_h: Matrix,
    /// `Π` and `Π⁻¹`, `θ(J)`, `σ(J)` on the window
    pub pi: Matrix,
    pub pi_inv: Matrix,
    pub theta_j: Matrix,
    pub sigma_j: Matrix,
}

/// Rows of the structure matrix that are free of truncation effects.
pub fn psi_window(sys: &OrthoSystem) -> usize {
    let p = sys.weight().params();
    sys.jacobi().len().saturating_sub(p.m() + p.n() + 2)
}

/// Computes Ψ through all six equivalent products.
pub fn psi_constructions(sys: &OrthoSystem) -> Result<PsiConstruction> {
    let params = sys.weight().params();
    let (m_deg, n_deg) = (params.m(), params.n());
    let window = psi_window(sys);
    if window < 1 {
        return Err(Error::WindowTooSmall {
            needed: m_deg + n_deg + 4,
            have: sys.size(),
        });
    }
    let kj = sys.jacobi().len();
    let wp = sys.working_precision();
    let jac = sys.jacobi();
    let sup: Vec<BigReal> = (0..kj - 1).map(|_| BigReal::one(wp)).collect();
    let j = BandedMatrix::tridiagonal(&jac.gamma[1..kj], &jac.beta[..kj], &sup);
    let jt = j.transpose();
    let one = BigReal::one(wp);
    let theta = sys.weight().theta_coeffs();
    let sigma = sys.weight().sigma_coeffs();

    let cp = CholeskyPair {
        s: sys.cholesky().s.leading(kj, kj),
        h: sys.h()[..kj].to_vec(),
    };
    let (pi, pi_inv) = dressed_pascal(&cp);
    let h = Matrix::diagonal(&cp.h);
    let theta_j = j.poly_eval(theta).to_dense();
    let theta_jt = jt.poly_eval(theta).to_dense();
    let sigma_j = j.poly_eval(sigma).to_dense();
    let sigma_jt = jt.poly_eval(sigma).to_dense();
    let theta_j1 = j.shift_diagonal(&one).poly_eval(theta).to_dense();
    let sigma_jt1 = jt.shift_diagonal(&-one.clone()).poly_eval(sigma).to_dense();

    let h_theta = h.mul(&theta_jt);
    let sigma_h = sigma_j.mul(&h);
    let cut = |m: Matrix| m.leading(window, window);
    let psi = cut(pi_inv.mul(&h_theta));
    let alternatives = alloc::vec![
        ("sigma(J) H Pi^T", cut(sigma_h.mul(&pi.transpose()))),
        ("Pi^-1 theta(J) H", cut(pi_inv.mul(&theta_j).mul(&h))),
        ("H sigma(J^T) Pi^T", cut(h.mul(&sigma_jt).mul(&pi.transpose()))),
        ("theta(J+I) Pi^-1 H", cut(theta_j1.mul(&pi_inv).mul(&h))),
        ("H Pi^T sigma(J^T-I)", cut(h.mul(&pi.transpose()).mul(&sigma_jt1))),
    ];
    Ok(PsiConstruction {
        window,
        lower: m_deg,
        upper: n_deg + 1,
        psi,
        alternatives,
        h_theta: cut(h_theta),
        sigma_h: cut(sigma_h),
        pi: cut(pi),
        pi_inv: cut(pi_inv),
        theta_j: cut(theta_j),
        sigma_j: cut(sigma_j),
    })
}

impl PsiConstruction {
    /// Largest disagreement between the first construction and the others.
    pub fn paths_residual(&self) -> BigReal {
        self.alternatives
            .iter()
            .map(|(_, m)| linalg::matrix_relative_residual(m, &self.psi))
            .fold(BigReal::zero(1), |a, b| if b > a { b } else { a })
    }

    /// Largest out-of-band entry relative to `max|Ψ|`.
    pub fn band_residual(&self) -> BigReal {
        let w = self.window;
        let mut worst = BigReal::zero(1);
        for i in 0..w {
            for j in 0..w {
                if j > i + self.upper || i > j + self.lower {
                    let v = self.psi[(i, j)].abs();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
        let norm = self.psi.max_abs();
        if norm.is_zero() {
            worst
        } else {
            worst / norm
        }
    }

    /// Asymmetry of `H θ(Jᵀ)` and `σ(J) H`.
    pub fn symmetry_residual(&self) -> BigReal {
        let a = linalg::matrix_relative_residual(&self.h_theta.transpose(), &self.h_theta);
        let b = linalg::matrix_relative_residual(&self.sigma_h.transpose(), &self.sigma_h);
        if a > b {
            a
        } else {
            b
        }
    }

    /// Outer diagonals against `ψ^(N+1)_n = H_n γ_{n+1}⋯γ_{n+N+1}` and
    /// `ψ^(-M)_n = η H_n γ_{n+1}⋯γ_{n+M}`.
    pub fn diagonal_residual(&self, sys: &OrthoSystem) -> BigReal {
        let h = sys.h();
        let g = &sys.jacobi().gamma;
        let eta = sys.weight().params().eta();
        let w = self.window;
        let prod = |n: usize, len: usize| {
            (n + 1..=n + len).fold(h[n].clone(), |acc, k| acc * &g[k])
        };
        let mut got = Vec::new();
        let mut expect = Vec::new();
        for n in 0..w.saturating_sub(self.upper) {
            got.push(self.psi[(n, n + self.upper)].clone());
            expect.push(prod(n, self.upper));
        }
        for n in 0..w.saturating_sub(self.lower) {
            got.push(self.psi[(n + self.lower, n)].clone());
            expect.push(eta * prod(n, self.lower));
        }
        linalg::relative_residual(&got, &expect)
    }

    /// Ψ with the out-of-band entries hard-zeroed, provided they are below
    /// `threshold · max|Ψ|`.
    pub fn banded(&self, threshold: &BigReal) -> Result<BandedMatrix> {
        let r = self.band_residual();
        if r > *threshold {
            return Err(Error::NumericBreakdown(format!(
                "out-of-band entries of Ψ reach {r:.6} of its norm"
            )));
        }
        Ok(BandedMatrix::from_dense(&self.psi, self.lower, self.upper))
    }
}

/// Banded Ψ on the trusted window, checked against the half-precision threshold.
pub fn laguerre_freud(sys: &OrthoSystem) -> Result<BandedMatrix> {
    let c = psi_constructions(sys)?;
    c.banded(&crate::report::identity_tolerance(sys.precision()))
}

/// Residuals of `θ(z) P_n(z-1) = Σ_m Ψ_{n,m} P_m(z)/H_m` and
/// `σ(z) P_n(z+1) = Σ_m Ψ_{m,n} P_m(z)/H_m` for `n ≤ nmax`, worst over the
/// samples, each sample measured relative to its largest entry.
pub fn verify_p_shift(
    sys: &OrthoSystem,
    psi: &BandedMatrix,
    z_samples: &[BigReal],
    nmax: usize,
) -> Result<(BigReal, BigReal)> {
    let params = sys.weight().params();
    let reach = params.m().max(params.n() + 1);
    if nmax + reach >= psi.size() {
        return Err(Error::WindowTooSmall {
            needed: nmax + reach + 1,
            have: psi.size(),
        });
    }
    let wp = sys.working_precision();
    let one = BigReal::one(wp);
    let h = sys.h();
    let mut worst_theta = BigReal::zero(wp);
    let mut worst_sigma = BigReal::zero(wp);
    for z in z_samples {
        let z = z.with_precision(wp);
        let top = nmax + reach;
        let p = sys.p_all(top, &z);
        let pm = sys.p_all(nmax, &(&z - &one));
        let pp = sys.p_all(nmax, &(&z + &one));
        let th = sys.weight().theta(&z);
        let si = sys.weight().sigma(&z);
        let (mut lt, mut rt, mut ls, mut rs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for n in 0..=nmax {
            lt.push(&th * &pm[n]);
            rt.push(
                (0..=top)
                    .map(|m| psi.get(n, m) * &p[m] / &h[m])
                    .sum::<BigReal>(),
            );
            ls.push(&si * &pp[n]);
            rs.push(
                (0..=top)
                    .map(|m| psi.get(m, n) * &p[m] / &h[m])
                    .sum::<BigReal>(),
            );
        }
        let rt_res = linalg::relative_residual(&lt, &rt);
        let rs_res = linalg::relative_residual(&ls, &rs);
        if rt_res > worst_theta {
            worst_theta = rt_res;
        }
        if rs_res > worst_sigma {
            worst_sigma = rs_res;
        }
    }
    Ok((worst_theta, worst_sigma))
}
