//! Lattice shifts as Geronimus–Uvarov transformations: resolvents and the
//! shift relations of second-kind functions.

use alloc::vec::Vec;

use super::worst;
use crate::banded::BandedMatrix;
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::orthopoly::OrthoSystem;
use crate::structure::PsiConstruction;

/// `ω⁺ = Ψᵀ H⁻¹` and `ω⁻ = Ψ H⁻¹` on the Ψ window.
#[derive(Clone, Debug)]
pub struct UvarovResolvents {
    pub omega_plus: Matrix,
    pub omega_minus: Matrix,
}

pub fn uvarov_resolvents(psi: &Matrix, h: &[BigReal]) -> UvarovResolvents {
    let k = psi.rows();
    let h_inv = Matrix::diagonal(&h[..k].iter().map(BigReal::recip).collect::<Vec<_>>());
    UvarovResolvents {
        omega_plus: psi.transpose().mul(&h_inv),
        omega_minus: psi.mul(&h_inv),
    }
}

/// `Ψᵀ H⁻¹ = Π σ(J)` and `Ψ H⁻¹ = Π⁻¹ θ(J)`.
pub fn resolvent_residual(c: &PsiConstruction, sys: &OrthoSystem) -> BigReal {
    let r = uvarov_resolvents(&c.psi, sys.h());
    worst([
        linalg::matrix_relative_residual(&r.omega_plus, &c.pi.mul(&c.sigma_j)),
        linalg::matrix_relative_residual(&r.omega_minus, &c.pi_inv.mul(&c.theta_j)),
    ])
}

/// Hankel array `(M_θ)_{p,q} = θ_{p+q+1}`, `0 ≤ p, q ≤ N`.
pub fn m_theta(sys: &OrthoSystem) -> Matrix {
    hankel_of(sys.weight().theta_coeffs(), sys.weight().params().n() + 1)
}

/// Hankel array `(M_σ)_{p,q} = σ_{p+q+1}`, `0 ≤ p, q < M`.
pub fn m_sigma(sys: &OrthoSystem) -> Matrix {
    hankel_of(sys.weight().sigma_coeffs(), sys.weight().params().m())
}

fn hankel_of(coeffs: &[BigReal], size: usize) -> Matrix {
    let prec = coeffs[0].precision();
    Matrix::from_fn(size, size, |p, q| {
        coeffs.get(p + q + 1).cloned().unwrap_or_else(|| BigReal::zero(prec))
    })
}

/// `H S⁻ᵀ (M χ(z); 0)` for degrees `0..=nmax`.
fn correction(sys: &OrthoSystem, m: &Matrix, z: &BigReal, nmax: usize) -> Vec<BigReal> {
    let wp = sys.working_precision();
    let k = m.rows();
    let mut chi = Vec::with_capacity(k);
    let mut pw = BigReal::one(wp);
    for _ in 0..k {
        chi.push(pw.clone());
        pw = &pw * z;
    }
    let v = if k == 0 { Vec::new() } else { m.mul_vec(&chi) };
    let s_inv = sys.cholesky().s.leading(k.max(1), k.max(1)).unit_lower_inverse();
    (0..=nmax)
        .map(|n| {
            if n >= k {
                return BigReal::zero(wp);
            }
            let acc: BigReal = (n..k).map(|j| &s_inv[(j, n)] * &v[j]).sum();
            &sys.h()[n] * acc
        })
        .collect()
}

/// Residuals of the second-kind shift relations.
#[derive(Clone, Debug)]
pub struct UvarovResiduals {
    /// `θ(z)Q_n(z) = Σ_{m=n-N-1}^{n+M} Ψ_{m,n} Q_m(z-1)/H_m`, `n ≥ N+1`
    pub banded_theta: BigReal,
    /// `σ(z)Q_n(z) = Σ_{m=n-M}^{n+N+1} Ψ_{n,m} Q_m(z+1)/H_m`, `n ≥ M`
    pub banded_sigma: BigReal,
    /// full relation with the `M_θ` correction, `n ≤ nmax`
    pub correction_theta: BigReal,
    /// full relation with the `M_σ` correction, `n ≤ nmax`
    pub correction_sigma: BigReal,
}

/// Checks the second-kind shift relations at off-lattice samples.
pub fn uvarov_second_kind_check(
    sys: &OrthoSystem,
    psi: &BandedMatrix,
    z_samples: &[BigReal],
    nmax: usize,
) -> Result<UvarovResiduals> {
    let params = sys.weight().params();
    let (m_deg, n_deg) = (params.m(), params.n());
    let top = nmax + m_deg.max(n_deg + 1);
    if top >= psi.size() {
        return Err(Error::WindowTooSmall {
            needed: top + 1,
            have: psi.size(),
        });
    }
    let wp = sys.working_precision();
    let one = BigReal::one(wp);
    let h = sys.h();
    let mt = m_theta(sys);
    let ms = m_sigma(sys);
    let mut bt = Vec::new();
    let mut bs = Vec::new();
    let mut ct = Vec::new();
    let mut cs = Vec::new();
    for z in z_samples {
        let z = z.with_precision(wp);
        let q = sys.q_all(top, &z)?;
        let qm = sys.q_all(top, &(&z - &one))?;
        let qp = sys.q_all(top, &(&z + &one))?;
        let th = sys.weight().theta(&z);
        let si = sys.weight().sigma(&z);
        let corr_t = correction(sys, &mt, &z, nmax);
        let corr_s = correction(sys, &ms, &z, nmax);
        let (mut lt, mut rt, mut ls, mut rs) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let (mut band_lt, mut band_rt, mut band_ls, mut band_rs) =
            (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for n in 0..=nmax {
            let lhs_t = &th * &q[n];
            let lo = n.saturating_sub(n_deg + 1);
            let sum_t: BigReal = (lo..=n + m_deg).map(|m| psi.get(m, n) * &qm[m] / &h[m]).sum();
            let lhs_s = &si * &q[n];
            let lo = n.saturating_sub(m_deg);
            let sum_s: BigReal = (lo..=n + n_deg + 1).map(|m| psi.get(n, m) * &qp[m] / &h[m]).sum();
            if n > n_deg {
                band_lt.push(lhs_t.clone());
                band_rt.push(sum_t.clone());
            }
            if n >= m_deg {
                band_ls.push(lhs_s.clone());
                band_rs.push(sum_s.clone());
            }
            lt.push(lhs_t);
            rt.push(sum_t + &corr_t[n]);
            ls.push(lhs_s);
            rs.push(sum_s + &corr_s[n]);
        }
        bt.push(linalg::relative_residual(&band_lt, &band_rt));
        bs.push(linalg::relative_residual(&band_ls, &band_rs));
        ct.push(linalg::relative_residual(&lt, &rt));
        cs.push(linalg::relative_residual(&ls, &rs));
    }
    Ok(UvarovResiduals {
        banded_theta: worst(bt),
        banded_sigma: worst(bs),
        correction_theta: worst(ct),
        correction_sigma: worst(cs),
    })
}
