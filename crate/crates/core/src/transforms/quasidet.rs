//! Last quasi-determinants and the determinantal shift formulas.

use alloc::format;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::orthopoly::OrthoSystem;

/// Block array `[[A, B], [C, D]]` with scalar `D`.
#[derive(Clone, Debug)]
pub struct QuasiDetInput {
    pub a: Matrix,
    pub b: Vec<BigReal>,
    pub c: Vec<BigReal>,
    pub d: BigReal,
}

/// `Θ* = D - C A⁻¹ B`, solving with `A` rather than inverting it.
///
/// Pivots below `2^(-prec/2) · max|A|` report [`Error::SingularBlock`].
pub fn quasidet_theta_star(q: &QuasiDetInput, prec: usize) -> Result<BigReal> {
    let k = q.a.rows();
    assert!(q.a.cols() == k && q.b.len() == k && q.c.len() == k);
    if k == 0 {
        return Ok(q.d.clone());
    }
    let threshold = super::half_precision(prec) * q.a.max_abs();
    let x = linalg::solve(&q.a, &q.b, &threshold)?;
    let cx: BigReal = q.c.iter().zip(&x).map(|(c, x)| c * x).sum();
    Ok(&q.d - cx)
}

/// Which neighbour of `P_n` the determinantal formula produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `θ(z) P_n(z - 1)`
    Backward,
    /// `(σ(z)/η) P_n(z + 1)`
    Forward,
}

fn distinct(xs: &[BigReal], what: &str, prec: usize) -> Result<()> {
    let tol = super::half_precision(prec);
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if (&xs[i] - &xs[j]).abs() < tol {
                return Err(Error::HypothesisViolated(format!(
                    "{what}_{} and {what}_{} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

fn pole_to_hypothesis(e: Error) -> Error {
    match e {
        Error::Pole(z) => Error::HypothesisViolated(format!("second-kind point {z} lies on the lattice")),
        Error::SingularBlock => Error::HypothesisViolated("singular leading block".into()),
        other => other,
    }
}

/// Determinantal expression for a neighbour of `P_n`.
///
/// Backward (`n ≥ M`): rows `n-M ..= n+N+1`, columns `P(0)`, `P(1-b_k)`,
/// `Q(1-a_k)`, `P(z)`; the last quasi-determinant is `θ(z) P_n(z-1)`.
///
/// Forward (`n ≥ N+1`): rows `n-N-1 ..= n+M`, columns `P(-a_k)`,
/// `ΥQ(-1) - P(-1)`, `Q(-b_k)`, `P(z)`; the result is `(σ(z)/η) P_n(z+1)`.
pub fn shifted_poly_determinantal(
    sys: &OrthoSystem,
    n: usize,
    z: &BigReal,
    direction: ShiftDirection,
) -> Result<BigReal> {
    let params = sys.weight().params();
    let (m_deg, n_deg) = (params.m(), params.n());
    let prec = sys.precision();
    let wp = sys.working_precision();
    distinct(params.a(), "a", prec)?;
    distinct(params.b(), "b", prec)?;
    let one = BigReal::one(wp);
    let (first, last) = match direction {
        ShiftDirection::Backward => {
            if n < m_deg {
                return Err(Error::HypothesisViolated(format!("backward formula needs n ≥ M = {m_deg}")));
            }
            (n - m_deg, n + n_deg + 1)
        }
        ShiftDirection::Forward => {
            if n < n_deg + 1 {
                return Err(Error::HypothesisViolated(format!(
                    "forward formula needs n ≥ N + 1 = {}",
                    n_deg + 1
                )));
            }
            (n - n_deg - 1, n + m_deg)
        }
    };
    if last >= sys.jacobi().len() {
        return Err(Error::WindowTooSmall {
            needed: last + 2,
            have: sys.size(),
        });
    }
    // each column is a sequence indexed by degree 0..=last
    let mut columns: Vec<Vec<BigReal>> = Vec::new();
    match direction {
        ShiftDirection::Backward => {
            columns.push(sys.p_all(last, &BigReal::zero(wp)));
            for b in params.b() {
                columns.push(sys.p_all(last, &(&one - b)));
            }
            for a in params.a() {
                columns.push(sys.q_all(last, &(&one - a)).map_err(pole_to_hypothesis)?);
            }
        }
        ShiftDirection::Forward => {
            for a in params.a() {
                columns.push(sys.p_all(last, &-a.clone()));
            }
            let m1 = -one.clone();
            let q = sys.q_all(last, &m1).map_err(pole_to_hypothesis)?;
            let p = sys.p_all(last, &m1);
            columns.push(q.iter().zip(&p).map(|(q, p)| params.upsilon() * q - p).collect());
            for b in params.b() {
                columns.push(sys.q_all(last, &-b.clone()).map_err(pole_to_hypothesis)?);
            }
        }
    }
    let pz = sys.p_all(last, z);
    let k = last - first;
    debug_assert_eq!(columns.len(), k);
    let a = Matrix::from_fn(k, k, |i, j| columns[j][first + i].clone());
    let b: Vec<BigReal> = (0..k).map(|i| pz[first + i].clone()).collect();
    let c: Vec<BigReal> = (0..k).map(|j| columns[j][last].clone()).collect();
    let q = QuasiDetInput {
        a,
        b,
        c,
        d: pz[last].clone(),
    };
    quasidet_theta_star(&q, prec).map_err(pole_to_hypothesis)
}

/// The same neighbour evaluated directly: `θ(z) P_n(z-1)` or
/// `(σ(z)/η) P_n(z+1)`.
pub fn shifted_poly_direct(sys: &OrthoSystem, n: usize, z: &BigReal, direction: ShiftDirection) -> BigReal {
    let wp = sys.working_precision();
    let z = z.with_precision(wp);
    let one = BigReal::one(wp);
    let w = sys.weight();
    match direction {
        ShiftDirection::Backward => w.theta(&z) * sys.p(n, &(&z - &one)),
        ShiftDirection::Forward => w.sigma(&z) / w.params().eta() * sys.p(n, &(&z + &one)),
    }
}
