#![allow(dead_code)]

use dop_core::{BigReal, ParameterSet, PearsonWeight};

/// The five weights every suite runs on.
pub fn suite_weights(prec: usize) -> Vec<(&'static str, PearsonWeight)> {
    let w = |a: &[&str], b: &[&str], eta: &str| PearsonWeight::new(ParameterSet::parse(a, b, eta, prec).unwrap());
    vec![
        ("charlier(0.5)", w(&[], &[], "0.5")),
        ("charlier(1)", w(&[], &[], "1")),
        ("gen-charlier(1.5;0.7)", w(&[], &["1.5"], "0.7")),
        ("meixner(2;0.4)", w(&["2"], &[], "0.4")),
        ("gen-meixner(1.7;2.3;0.4)", w(&["1.7"], &["2.3"], "0.4")),
    ]
}

/// Recurrence coefficients by the Stieltjes procedure on truncated lattice
/// sums, sharing nothing with the moment/Cholesky path.
pub struct Stieltjes {
    pub beta: Vec<BigReal>,
    pub gamma: Vec<BigReal>,
    pub h: Vec<BigReal>,
    /// `P_n(k)` on the truncated lattice
    pub values: Vec<Vec<BigReal>>,
    pub weights: Vec<BigReal>,
}

pub fn stieltjes(a: &[&str], b: &[&str], eta: &str, nmax: usize, prec: usize) -> Stieltjes {
    let wp = prec + 256;
    let eta = BigReal::parse(eta, wp).unwrap();
    let cut = BigReal::pow2(-(wp as isize), wp);
    let num = |x: &str| BigReal::parse(x, wp).unwrap();
    // w(k+1) = w(k) · η ∏(a+k) / ((k+1) ∏(b+k))
    let mut weights = vec![BigReal::one(wp)];
    let mut k = 0u64;
    loop {
        let kk = BigReal::from_u64(k, wp);
        let mut r = eta.clone() / BigReal::from_u64(k + 1, wp);
        for &x in a {
            r *= num(x) + &kk;
        }
        for &x in b {
            r /= num(x) + &kk;
        }
        let next = &weights[k as usize] * r;
        k += 1;
        let growth = BigReal::from_u64(k + 1, wp).powi(2 * nmax as u32 + 4);
        let small = &next * growth < cut;
        weights.push(next);
        if small && k > 64 {
            break;
        }
    }
    let xs: Vec<BigReal> = (0..weights.len() as u64).map(|k| BigReal::from_u64(k, wp)).collect();
    let inner = |p: &[BigReal], q: &[BigReal], x: bool| -> BigReal {
        (0..weights.len())
            .map(|k| {
                let t = &p[k] * &q[k] * &weights[k];
                if x { t * &xs[k] } else { t }
            })
            .sum()
    };
    let mut values: Vec<Vec<BigReal>> = vec![vec![BigReal::one(wp); weights.len()]];
    let (mut beta, mut gamma, mut h) = (Vec::new(), Vec::new(), Vec::new());
    for n in 0..=nmax {
        let pn = &values[n];
        let hn = inner(pn, pn, false);
        let bn = inner(pn, pn, true) / &hn;
        let gn = if n == 0 { BigReal::zero(wp) } else { &hn / &h[n - 1] };
        let next: Vec<BigReal> = (0..weights.len())
            .map(|k| {
                let t = (&xs[k] - &bn) * &pn[k];
                if n == 0 { t } else { t - &gn * &values[n - 1][k] }
            })
            .collect();
        beta.push(bn);
        gamma.push(gn);
        h.push(hn);
        values.push(next);
    }
    Stieltjes { beta, gamma, h, values, weights }
}

/// `max|x - y| / max|y|`.
pub fn rel(x: &[BigReal], y: &[BigReal]) -> BigReal {
    assert_eq!(x.len(), y.len());
    let prec = y[0].precision();
    let num = x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(BigReal::zero(prec), |m, v| m.max(v));
    let den = y.iter().map(BigReal::abs).fold(BigReal::zero(prec), |m, v| m.max(v));
    if den.is_zero() { num } else { num / den }
}

pub fn bits(x: &BigReal) -> String {
    match x.log2_magnitude() {
        Some(e) => format!("2^{e}"),
        None => "0".into(),
    }
}
