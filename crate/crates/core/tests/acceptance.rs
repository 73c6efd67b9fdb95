//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use common::{bits, rel, stieltjes, suite_weights};
use dop_core::report::identity_tolerance;
use dop_core::suites::{Suite, SuiteConfig, SuiteContext};
use dop_core::{BigReal, OrthoSystem, PearsonWeight, VerificationReport};

const PREC: usize = 256;
const HIGH_PREC: usize = 512;

struct Outcome {
    id: usize,
    title: &'static str,
    /// (weight label, report)
    reports: Vec<(String, VerificationReport)>,
    errors: Vec<String>,
    seconds: f64,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.errors.is_empty() && !self.reports.is_empty() && self.reports.iter().all(|(_, r)| r.pass)
    }

    fn worst(&self) -> Option<&(String, VerificationReport)> {
        self.reports.iter().max_by(|a, b| a.1.residual.cmp(&b.1.residual))
    }

    fn print(&self) {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        let worst = self.worst().map(|(_, r)| bits(&r.residual)).unwrap_or_else(|| "-".into());
        println!(
            "{verdict} criterion {:>2} {:<24} checks {:>4}  worst {:<8} {:>6.1}s",
            self.id,
            self.title,
            self.reports.len(),
            worst,
            self.seconds
        );
        for (w, r) in self.reports.iter().filter(|(_, r)| !r.pass) {
            println!("     {w} {} residual {}", r.identity, bits(&r.residual));
        }
        for e in &self.errors {
            println!("     error: {e}");
        }
    }
}

/// Runs `suites` for every weight in parallel, keeping weight order.
fn run_suites(ctxs: &mut [(&'static str, SuiteContext)], suites: &[Suite]) -> (Vec<(String, VerificationReport)>, Vec<String>) {
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = ctxs
            .iter_mut()
            .map(|(label, ctx)| {
                s.spawn(move || {
                    let mut out = Vec::new();
                    for &suite in suites {
                        match ctx.run(suite) {
                            Ok(rs) => out.extend(rs.into_iter().map(|r| Ok((label.to_string(), r)))),
                            Err(e) => out.push(Err(format!("{label} {}: {e}", suite.name()))),
                        }
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    });
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(x) => reports.push(x),
            Err(e) => errors.push(e),
        }
    }
    (reports, errors)
}

fn report(label: &str, w: &PearsonWeight, window: usize, prec: usize, residual: BigReal) -> VerificationReport {
    VerificationReport::new(label, w.params(), window, prec, residual.with_precision(prec), identity_tolerance(prec))
}

/// Closed forms for Charlier and Meixner-type weights, checked against the
/// brute-force oracle and the library.
fn classical(prec: usize) -> (Vec<(String, VerificationReport)>, Vec<String>) {
    let nmax = 10;
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let cases: [(&str, &[&str], &str); 3] = [("charlier(0.5)", &[], "0.5"), ("charlier(1)", &[], "1"), ("meixner(2;0.4)", &["2"], "0.4")];
    for (label, a, eta_s) in cases {
        let wp = prec + 64;
        let w = PearsonWeight::new(dop_core::ParameterSet::parse(a, &[], eta_s, prec).unwrap());
        let eta = BigReal::parse(eta_s, wp).unwrap();
        let one = BigReal::one(wp);
        let (beta, gamma): (Vec<BigReal>, Vec<BigReal>) = (0..=nmax)
            .map(|n| {
                let n_ = BigReal::from_u64(n as u64, wp);
                match a.first() {
                    None => (&n_ + &eta, &n_ * &eta),
                    Some(av) => {
                        let av = BigReal::parse(av, wp).unwrap();
                        let d = &one - &eta;
                        let b = (&n_ + &eta * (&n_ + &av)) / &d;
                        let g = &eta * &n_ * (&n_ + &av - &one) / d.square();
                        (b, g)
                    }
                }
            })
            .unzip();
        let oracle = stieltjes(a, &[], eta_s, nmax, prec);
        out.push((label.into(), report("classical:oracle-beta", &w, nmax + 1, prec, rel(&oracle.beta, &beta))));
        out.push((label.into(), report("classical:oracle-gamma", &w, nmax + 1, prec, rel(&oracle.gamma[1..], &gamma[1..]))));
        match OrthoSystem::build(&w, nmax + 3, prec) {
            Ok(sys) => {
                let j = sys.jacobi();
                out.push((label.into(), report("classical:library-beta", &w, nmax + 1, prec, rel(&j.beta[..=nmax], &beta))));
                out.push((
                    label.into(),
                    report("classical:library-gamma", &w, nmax + 1, prec, rel(&j.gamma[1..=nmax], &gamma[1..])),
                ));
            }
            Err(e) => errors.push(format!("{label}: {e}")),
        }
    }
    (out, errors)
}

/// Direct lattice sums of the library polynomials against the oracle's
/// norms; complements the orthogonality suite with sums computed outside
/// the library.
fn lattice_oracle(prec: usize) -> (Vec<(String, VerificationReport)>, Vec<String>) {
    let nmax = 10;
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let cases: [(&str, &[&str], &[&str], &str); 5] = [
        ("charlier(0.5)", &[], &[], "0.5"),
        ("charlier(1)", &[], &[], "1"),
        ("gen-charlier(1.5;0.7)", &[], &["1.5"], "0.7"),
        ("meixner(2;0.4)", &["2"], &[], "0.4"),
        ("gen-meixner(1.7;2.3;0.4)", &["1.7"], &["2.3"], "0.4"),
    ];
    for ((label, a, b, eta), (_, w)) in cases.into_iter().zip(suite_weights(prec)) {
        let oracle = stieltjes(a, b, eta, nmax, prec);
        let sys = match OrthoSystem::build(&w, nmax + 3, prec) {
            Ok(s) => s,
            Err(e) => {
                errors.push(format!("{label}: {e}"));
                continue;
            }
        };
        let wp = oracle.weights[0].precision();
        let pk: Vec<Vec<BigReal>> = (0..oracle.weights.len())
            .map(|k| sys.p_all(nmax, &BigReal::from_u64(k as u64, wp)))
            .collect();
        let mut worst = BigReal::zero(wp);
        let h_max = oracle.h.iter().fold(BigReal::zero(wp), |m, x| m.max(x.abs()));
        for n in 0..=nmax {
            for m in 0..=nmax {
                let s: BigReal = (0..pk.len()).map(|k| &pk[k][n] * &pk[k][m] * &oracle.weights[k]).sum();
                let target = if n == m { oracle.h[n].clone() } else { BigReal::zero(wp) };
                worst = worst.max((s - target).abs());
            }
        }
        out.push((label.into(), report("orthogonality:direct-sums", &w, nmax + 1, prec, worst / h_max)));
        out.push((label.into(), report("orthogonality:oracle-norms", &w, nmax + 1, prec, rel(&sys.h()[..=nmax], &oracle.h))));
    }
    (out, errors)
}

fn run_all(prec: usize) -> Vec<Outcome> {
    let cfg = SuiteConfig::default().with_prec(prec);
    let mut ctxs: Vec<(&'static str, SuiteContext)> = suite_weights(prec)
        .into_iter()
        .map(|(l, w)| (l, SuiteContext::new(&w, cfg.clone()).unwrap()))
        .collect();
    let small = SuiteConfig { window: 8, ..cfg.clone() };
    let mut small_ctxs: Vec<(&'static str, SuiteContext)> = suite_weights(prec)
        .into_iter()
        .map(|(l, w)| (l, SuiteContext::new(&w, small.clone()).unwrap()))
        .collect();

    type Job<'a> = Box<dyn FnOnce() -> (Vec<(String, VerificationReport)>, Vec<String>) + 'a>;
    let mut outcomes = Vec::new();
    let mut go = |id: usize, title: &'static str, job: Job| {
        let t = Instant::now();
        let (reports, errors) = job();
        outcomes.push(Outcome { id, title, reports, errors, seconds: t.elapsed().as_secs_f64() });
    };
    go(1, "pearson", Box::new(|| run_suites(&mut ctxs, &[Suite::Pearson])));
    go(2, "moment symmetries", Box::new(|| run_suites(&mut small_ctxs, &[Suite::MomentsHyper])));
    go(
        3,
        "orthogonality oracle",
        Box::new(|| {
            let (mut r, mut e) = run_suites(&mut ctxs, &[Suite::Orthogonality]);
            let (r2, e2) = lattice_oracle(prec);
            r.extend(r2);
            e.extend(e2);
            (r, e)
        }),
    );
    go(4, "classical limits", Box::new(|| classical(prec)));
    go(5, "psi", Box::new(|| run_suites(&mut ctxs, &[Suite::Psi, Suite::PShift])));
    go(6, "christoffel", Box::new(|| run_suites(&mut ctxs, &[Suite::Christoffel])));
    go(7, "geronimus", Box::new(|| run_suites(&mut ctxs, &[Suite::Geronimus])));
    go(8, "factorization", Box::new(|| run_suites(&mut ctxs, &[Suite::Lu, Suite::Ul])));
    go(9, "determinantal", Box::new(|| run_suites(&mut ctxs, &[Suite::Quasidet])));
    go(10, "uvarov", Box::new(|| run_suites(&mut ctxs, &[Suite::Uvarov])));
    outcomes
}

/// Same verdicts at the higher precision and residuals shrunk by `2^100`.
fn robustness(low: &[Outcome], high: &[Outcome], seconds: f64) -> Outcome {
    let shrink = BigReal::pow2(-100, HIGH_PREC);
    let floor = BigReal::pow2(-(HIGH_PREC as isize) + 32, HIGH_PREC);
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (lo, hi) in low.iter().zip(high) {
        if lo.pass() != hi.pass() {
            errors.push(format!("criterion {} verdict changed", lo.id));
        }
        if lo.reports.len() != hi.reports.len() {
            errors.push(format!("criterion {} report count changed", lo.id));
            continue;
        }
        for ((wl, rl), (wh, rh)) in lo.reports.iter().zip(&hi.reports) {
            assert_eq!((wl, &rl.identity), (wh, &rh.identity));
            // a residual already at zero must stay at the high-precision floor
            let bound = if rl.residual.is_zero() { floor.clone() } else { rl.residual.with_precision(HIGH_PREC) * &shrink };
            let ratio = if rl.residual.is_zero() { rh.residual.clone() } else { &rh.residual / rl.residual.with_precision(HIGH_PREC) };
            let mut r = VerificationReport::new(
                format!("c{}:{}", lo.id, rl.identity),
                &rh.params,
                rh.window,
                HIGH_PREC,
                ratio,
                bound.clone(),
            );
            r.pass = rh.residual <= bound && rl.pass == rh.pass;
            reports.push((wl.clone(), r));
        }
    }
    Outcome { id: 11, title: "robustness (512 bits)", reports, errors, seconds }
}

fn main() {
    println!("acceptance: prec {PREC}, tolerance 2^-{}, window 16", PREC / 2);
    let low = run_all(PREC);
    for o in &low {
        o.print();
    }
    let t = Instant::now();
    let high = run_all(HIGH_PREC);
    let rob = robustness(&low, &high, t.elapsed().as_secs_f64());
    rob.print();
    let failed: Vec<usize> = low.iter().chain([&rob]).filter(|o| !o.pass()).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all 11 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
