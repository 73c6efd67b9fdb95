use std::time::Instant;

use dop_core::report::identity_tolerance;
use dop_core::suites::{Suite, SuiteConfig, SuiteContext};
use dop_core::{structure, BigReal, Error, OrthoSystem, Result, VerificationReport};
use rayon::prelude::*;

use crate::cli::{ComputeArgs, TableArgs, TableKind, VerifyArgs, WeightAction, WeightCmd};
use crate::config::{split_list, RunConfig};
use crate::render::{num, render_reports, Table};

/// Printed output plus whether every check in it passed.
pub struct Output {
    pub text: String,
    pub pass: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, pass: true }
    }
}

fn jacobi_table(cfg: &RunConfig, nmax: usize) -> Result<Table> {
    let sys = OrthoSystem::build(&cfg.weight, nmax + 2, cfg.prec)?;
    let d = cfg.digits();
    let j = sys.jacobi();
    let mut t = Table::new(&["n", "beta", "gamma", "H"]);
    for n in 0..=nmax {
        t.push(vec![n.to_string(), num(&j.beta[n], d), num(&j.gamma[n], d), num(&sys.h()[n], d)]);
    }
    Ok(t)
}

fn coeff_table(cfg: &RunConfig, nmax: usize) -> Result<Table> {
    let sys = OrthoSystem::build(&cfg.weight, nmax + 1, cfg.prec)?;
    let d = cfg.digits();
    let mut t = Table::new(&["n", "k", "coefficient"]);
    for n in 0..=nmax {
        for (k, c) in sys.cholesky().coeffs(n).iter().enumerate() {
            t.push(vec![n.to_string(), k.to_string(), num(c, d)]);
        }
    }
    Ok(t)
}

pub fn compute(args: &ComputeArgs) -> Result<Output> {
    let cfg = RunConfig::from_args(&args.weight)?;
    let t = if args.coeffs {
        coeff_table(&cfg, args.nmax)?
    } else {
        jacobi_table(&cfg, args.nmax)?
    };
    Ok(Output::ok(t.render(args.format)))
}

pub fn table(args: &TableArgs) -> Result<Output> {
    let cfg = RunConfig::from_args(&args.weight)?;
    let d = cfg.digits();
    let t = match args.kind {
        TableKind::Jacobi => jacobi_table(&cfg, args.nmax)?,
        TableKind::Coeffs => coeff_table(&cfg, args.nmax)?,
        TableKind::Moments => {
            let rho = dop_core::moments::moments(&cfg.weight, 2 * args.nmax + 1, cfg.prec, Default::default())?;
            let mut t = Table::new(&["n", "rho"]);
            for (n, r) in rho.iter().enumerate() {
                t.push(vec![n.to_string(), num(r, d)]);
            }
            t
        }
        TableKind::Psi => {
            let p = cfg.weight.params();
            let sys = OrthoSystem::build(&cfg.weight, args.nmax + 1 + p.m() + p.n() + 3, cfg.prec)?;
            let psi = structure::laguerre_freud(&sys)?;
            let mut t = Table::new(&["row", "col", "psi"]);
            for r in 0..=args.nmax.min(psi.size() - 1) {
                let lo = r.saturating_sub(psi.lower());
                let hi = (r + psi.upper()).min(psi.size() - 1);
                for c in lo..=hi {
                    t.push(vec![r.to_string(), c.to_string(), num(&psi.get(r, c), d)]);
                }
            }
            t
        }
    };
    Ok(Output::ok(t.render(args.format)))
}

pub fn verify(args: &VerifyArgs) -> Result<Output> {
    let cfg = RunConfig::from_args(&args.weight)?;
    let suites: Vec<Suite> = match &args.identities {
        None => Suite::ALL.to_vec(),
        Some(s) => split_list(s).iter().map(|x| Suite::parse(x)).collect::<Result<_>>()?,
    };
    let scfg = SuiteConfig {
        window: args.window,
        prec: cfg.prec,
        nmax: args.nmax,
        ..SuiteConfig::default()
    };
    if args.window < 4 {
        return Err(Error::WindowTooSmall {
            needed: 4,
            have: args.window,
        });
    }
    // each suite gets its own context; collect keeps the requested order
    let results: Vec<Result<Vec<VerificationReport>>> = suites
        .par_iter()
        .map(|&s| {
            let t = Instant::now();
            let mut ctx = SuiteContext::new(&cfg.weight, scfg.clone())?;
            let mut rs = ctx.run(s)?;
            if args.timings {
                let secs = t.elapsed().as_secs_f64();
                rs.iter_mut().for_each(|r| r.seconds = Some(secs));
            }
            Ok(rs)
        })
        .collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Output {
        text: render_reports(&reports, &cfg, args.format),
        pass,
    })
}

pub fn weight(cmd: &WeightCmd) -> Result<Output> {
    let cfg = RunConfig::from_args(&cmd.weight)?;
    let w = &cfg.weight;
    let d = cfg.digits();
    let prec = cfg.prec;
    let mut pass = true;
    let t = match &cmd.action {
        WeightAction::Eval { k } => {
            let mut t = Table::new(&["k", "w"]);
            for &k in k {
                t.push(vec![k.to_string(), num(&w.eval(k, prec), d)]);
            }
            t
        }
        WeightAction::Pearson { kmax } => {
            let tol = identity_tolerance(prec);
            let mut t = Table::new(&["k", "w", "residual"]);
            let mut wk = w.eval(0, prec);
            for k in 0..=*kmax {
                let wk1 = w.eval(k + 1, prec);
                let scale = (w.sigma(&BigReal::from_u64(k, prec)) * &wk).abs();
                let r = w.pearson_defect(k, &wk, &wk1).abs() / scale;
                pass &= r <= tol;
                t.push(vec![k.to_string(), num(&wk, d), num(&r, 17)]);
                wk = wk1;
            }
            t
        }
        WeightAction::ThetaSigma => {
            let mut t = Table::new(&["poly", "kind", "index", "value"]);
            let rows = [
                ("theta", "coeff", w.theta_coeffs().to_vec()),
                ("theta", "root", w.theta_roots()),
                ("sigma", "coeff", w.sigma_coeffs().to_vec()),
                ("sigma", "root", w.sigma_roots()),
            ];
            for (poly, kind, vals) in rows {
                for (i, v) in vals.iter().enumerate() {
                    t.push(vec![poly.into(), kind.into(), i.to_string(), num(v, d)]);
                }
            }
            t
        }
    };
    Ok(Output {
        text: t.render(cmd.format),
        pass,
    })
}
