//! Named identity suites shared by the command line and the test targets.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::linalg;
use crate::moments::{self, SeriesControl};
use crate::orthopoly::{self, OrthoSystem};
use crate::report::{identity_tolerance, VerificationReport};
use crate::structure;
use crate::transforms::{self as tr, ShiftDirection};
use crate::weights::{ParameterSet, PearsonWeight, ShiftKind, ShiftSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Pearson,
    MomentsHyper,
    Orthogonality,
    Psi,
    PShift,
    Christoffel,
    Geronimus,
    Lu,
    Ul,
    Uvarov,
    Quasidet,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Pearson,
        Suite::MomentsHyper,
        Suite::Orthogonality,
        Suite::Psi,
        Suite::PShift,
        Suite::Christoffel,
        Suite::Geronimus,
        Suite::Lu,
        Suite::Ul,
        Suite::Uvarov,
        Suite::Quasidet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pearson => "pearson",
            Suite::MomentsHyper => "moments-hyper",
            Suite::Orthogonality => "orthogonality",
            Suite::Psi => "psi",
            Suite::PShift => "p-shift",
            Suite::Christoffel => "christoffel",
            Suite::Geronimus => "geronimus",
            Suite::Lu => "lu",
            Suite::Ul => "ul",
            Suite::Uvarov => "uvarov",
            Suite::Quasidet => "quasidet",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown identity suite `{s}`")))
    }
}

/// Sizes, samples and precision for a suite run.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// trusted window `K`
    pub window: usize,
    pub prec: usize,
    /// largest degree in pointwise checks
    pub nmax: usize,
    /// largest degree in transformation checks
    pub transform_nmax: usize,
    /// lattice points for the Pearson checks
    pub k_max: u64,
    /// leading window of the UL comparisons
    pub ul_window: usize,
    pub control: SeriesControl,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            window: 16,
            prec: 256,
            nmax: 10,
            transform_nmax: 8,
            k_max: 200,
            ul_window: 8,
            control: SeriesControl::default(),
        }
    }
}

impl SuiteConfig {
    pub fn with_prec(&self, prec: usize) -> Self {
        SuiteConfig { prec, ..self.clone() }
    }
}

fn parse_samples(xs: &[&str], prec: usize) -> Vec<BigReal> {
    xs.iter()
        .map(|s| BigReal::parse(s, prec).expect("literal sample"))
        .collect()
}

/// Caches the orthogonal systems of a weight and its shifts.
pub struct SuiteContext {
    cfg: SuiteConfig,
    weight: PearsonWeight,
    systems: Vec<(ParameterSet, OrthoSystem)>,
}

impl SuiteContext {
    pub fn new(weight: &PearsonWeight, cfg: SuiteConfig) -> Result<Self> {
        let weight = weight.with_precision(cfg.prec)?;
        Ok(SuiteContext {
            cfg,
            weight,
            systems: Vec::new(),
        })
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.cfg
    }

    pub fn weight(&self) -> &PearsonWeight {
        &self.weight
    }

    /// Size at which systems are built so that Ψ is exact on the window.
    pub fn system_size(&self) -> usize {
        let p = self.weight.params();
        self.cfg.window + p.m() + p.n() + 3
    }

    pub fn system(&mut self, w: &PearsonWeight) -> Result<&OrthoSystem> {
        let idx = match self.systems.iter().position(|(p, _)| p == w.params()) {
            Some(i) => i,
            None => {
                let sys = OrthoSystem::build_with(w, self.system_size(), self.cfg.prec, self.cfg.control)?;
                self.systems.push((w.params().clone(), sys));
                self.systems.len() - 1
            }
        };
        Ok(&self.systems[idx].1)
    }

    fn pair(&mut self, base: &PearsonWeight, other: &PearsonWeight) -> Result<(OrthoSystem, OrthoSystem)> {
        let a = self.system(base)?.clone();
        let b = self.system(other)?.clone();
        Ok((a, b))
    }

    fn report(&self, name: String, residual: BigReal) -> VerificationReport {
        VerificationReport::new(
            name,
            self.weight.params(),
            self.cfg.window,
            self.cfg.prec,
            residual.with_precision(self.cfg.prec),
            identity_tolerance(self.cfg.prec),
        )
    }

    fn forward_kinds(&self) -> Vec<ShiftKind> {
        let p = self.weight.params();
        let mut v: Vec<ShiftKind> = (0..p.m()).map(ShiftKind::A).collect();
        v.extend((0..p.n()).map(ShiftKind::B));
        v.push(ShiftKind::Total);
        v
    }

    /// Runs one suite; identity names are prefixed with the suite name.
    pub fn run(&mut self, suite: Suite) -> Result<Vec<VerificationReport>> {
        let mut reports = match suite {
            Suite::Pearson => self.pearson()?,
            Suite::MomentsHyper => self.moments_hyper()?,
            Suite::Orthogonality => self.orthogonality()?,
            Suite::Psi => self.psi()?,
            Suite::PShift => self.p_shift()?,
            Suite::Christoffel => self.christoffel()?,
            Suite::Geronimus => self.geronimus()?,
            Suite::Lu => self.lu()?,
            Suite::Ul => self.ul()?,
            Suite::Uvarov => self.uvarov()?,
            Suite::Quasidet => self.quasidet()?,
        };
        for r in &mut reports {
            r.identity = format!("{}:{}", suite.name(), r.identity);
        }
        Ok(reports)
    }

    fn pearson(&mut self) -> Result<Vec<VerificationReport>> {
        let w = self.weight.clone();
        let prec = self.cfg.prec;
        let kmax = self.cfg.k_max;
        let table = |w: &PearsonWeight, extra: u64| -> Vec<BigReal> {
            (0..=kmax + extra).map(|k| w.eval(k, prec)).collect()
        };
        let base = table(&w, 1);
        let mut out = Vec::new();

        let mut worst = BigReal::zero(prec);
        for k in 0..=kmax {
            let kk = BigReal::from_u64(k, prec);
            let scale = (w.sigma(&kk) * &base[k as usize]).abs();
            let r = w.pearson_defect(k, &base[k as usize], &base[k as usize + 1]).abs() / scale;
            worst = worst.max(r);
        }
        out.push(self.report("residual".into(), worst));

        let rel = |lhs: Vec<BigReal>, rhs: Vec<BigReal>| linalg::relative_residual(&lhs, &rhs);
        for kind in self.forward_kinds() {
            let spec = ShiftSpec::forward(kind);
            let (b, s) = tr::forward_pair(&w, kind)?;
            let (tb, ts) = (table(&b, 1), table(&s, 0));
            let residual = match kind {
                ShiftKind::Total => {
                    let p = b.params();
                    let c = p.kappa() * p.eta();
                    rel(
                        ts.iter().map(|x| &c * x).collect(),
                        (0..=kmax).map(|k| BigReal::from_u64(k + 1, prec) * &tb[k as usize + 1]).collect(),
                    )
                }
                _ => {
                    let d = b.christoffel_data(kind)?;
                    rel(
                        ts.iter().map(|x| &d.constant * x).collect(),
                        (0..=kmax)
                            .map(|k| (BigReal::from_u64(k, prec) - &d.root) * &tb[k as usize])
                            .collect(),
                    )
                }
            };
            out.push(self.report(format!("contiguous-{}", spec.label()), residual));

            if kind != ShiftKind::Total {
                let ispec = ShiftSpec::inverse(kind);
                let (b, s) = tr::inverse_pair(&w, kind)?;
                let (tb, ts) = (table(&b, 0), table(&s, 0));
                let g = b.geronimus_data(kind)?;
                let residual = rel(
                    (0..=kmax)
                        .map(|k| (BigReal::from_u64(k, prec) - &g.root) * &ts[k as usize])
                        .collect(),
                    tb.iter().map(|x| &g.constant * x).collect(),
                );
                out.push(self.report(format!("contiguous-{}", ispec.label()), residual));
            }
        }

        let mut mismatch = 0;
        for kind in self.forward_kinds() {
            for spec in [ShiftSpec::forward(kind), ShiftSpec::inverse(kind)] {
                if let Ok(s) = w.shift(spec) {
                    let back = s.shift(spec.inverted())?;
                    if back.params() != w.params() {
                        mismatch += 1;
                    }
                }
            }
        }
        out.push(self.report("shift-roundtrip".into(), BigReal::from_i64(mismatch, prec)));
        Ok(out)
    }

    fn moments_hyper(&mut self) -> Result<Vec<VerificationReport>> {
        let w = self.weight.clone();
        let prec = self.cfg.prec;
        let mut out = moments::verify_moment_symmetries(&w, self.cfg.window, prec, self.cfg.control)?;
        for r in &mut out {
            r.window = self.cfg.window;
        }
        let g = self.system(&w)?.moments().clone();
        let non_positive = match moments::hankel_dets(&g) {
            Ok(d) => d.iter().filter(|x| !x.is_positive()).count() as i64,
            Err(_) => 1,
        };
        out.push(self.report("hankel-positive".into(), BigReal::from_i64(non_positive, prec)));
        Ok(out)
    }

    fn orthogonality(&mut self) -> Result<Vec<VerificationReport>> {
        let w = self.weight.clone();
        let nmax = self.cfg.nmax;
        let sys = self.system(&w)?.clone();
        let wp = sys.working_precision();
        let g = orthopoly::lattice_gram(&sys, nmax)?;
        let h = sys.h();
        let h_max = linalg::max_abs(&h[..=nmax]);
        let mut worst = BigReal::zero(wp);
        for n in 0..=nmax {
            for m in 0..=nmax {
                let target = if n == m { h[n].clone() } else { BigReal::zero(wp) };
                worst = worst.max((&g[(n, m)] - target).abs());
            }
        }
        let mut out = vec![self.report("lattice".into(), worst / h_max)];

        out.push(self.report(
            "cholesky".into(),
            sys.cholesky().reconstruction_residual(sys.moments()),
        ));
        let dets = moments::hankel_dets(sys.moments())?;
        let ratios: Vec<BigReal> = (0..sys.size())
            .map(|n| if n == 0 { dets[0].clone() } else { &dets[n] / &dets[n - 1] })
            .collect();
        out.push(self.report("norms-determinants".into(), linalg::relative_residual(h, &ratios)));

        let other = orthopoly::recurrence_by_conjugation(sys.cholesky())?;
        let jc = sys.jacobi();
        let k = other.len().min(jc.len());
        out.push(self.report(
            "recurrence-paths".into(),
            tr_worst([
                linalg::relative_residual(&other.beta[..k], &jc.beta[..k]),
                linalg::relative_residual(&other.gamma[..k], &jc.gamma[..k]),
            ]),
        ));

        let zs = parse_samples(&["-1.5", "0.5", "2.25", "4.75", "9.5"], wp);
        let mut horner = Vec::new();
        let mut three = Vec::new();
        for z in &zs {
            let p = sys.p_all(nmax + 1, z);
            let via_s: Vec<BigReal> = (0..=nmax).map(|n| orthopoly::eval_horner(sys.cholesky(), n, z)).collect();
            horner.push(linalg::relative_residual(&via_s, &p[..=nmax]));
            // recurrence from the S-row polynomials, independent of the β, γ used to evaluate
            let lhs: Vec<BigReal> = (0..=nmax).map(|n| z * &via_s[n]).collect();
            let rhs: Vec<BigReal> = (0..=nmax)
                .map(|n| {
                    let next = orthopoly::eval_horner(sys.cholesky(), n + 1, z);
                    let prev = if n == 0 { BigReal::zero(wp) } else { &jc.gamma[n] * &via_s[n - 1] };
                    next + &jc.beta[n] * &via_s[n] + prev
                })
                .collect();
            three.push(linalg::relative_residual(&lhs, &rhs));
        }
        out.push(self.report("horner".into(), tr_worst(horner)));
        out.push(self.report("three-term".into(), tr_worst(three)));
        Ok(out)
    }

    fn psi(&mut self) -> Result<Vec<VerificationReport>> {
        let w = self.weight.clone();
        let sys = self.system(&w)?.clone();
        let c = structure::psi_constructions(&sys)?;
        Ok(vec![
            self.report("paths".into(), c.paths_residual()),
            self.report("band".into(), c.band_residual()),
            self.report("diagonals".into(), c.diagonal_residual(&sys)),
            self.report("jacobi-symmetry".into(), c.symmetry_residual()),
        ])
    }

    fn banded_psi(&mut self) -> Result<(OrthoSystem, crate::banded::BandedMatrix)> {
        let w = self.weight.clone();
        let sys = self.system(&w)?.clone();
        let psi = structure::laguerre_freud(&sys)?;
        Ok((sys, psi))
    }

    fn p_shift(&mut self) -> Result<Vec<VerificationReport>> {
        let (sys, psi) = self.banded_psi()?;
        let zs = parse_samples(&["2", "5", "11"], sys.working_precision());
        let (t, s) = structure::verify_p_shift(&sys, &psi, &zs, self.cfg.nmax)?;
        Ok(vec![self.report("theta".into(), t), self.report("sigma".into(), s)])
    }

    fn christoffel(&mut self) -> Result<Vec<VerificationReport>> {
        let nmax = self.cfg.transform_nmax;
        let mut out = Vec::new();
        for kind in self.forward_kinds() {
            let spec = ShiftSpec::forward(kind);
            let (b, s) = tr::forward_pair(&self.weight, kind)?;
            let (sb, ss) = self.pair(&b, &s)?;
            let zs = parse_samples(&["-2.5", "0.5", "3.25", "6.5", "10.75"], sb.working_precision());
            let pair = tr::connection_matrices(&sb, &ss, spec)?;
            let l = spec.label();
            out.push(self.report(format!("{l}:coeffs"), tr::christoffel_coeff_residual(&sb, &ss, spec, nmax)?));
            out.push(self.report(format!("{l}:connection"), pair.connection_residual(&sb, &ss, &zs, nmax)));
            out.push(self.report(format!("{l}:zeros"), pair.diagonal_zero_residual(&sb, nmax)));
            out.push(self.report(format!("{l}:omega-h"), pair.omega_identity_residual(&sb, &ss)));
        }
        Ok(out)
    }

    fn geronimus(&mut self) -> Result<Vec<VerificationReport>> {
        let nmax = self.cfg.transform_nmax;
        let mut out = Vec::new();
        for kind in self.forward_kinds() {
            let l = ShiftSpec::inverse(kind).label();
            let (b, s) = tr::inverse_pair(&self.weight, kind)?;
            let (sb, ss) = self.pair(&b, &s)?;
            let t = tr::geronimus_transform(&sb, kind, nmax)?;
            let zs = parse_samples(&["2.5", "-3.25", "7.75"], sb.working_precision());
            out.push(self.report(format!("{l}:coeffs"), tr::geronimus_coeff_residual(&t, &sb, &ss)));
            out.push(self.report(format!("{l}:norms"), tr::geronimus_norm_residual(&t, &ss)));
            out.push(self.report(format!("{l}:round-trip"), tr::round_trip_residual(&t, &sb)?));
            out.push(self.report(
                format!("{l}:second-kind"),
                tr::geronimus_second_kind_residual(&t, &sb, &ss, &zs)?,
            ));
        }
        Ok(out)
    }

    fn lu(&mut self) -> Result<Vec<VerificationReport>> {
        let size = self.cfg.window;
        let mut out = Vec::new();
        for kind in self.forward_kinds() {
            let spec = ShiftSpec::forward(kind);
            let (b, s) = tr::forward_pair(&self.weight, kind)?;
            let (sb, ss) = self.pair(&b, &s)?;
            let f = tr::jacobi_factorize(&sb, spec, size)?;
            let l = spec.label();
            out.push(self.report(format!("{l}:reconstruct"), tr::lu_reconstruction_residual(&sb, &f)));
            out.push(self.report(format!("{l}:connection"), tr::lu_connection_residual(&sb, &ss, &f)?));
            out.push(self.report(format!("{l}:continued-fraction"), tr::cf_residual(&sb, &ss, spec, size)?));
        }
        Ok(out)
    }

    fn ul(&mut self) -> Result<Vec<VerificationReport>> {
        let win = self.cfg.ul_window.min(self.cfg.window - 1);
        let mut out = Vec::new();
        for kind in self.forward_kinds() {
            let spec = ShiftSpec::forward(kind);
            let (b, s) = tr::forward_pair(&self.weight, kind)?;
            let (sb, ss) = self.pair(&b, &s)?;
            let f = tr::jacobi_factorize(&sb, spec, win + 1)?;
            out.push(self.report(format!("{}:shifted-jacobi", spec.label()), tr::ul_residual(&sb, &ss, &f, win)?));

            let ispec = ShiftSpec::inverse(kind);
            let (b, s) = tr::inverse_pair(&self.weight, kind)?;
            let (sb, ss) = self.pair(&b, &s)?;
            let t = tr::geronimus_transform(&sb, kind, win)?;
            let g = tr::geronimus_factorize(&sb, &t, win + 1)?;
            let (r1, r2) = tr::geronimus_factor_residuals(&sb, &ss, &g);
            out.push(self.report(format!("{}:ul", ispec.label()), r1));
            out.push(self.report(format!("{}:lu", ispec.label()), r2));
        }
        Ok(out)
    }

    fn uvarov(&mut self) -> Result<Vec<VerificationReport>> {
        let w = self.weight.clone();
        let sys = self.system(&w)?.clone();
        let c = structure::psi_constructions(&sys)?;
        let psi = c.banded(&identity_tolerance(self.cfg.prec))?;
        let p = w.params();
        let nmax = self
            .cfg
            .transform_nmax
            .min(psi.size() - 1 - p.m().max(p.n() + 1));
        let zs = parse_samples(&["4.3", "9.7"], sys.working_precision());
        let r = tr::uvarov_second_kind_check(&sys, &psi, &zs, nmax)?;
        Ok(vec![
            self.report("banded-theta".into(), r.banded_theta),
            self.report("banded-sigma".into(), r.banded_sigma),
            self.report("correction-theta".into(), r.correction_theta),
            self.report("correction-sigma".into(), r.correction_sigma),
            self.report("resolvents".into(), tr::resolvent_residual(&c, &sys)),
        ])
    }

    fn quasidet(&mut self) -> Result<Vec<VerificationReport>> {
        let (sys, psi) = self.banded_psi()?;
        let p = sys.weight().params().clone();
        let wp = sys.working_precision();
        let zs = parse_samples(&["2.5", "3.5", "6.5"], wp);
        let h = sys.h();
        let eta = p.eta();
        let lo = p.m().max(p.n() + 1);
        let hi = self.cfg.transform_nmax;
        let mut out = Vec::new();
        for dir in [ShiftDirection::Backward, ShiftDirection::Forward] {
            let (mut direct, mut via_psi) = (Vec::new(), Vec::new());
            for z in &zs {
                let pz = sys.p_all(psi.size() - 1, z);
                let (mut det, mut dir_v, mut psi_v) = (Vec::new(), Vec::new(), Vec::new());
                for n in lo..=hi {
                    det.push(tr::shifted_poly_determinantal(&sys, n, z, dir)?);
                    dir_v.push(tr::shifted_poly_direct(&sys, n, z, dir));
                    let s: BigReal = (0..psi.size())
                        .map(|m| match dir {
                            ShiftDirection::Backward => psi.get(n, m) * &pz[m] / &h[m],
                            ShiftDirection::Forward => psi.get(m, n) * &pz[m] / &h[m] / eta,
                        })
                        .sum();
                    psi_v.push(s);
                }
                direct.push(linalg::relative_residual(&det, &dir_v));
                via_psi.push(linalg::relative_residual(&det, &psi_v));
            }
            let name = match dir {
                ShiftDirection::Backward => "backward",
                ShiftDirection::Forward => "forward",
            };
            out.push(self.report(format!("{name}-direct"), tr_worst(direct)));
            out.push(self.report(format!("{name}-psi"), tr_worst(via_psi)));
        }
        Ok(out)
    }
}

fn tr_worst(xs: impl IntoIterator<Item = BigReal>) -> BigReal {
    xs.into_iter().fold(BigReal::zero(1), |a, b| a.max(b))
}

/// Runs the requested suites on one weight, in the given order.
pub fn run_suites(w: &PearsonWeight, suites: &[Suite], cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    let mut ctx = SuiteContext::new(w, cfg.clone())?;
    let mut out = Vec::new();
    for s in suites {
        out.extend(ctx.run(*s)?);
    }
    Ok(out)
}
