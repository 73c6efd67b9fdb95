use alloc::string::String;
use alloc::vec::Vec;

use crate::bigreal::BigReal;
use crate::weights::ParameterSet;

/// Outcome of one numerical identity check.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub identity: String,
    pub params: ParameterSet,
    pub window: usize,
    pub prec: usize,
    /// max relative residual of the identity
    pub residual: BigReal,
    pub tolerance: BigReal,
    pub pass: bool,
    /// wall time, filled in by callers that measure it
    pub seconds: Option<f64>,
}

impl VerificationReport {
    pub fn new(
        identity: impl Into<String>,
        params: &ParameterSet,
        window: usize,
        prec: usize,
        residual: BigReal,
        tolerance: BigReal,
    ) -> Self {
        let pass = residual <= tolerance;
        VerificationReport {
            identity: identity.into(),
            params: params.clone(),
            window,
            prec,
            residual,
            tolerance,
            pass,
            seconds: None,
        }
    }

    /// Residual in bits, `log2(residual)`, or `None` when it is exactly zero.
    pub fn residual_bits(&self) -> Option<isize> {
        self.residual.log2_magnitude()
    }
}

/// Default identity tolerance `2^(-prec/2)`.
pub fn identity_tolerance(prec: usize) -> BigReal {
    BigReal::pow2(-((prec / 2) as isize), prec)
}

/// `true` when every report passes (vacuously for an empty list).
pub fn all_pass(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// Largest residual among reports whose identity starts with `prefix`.
pub fn worst<'a>(reports: &'a [VerificationReport], prefix: &str) -> Option<&'a VerificationReport> {
    reports
        .iter()
        .filter(|r| r.identity.starts_with(prefix))
        .max_by(|a, b| a.residual.cmp(&b.residual))
}

/// Collects the reports of several checks.
#[derive(Default, Debug)]
pub struct ReportSet {
    pub reports: Vec<VerificationReport>,
}

impl ReportSet {
    pub fn push(&mut self, r: VerificationReport) {
        self.reports.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = VerificationReport>) {
        self.reports.extend(rs);
    }

    pub fn all_pass(&self) -> bool {
        all_pass(&self.reports)
    }
}
