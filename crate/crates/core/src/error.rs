use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("divergent weight: {0}")]
    DivergentWeight(String),
    #[error("series did not converge within {k_max} terms")]
    SlowConvergence { k_max: usize },
    #[error("numeric breakdown: {0}")]
    NumericBreakdown(String),
    #[error("window too small: need {needed}, have {have}")]
    WindowTooSmall { needed: usize, have: usize },
    #[error("evaluation point {0} lies on the lattice")]
    Pole(String),
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("evaluation point lies on the divisor root {0}")]
    PointOnDivisor(String),
    #[error("singular leading block")]
    SingularBlock,
    #[error("cannot parse {0}")]
    Parse(String),
}

impl Error {
    /// `true` for failures caused by finite precision rather than bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SlowConvergence { .. }
                | Error::NumericBreakdown(_)
                | Error::ZeroDenominator(_)
                | Error::SingularBlock
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
