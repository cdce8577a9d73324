use thiserror::Error;

/// Errors produced by evaluation, quadrature, and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at non-positive integer argument {0}")]
    Pole(f64),
    /// A hypergeometric lower parameter is a non-positive integer that is
    /// reached before any upper parameter terminates the series.
    #[error("invalid lower parameter {0}: non-positive integer inside the live term range")]
    InvalidLowerParameter(f64),
    /// Non-terminating series outside its convergence domain.
    #[error("series diverges: {0}")]
    Divergence(String),
    /// Argument outside the convergence region |z| < 1/4 of the bivariate
    /// Mittag-Leffler series (non-terminating case).
    #[error("argument z = {0} outside convergence region |z| < 1/4")]
    ConvergenceDomain(f64),
    /// A Pochhammer factor in a denominator vanishes for a live term.
    #[error("parameter {0} makes a denominator Pochhammer factor vanish for a live term")]
    DivisionByZeroParameter(f64),
    /// Input violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// Quadrature refinement hit max_level without meeting the tolerance.
    #[error("quadrature tolerance not met: estimated error {est_error:e} after level {level}")]
    ToleranceNotMet { est_error: f64, level: u32 },
    /// Verification check id not present in the catalog.
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
