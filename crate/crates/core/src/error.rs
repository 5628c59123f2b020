use thiserror::Error;

/// Errors raised by evaluation, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the supported domain. The message names the bound.
    #[error("{0}")]
    Domain(String),

    /// Bernoulli index beyond the verified table.
    #[error("Bernoulli index 2m = {index} exceeds the supported maximum 2m = {max}")]
    BernoulliRange { index: u32, max: u32 },

    /// Quadrature ran out of refinements. `value` is the best available
    /// estimate of the requested quantity, not of the bare integral.
    #[error(
        "quadrature did not converge: value {value}, error estimate {err_estimate:e} after {evaluations} evaluations"
    )]
    NonConvergence {
        value: f64,
        err_estimate: f64,
        evaluations: usize,
    },

    /// The integrand returned NaN or an infinity at an interior abscissa.
    #[error("integrand is not finite at u = {at}")]
    NonFiniteSample { at: f64 },

    /// A power series was evaluated on or beyond its radius of convergence.
    #[error("series does not converge for x = {x} (requires x < 1)")]
    SeriesDivergent { x: f64 },

    #[error("empty grid")]
    EmptyGrid,

    #[error("empty range")]
    EmptyRange,
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical machinery rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::NonFiniteSample { .. }
                | Error::SeriesDivergent { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
