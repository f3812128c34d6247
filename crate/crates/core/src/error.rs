use thiserror::Error;

/// Errors raised by the numerics, model and check layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kappa evaluated to a non-finite value at s = {s}")]
    NonFiniteKappa { s: f64 },

    #[error("integrator cannot meet tolerance {tol:e}: {reason}")]
    StepUnderflow { tol: f64, reason: String },

    #[error("s = {s} exceeds the constant-curvature domain pi/sqrt(kappa) = {limit}")]
    DomainExceeded { s: f64, limit: f64 },

    #[error("argument {value} outside the valid domain {domain}")]
    OutOfDomain { value: f64, domain: String },

    #[error("s = {s} outside the range of s_p, which ends at {limit}")]
    OutOfRange { s: f64, limit: f64 },

    #[error("invalid dimension pair n = {n}, m = {m} (need m <= 1 and n > m)")]
    InvalidDimension { n: usize, m: f64 },

    #[error("evaluation at the pole r = 0 is singular")]
    PoleSingularity,

    #[error("reversed bounds: {lo} > {hi}")]
    ReversedBounds { lo: f64, hi: f64 },

    #[error("s_p = {s} exceeds the model limit {limit}")]
    DeltaExceeded { s: f64, limit: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureFailure { a: f64, b: f64, estimate: f64 },

    #[error("root finding failed: {0}")]
    RootNotBracketed(String),

    #[error("grid is empty")]
    EmptyGrid,

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("kappa is not symmetric about delta = {delta}: deviation {deviation:e} at s = {s}")]
    NotSymmetric { delta: f64, s: f64, deviation: f64 },

    #[error("s(r) never reaches delta = {delta} before r = {r_limit}")]
    HorizonTooShort { delta: f64, r_limit: f64 },

    #[error("equality ({which}) violated at r = {r}: deviation {deviation:e}")]
    EqualityViolated { which: String, r: f64, deviation: f64 },

    #[error("pole smoothness defect: {0}")]
    PoleDefect(String),
}

impl Error {
    /// True for failures of the numerical machinery itself, as opposed to
    /// inputs that are out of range or violate a model invariant.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::StepUnderflow { .. }
                | Error::QuadratureFailure { .. }
                | Error::NonFiniteKappa { .. }
                | Error::RootNotBracketed(_)
        )
    }

    pub(crate) fn out_of_domain(value: f64, domain: impl Into<String>) -> Self {
        Error::OutOfDomain {
            value,
            domain: domain.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
