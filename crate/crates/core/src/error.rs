use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("pole: denominator magnitude {magnitude:e} at (x={x}, t={t})")]
    Pole { x: f64, t: f64, magnitude: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge on [{a}, {b}] (estimated error {err:e})")]
    QuadratureNonConvergence { a: f64, b: f64, err: f64 },

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("negative discriminant h2^2 + 8 k0 phi3 = {0}")]
    NegativeDiscriminant(f64),

    #[error("compatibility failure in {equation}: max residual {max_abs:e} exceeds {tol:e}")]
    CompatibilityFailure { equation: String, max_abs: f64, tol: f64 },

    #[error("family mismatch: {0}")]
    FamilyMismatch(String),

    #[error("precondition failed: {0}")]
    PreconditionFailure(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("time step underflow at t={t} (dt={dt:e})")]
    StabilityAbort { t: f64, dt: f64 },

    #[error("effective diffusivity changes sign at t={t}")]
    NonparabolicAbort { t: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    /// Errors that mark a point as singular rather than a failed computation.
    pub fn is_singular(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::Domain(_) | Error::QuadratureNonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
