use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a discriminant (need D > 0 and D = 0 or 1 mod 4)")]
    NotDiscriminant(i64),
    #[error("discriminant {0} is a perfect square")]
    SquareDiscriminant(i64),
    #[error("weight parameter k = {0} must be even and greater than 2")]
    InvalidWeight(i64),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("matrix [[{a},{b}],[{c},{d}]] does not have determinant 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64 },
    #[error("matrix with lower-left entry {c} is not in Gamma_0(4)")]
    NotInGamma04 { c: i64 },
    #[error("point {x} + {y}i is not in the upper half-plane")]
    NotInUpperHalfPlane { x: f64, y: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("truncation tail {tail:.3e} exceeds tolerance {tol:.3e}")]
    TailAboveTolerance { tail: f64, tol: f64 },
    #[error("sum did not converge: tail {tail:.3e} > tolerance {tol:.3e} at radius {radius}")]
    NotConverged { tail: f64, tol: f64, radius: f64 },
    #[error("q-series precision mismatch: {0}")]
    Precision(String),
    #[error("inexact division of q-series coefficients")]
    InexactDivision,
    #[error("pole: {0}")]
    Pole(String),
    #[error("ill-conditioned evaluation point: {0}")]
    IllConditioned(String),
    #[error("finite-difference estimates disagree by {disagreement:.3e} (tolerance {tol:.3e})")]
    RoughFunction { disagreement: f64, tol: f64 },
    #[error("unsupported weight {0}")]
    UnsupportedWeight(i64),
}
