//! Numerics for Zagier's hyperbolic Poincaré series `f_{k,D}`, the weak Maass
//! form `ω_{k+1,D} = Σ Q_z / Q(z,1)^{k+1}`, the theta kernels `Ω_k` and `Λ_k`,
//! and numerical checks of the identities that tie them together.
//!
//! Module map:
//!
//! * [`qforms`]: integral binary quadratic forms, the `SL2(Z)` action and
//!   bounded enumeration around a point of the upper half-plane.
//! * [`qseries`]: exact truncated Laurent series in `q` (Eisenstein series,
//!   `Δ`, `j`, the Faber basis `j_n`).
//! * [`series`]: point evaluators with certified truncation.
//! * [`maass_ops`]: finite-difference `∂/∂z̄`, `ξ_κ`, `Δ_κ`, slash operators.
//! * [`theta`]: the Vignéras kernel, second-order jets, `Ω_k` and `Λ_k`.
//! * [`lift`]: Fourier coefficients, Petersson products and the decomposed
//!   theta-lift check.
//! * [`verify`]: the verification suites behind the `verify` subcommand.

pub mod error;
pub mod jet;
pub mod lift;
pub mod maass_ops;
pub mod qforms;
pub mod qseries;
pub mod quadrature;
pub mod report;
pub mod series;
pub mod summation;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
pub use qforms::{Discriminant, GroupElement, QForm, UpperHalfPoint};
pub use qseries::LaurentQSeries;
pub use report::VerificationReport;
pub use series::{SeriesParams, TruncatedValue};

/// Complex double, used for every point value in the crate.
pub type C64 = num_complex::Complex<f64>;
