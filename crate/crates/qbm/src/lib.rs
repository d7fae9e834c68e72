//! Phase-space dynamics of a free Brownian particle coupled to an Ohmic heat
//! bath in the high-temperature limit.
//!
//! The bath enters through the friction rate `gamma` and the thermal energy
//! `kT`; every state of interest (a single Gaussian wave packet or a
//! two-packet superposition) stays Gaussian-structured for all time, so the
//! library evaluates the evolved Wigner function, its characteristic function,
//! position-space density-matrix elements, purity, and the interference
//! diagnostics from closed forms. An [`oracle`] module recomputes the same
//! quantities by independent numerics (Fourier quadrature, coefficient
//! extraction, and a direct finite-difference integration of the underlying
//! Fokker-Planck equation) so the closed forms are never trusted on faith.
//!
//! ```
//! use qbm::model::{SimParams, thermal_wavelength};
//! use qbm::gaussian::{GaussianInit, Prep};
//! use qbm::densmat::purity;
//!
//! let params = SimParams::new(1.0, 1.0, 5.0, 1.0).unwrap();
//! let sigma = thermal_wavelength(&params) / 4.0;
//! let init = GaussianInit::new(0.0, sigma, Prep::ZeroTemp).unwrap();
//! // A pure packet starts at purity one; friction first pushes it above.
//! assert_eq!(purity(0.0, &params, &init).unwrap(), 1.0);
//! assert!(purity(0.05, &params, &init).unwrap() > 1.0);
//! ```

pub mod cat;
pub mod cli;
pub mod densmat;
pub mod gaussian;
pub mod model;
pub mod oracle;

/// Errors produced by state construction, quadrature, and the integrator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("quadrature not converged: node doubling moved the result by {delta:.3e} (tolerance {tol:.3e})")]
    NotConverged { delta: f64, tol: f64 },
    #[error("time step {dt:.3e} exceeds the {term} stability limit {limit:.3e}")]
    CflViolation {
        dt: f64,
        limit: f64,
        term: &'static str,
    },
    #[error("mass drifted by {drift:.3e} during integration (tolerance {tol:.3e})")]
    MassDrift { drift: f64, tol: f64 },
    #[error("non-finite field value after step {step}")]
    NonFinite { step: usize },
    #[error("extracted coefficients depend on the probe width (max deviation {delta:.3e})")]
    SigmaDependence { delta: f64 },
    #[error("invalid grid: {0}")]
    Grid(&'static str),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 for usage/config trouble, 2 for
    /// numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParam { .. } | Error::Config(_) | Error::Io(_) | Error::Grid(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParam { name, value, reason })
    }
}

pub(crate) fn require_time(t: f64) -> Result<()> {
    require(t >= 0.0 && t.is_finite(), "t", t, "must be finite and >= 0")
}
