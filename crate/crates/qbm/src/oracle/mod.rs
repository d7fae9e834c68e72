//! Independent numerical cross-checks for the closed-form machinery.
//!
//! Three paths that never consult the closed-form Wigner, probability, or
//! density-matrix expressions they are compared against: Fourier quadrature
//! of characteristic-function samples, recovery of the transport
//! coefficients from the moment flow, and a direct finite-volume integration
//! of the resulting Fokker-Planck equation.

mod extract;
mod fokker_planck;
mod grid;
mod transform;

pub use extract::{extract_coefficients, ExtractedCoefficients};
pub use fokker_planck::{fokker_planck_integrate, FpTrajectory};
pub use grid::{GridMoments, PhaseSpaceGrid};
pub use transform::{char_to_wigner, purity_quadrature, rho_quadrature, QuadratureSpec};
