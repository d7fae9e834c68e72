//! Recovery of the drift and diffusion coefficients of the phase-space
//! transport equation from the closed-form moment flow.

use crate::gaussian::{second_moments, GaussianInit, Prep};
use crate::model::{fluctuation_moments, green_function, SimParams};
use crate::{require, require_time, Error, Result};

const SIGMA_TOL: f64 = 1e-6;

/// Coefficients of ∂W/∂t = −(p/m)∂W/∂q + ∂/∂p[(mΩ²q + 2Γp)W]
/// + d_pp ∂²W/∂p² + d_qp ∂²W/∂q∂p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractedCoefficients {
    pub gamma_coeff: f64,
    pub omega2: f64,
    pub d_pp: f64,
    pub d_qp: f64,
}

type Mat2 = [[f64; 2]; 2];

fn matmul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[0.0; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Solves the inverse problem at time t: the mean flow fixes the drift pair
/// (Γ, Ω²) and the covariance flow Ṡ = DS + SDᵀ + 2B fixes the diffusion
/// pair, using the thermal-preparation covariance so that agreement between
/// the two probe widths is a genuine cross-check.
pub fn extract_coefficients(
    t: f64,
    params: &SimParams,
    sigma_probes: (f64, f64),
) -> Result<ExtractedCoefficients> {
    require_time(t)?;
    let (sa, sb) = sigma_probes;
    require(
        sa > 0.0 && sa.is_finite(),
        "sigma_probes.0",
        sa,
        "must be finite and > 0",
    )?;
    require(
        sb > 0.0 && sb.is_finite(),
        "sigma_probes.1",
        sb,
        "must be finite and > 0",
    )?;
    require(sa != sb, "sigma_probes.1", sb, "probe widths must be distinct")?;

    let drift = drift_matrix(t, params)?;
    let first = solve_probe(t, params, sa, drift)?;
    let second = solve_probe(t, params, sb, drift)?;
    let delta = (first.gamma_coeff - second.gamma_coeff)
        .abs()
        .max((first.omega2 - second.omega2).abs())
        .max((first.d_pp - second.d_pp).abs())
        .max((first.d_qp - second.d_qp).abs());
    if !delta.is_finite() || delta > SIGMA_TOL {
        return Err(Error::SigmaDependence { delta });
    }
    Ok(first)
}

/// D = Φ̇ Φ⁻¹ for the propagator Φ mapping initial means to current means;
/// rows (0, 1/m) and (−mΩ², −2Γ).
fn drift_matrix(t: f64, params: &SimParams) -> Result<Mat2> {
    let g = green_function(t, params)?;
    let m = params.m;
    let g3 = -params.gamma * g.gddot;
    let phi = [[m * g.gdot, g.g], [m * m * g.gddot, m * g.gdot]];
    let phidot = [[m * g.gddot, g.gdot], [m * m * g3, m * g.gddot]];
    let det = phi[0][0] * phi[1][1] - phi[0][1] * phi[1][0];
    let inv = [
        [phi[1][1] / det, -phi[0][1] / det],
        [-phi[1][0] / det, phi[0][0] / det],
    ];
    Ok(matmul(phidot, inv))
}

fn solve_probe(
    t: f64,
    params: &SimParams,
    sigma: f64,
    drift: Mat2,
) -> Result<ExtractedCoefficients> {
    let init = GaussianInit::new(0.0, sigma, Prep::BathTemp)?;
    let mom = second_moments(t, params, &init)?;
    let s = [[mom.a11, mom.a12], [mom.a12, mom.a22]];
    let sdot = covariance_rate(t, params, sigma)?;

    let ds = matmul(drift, s);
    let mut b = [[0.0; 2]; 2];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            // S Dᵀ = (D S)ᵀ for symmetric S
            *v = (sdot[i][j] - ds[i][j] - ds[j][i]) / 2.0;
        }
    }

    Ok(ExtractedCoefficients {
        gamma_coeff: -drift[1][1] / 2.0,
        omega2: -drift[1][0] / params.m,
        d_pp: b[1][1],
        d_qp: 2.0 * b[0][1],
    })
}

/// Term-by-term time derivative of the thermal-preparation covariance:
/// classical part from the fluctuation identities, rank-one parts from the
/// Green-function chain G⃛ = −γG̈.
fn covariance_rate(t: f64, params: &SimParams, sigma: f64) -> Result<Mat2> {
    let g = green_function(t, params)?;
    let fl = fluctuation_moments(t, params)?;
    let m = params.m;
    let kt = params.kt;
    let g3 = -params.gamma * g.gddot;
    let rise = m * params.gamma * g.g;
    let decay = m * g.gdot;

    let s11_dot = fl.xxd;
    let s12_dot = 2.0 * kt * rise * decay;
    let s22_dot = 2.0 * m * kt * params.gamma * decay * decay;

    let sig2 = sigma * sigma;
    let cu = params.hbar * params.hbar / (4.0 * sig2) + m * kt;

    let a11_dot = s11_dot + cu * 2.0 * g.g * g.gdot + sig2 * 2.0 * (m * g.gdot) * (m * g.gddot);
    let a12_dot = s12_dot
        + cu * m * (g.gdot * g.gdot + g.g * g.gddot)
        + sig2 * m * m * m * (g.gddot * g.gddot + g.gdot * g3);
    let a22_dot = s22_dot
        + cu * 2.0 * (m * g.gdot) * (m * g.gddot)
        + sig2 * 2.0 * (m * m * g.gddot) * (m * m * g3);

    Ok([[a11_dot, a12_dot], [a12_dot, a22_dot]])
}
