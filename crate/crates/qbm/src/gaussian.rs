//! Single Gaussian wave packet: second-moment matrices for both
//! preparations, mean trajectory, characteristic function, Wigner function,
//! and the explicit post-squeeze forms at t = 0⁺.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::model::{fluctuation_moments, green_function, thermal_wavelength, GreenEval, SimParams};
use crate::{require, require_time, Result};

/// Preparation of the initial packet.
///
/// `ZeroTemp` couples a pure squeezed packet to the bath at t = 0.
/// `BathTemp` starts from the packet pre-thermalized with the bath, which
/// adds m·kT along the response direction to every second moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prep {
    ZeroTemp,
    BathTemp,
}

/// Initial wave-packet data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianInit {
    /// Initial center (length).
    pub x0: f64,
    /// Initial rms width (length).
    pub sigma: f64,
    pub prep: Prep,
}

impl GaussianInit {
    pub fn new(x0: f64, sigma: f64, prep: Prep) -> Result<Self> {
        require(x0.is_finite(), "x0", x0, "must be finite")?;
        require(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            sigma,
            "must be finite and > 0",
        )?;
        Ok(GaussianInit { x0, sigma, prep })
    }
}

/// Centered second moments of the evolved packet.
///
/// Invariants: a11 > 0, a22 > 0, det > 0 for all t ≥ 0; at t = 0 with
/// `ZeroTemp`, det = ħ²/4 exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoments {
    /// Δx² (length²).
    pub a11: f64,
    /// Symmetrized x-p covariance (length·momentum).
    pub a12: f64,
    /// Δp² (momentum²).
    pub a22: f64,
    /// a11·a22 − a12², evaluated in a form with no cancellation at t = 0.
    pub det: f64,
    pub prep: Prep,
}

/// Fluctuation block S and rank-one update directions of the moment matrix.
///
/// Shared by the full moment assembly here and by the reduced determinant in
/// the two-packet interference measure.
pub(crate) struct MomentParts {
    pub s11: f64,
    pub s12: f64,
    pub s22: f64,
    /// (G, mĠ).
    pub u: (f64, f64),
    /// (mĠ, m²G̈).
    pub v: (f64, f64),
    /// (u ∧ v)² = e^{−2γt}, in the form with no cancellation.
    pub wedge2: f64,
    pub green: GreenEval,
}

impl MomentParts {
    pub fn det_s(&self) -> f64 {
        self.s11 * self.s22 - self.s12 * self.s12
    }

    /// wᵀ·adj(S)·w.
    pub fn quad_s(&self, w: (f64, f64)) -> f64 {
        self.s22 * w.0 * w.0 - 2.0 * self.s12 * w.0 * w.1 + self.s11 * w.1 * w.1
    }
}

pub(crate) fn moment_parts(t: f64, params: &SimParams) -> Result<MomentParts> {
    let g = green_function(t, params)?;
    let f = fluctuation_moments(t, params)?;
    let m = params.m;
    Ok(MomentParts {
        s11: f.x2,
        s12: m * f.xxd / 2.0,
        s22: m * m * f.xd2,
        u: (g.g, m * g.gdot),
        v: (m * g.gdot, m * m * g.gddot),
        wedge2: (-2.0 * params.gamma * t).exp(),
        green: g,
    })
}

/// Second moments at time `t`.
///
/// The matrix is the sum of the bath fluctuation block and two rank-one
/// updates along (G, mĠ) and (mĠ, m²G̈).  The determinant is expanded
/// through the rank-one update identity; the cross term collapses to
/// (ħ²/4 + mkTσ²)e^{−2γt}, so det(0) equals ħ²/4 (+ mkTσ² for `BathTemp`)
/// exactly.
pub fn second_moments(t: f64, params: &SimParams, init: &GaussianInit) -> Result<SecondMoments> {
    require_time(t)?;
    let parts = moment_parts(t, params)?;
    let (u1, u2) = parts.u;
    let (v1, v2) = parts.v;

    let sig2 = init.sigma * init.sigma;
    let mkt = match init.prep {
        Prep::ZeroTemp => 0.0,
        Prep::BathTemp => params.m * params.kt,
    };
    let alpha = params.hbar * params.hbar / (4.0 * sig2) + mkt;

    let det = parts.det_s()
        + alpha * parts.quad_s(parts.u)
        + sig2 * parts.quad_s(parts.v)
        + (params.hbar * params.hbar / 4.0 + mkt * sig2) * parts.wedge2;

    Ok(SecondMoments {
        a11: parts.s11 + alpha * u1 * u1 + sig2 * v1 * v1,
        a12: parts.s12 + alpha * u1 * u2 + sig2 * v1 * v2,
        a22: parts.s22 + alpha * u2 * u2 + sig2 * v2 * v2,
        det,
        prep: init.prep,
    })
}

/// Phase-space mean of a packet released at `x0`: (mĠ·x0, m²G̈·x0).
///
/// The squeeze at t = 0⁺ kicks the mean momentum to −mγx0, after which both
/// components relax as e^{−γt}.
pub fn mean_trajectory(t: f64, params: &SimParams, x0: f64) -> Result<(f64, f64)> {
    require_time(t)?;
    let g = green_function(t, params)?;
    Ok((
        params.m * g.gdot * x0,
        params.m * params.m * g.gddot * x0,
    ))
}

/// Moments and means bundled for repeated evaluation at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub moments: SecondMoments,
    pub mean_q: f64,
    pub mean_p: f64,
    pub hbar: f64,
}

impl GaussianState {
    pub fn new(t: f64, params: &SimParams, init: &GaussianInit) -> Result<Self> {
        let moments = second_moments(t, params, init)?;
        let (mean_q, mean_p) = mean_trajectory(t, params, init.x0)?;
        Ok(GaussianState {
            moments,
            mean_q,
            mean_p,
            hbar: params.hbar,
        })
    }

    /// Characteristic function at the characteristic-plane point (`qq`, `pp`);
    /// `qq` carries length, `pp` momentum.
    pub fn char_function(&self, qq: f64, pp: f64) -> Complex64 {
        let a = &self.moments;
        let h2 = self.hbar * self.hbar;
        let quad = (a.a11 * pp * pp + 2.0 * a.a12 * pp * qq + a.a22 * qq * qq) / (2.0 * h2);
        let phase = -(self.mean_q * pp + self.mean_p * qq) / self.hbar;
        Complex64::from_polar((-quad).exp(), phase)
    }

    /// Phase-space density at (`q`, `p`).
    pub fn wigner(&self, q: f64, p: f64) -> f64 {
        let a = &self.moments;
        let dq = q - self.mean_q;
        let dp = p - self.mean_p;
        let quad = (a.a22 * dq * dq - 2.0 * a.a12 * dq * dp + a.a11 * dp * dp) / (2.0 * a.det);
        (-quad).exp() / (2.0 * PI * a.det.sqrt())
    }
}

/// Characteristic function of the evolved packet; W̃(0,0) = 1.
pub fn char_function_gaussian(
    qq: f64,
    pp: f64,
    t: f64,
    params: &SimParams,
    init: &GaussianInit,
) -> Result<Complex64> {
    Ok(GaussianState::new(t, params, init)?.char_function(qq, pp))
}

/// Wigner function of the evolved packet; peak value 1/(2π√det).
pub fn wigner_gaussian(
    q: f64,
    p: f64,
    t: f64,
    params: &SimParams,
    init: &GaussianInit,
) -> Result<f64> {
    Ok(GaussianState::new(t, params, init)?.wigner(q, p))
}

/// Wigner function at t = 0⁺, written in its explicit squeezed form.
///
/// Agrees pointwise with `wigner_gaussian` at t = 0.
pub fn initial_squeezed_state(q: f64, p: f64, params: &SimParams, init: &GaussianInit) -> f64 {
    let sig2 = init.sigma * init.sigma;
    let dq = q - init.x0;
    let chirped = p + params.m * params.gamma * q;
    match init.prep {
        Prep::ZeroTemp => {
            let h2 = params.hbar * params.hbar;
            (-dq * dq / (2.0 * sig2) - 2.0 * sig2 * chirped * chirped / h2).exp()
                / (PI * params.hbar)
        }
        Prep::BathTemp => {
            let beta = params.hbar * params.hbar / (4.0 * sig2) + params.m * params.kt;
            let lam = thermal_wavelength(params);
            let pref = PI * params.hbar * (1.0 + 4.0 * sig2 / (lam * lam)).sqrt();
            (-dq * dq / (2.0 * sig2) - chirped * chirped / (2.0 * beta)).exp() / pref
        }
    }
}
