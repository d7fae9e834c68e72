//! Physical parameters, the damped free-particle response function and its
//! derivatives, the bath-induced fluctuation moments, and the derived time
//! and length scales.

use crate::{require, require_time, Result};

/// Particle and bath constants, in any one consistent unit system.
///
/// `kT` is the bath thermal energy (Boltzmann constant times temperature,
/// kept as a single energy-valued field).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Particle mass.
    pub m: f64,
    /// Friction rate; the friction constant is `m * gamma`.
    pub gamma: f64,
    /// Bath thermal energy.
    pub kt: f64,
    /// Quantum of action.
    pub hbar: f64,
}

impl SimParams {
    pub fn new(m: f64, gamma: f64, kt: f64, hbar: f64) -> Result<Self> {
        require(m > 0.0 && m.is_finite(), "m", m, "must be finite and > 0")?;
        require(
            gamma > 0.0 && gamma.is_finite(),
            "gamma",
            gamma,
            "must be finite and > 0",
        )?;
        require(kt > 0.0 && kt.is_finite(), "kT", kt, "must be finite and > 0")?;
        require(
            hbar > 0.0 && hbar.is_finite(),
            "hbar",
            hbar,
            "must be finite and > 0",
        )?;
        Ok(SimParams { m, gamma, kt, hbar })
    }
}

/// Response function G(t) of the damped free particle and its first two
/// derivatives.
///
/// Invariant: m·γ·G + m·Ġ = 1 for all t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenEval {
    /// G(t) = (1 − e^{−γt})/(mγ).
    pub g: f64,
    /// Ġ(t) = e^{−γt}/m.
    pub gdot: f64,
    /// G̈(t) = −γ e^{−γt}/m.
    pub gddot: f64,
}

/// Bath-induced fluctuation moments accumulated since the coupling switched on.
///
/// All three vanish at t = 0 and stay nonnegative; `x2` is monotone
/// nondecreasing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluctuationMoments {
    /// ⟨X²⟩(t), dimension length².
    pub x2: f64,
    /// ⟨XẊ + ẊX⟩(t), dimension length²/time.
    pub xxd: f64,
    /// ⟨Ẋ²⟩(t), dimension length²/time².
    pub xd2: f64,
}

/// Evaluate G, Ġ, G̈ at `t`.
///
/// 1 − e^{−γt} is computed through `exp_m1`, so the result keeps full
/// relative accuracy down to γt ≈ 1e−12 and below.
pub fn green_function(t: f64, params: &SimParams) -> Result<GreenEval> {
    require_time(t)?;
    let u = params.gamma * t;
    let decay = (-u).exp();
    let rise = -(-u).exp_m1();
    Ok(GreenEval {
        g: rise / (params.m * params.gamma),
        gdot: decay / params.m,
        gddot: -params.gamma * decay / params.m,
    })
}

/// Evaluate ⟨X²⟩, ⟨XẊ+ẊX⟩, ⟨Ẋ²⟩ at `t`.
pub fn fluctuation_moments(t: f64, params: &SimParams) -> Result<FluctuationMoments> {
    require_time(t)?;
    let u = params.gamma * t;
    let rise = -(-u).exp_m1();
    // Bracket of <X^2>: 2u − (1−e^{−u})(3−e^{−u}) = 2(u + w) − w², w = e^{−u}−1.
    // Both groupings cancel to O(u³); below u = 1e−3 the series is exact to
    // machine precision while the direct form has lost ~3·eps/u.
    let bracket = if u < 1e-3 {
        let u2 = u * u;
        u2 * u * (2.0 / 3.0 + u * (-0.5 + u * (7.0 / 30.0 - u / 12.0)))
    } else {
        let w = (-u).exp_m1();
        2.0 * (u + w) - w * w
    };
    let x2 = params.kt / (params.m * params.gamma * params.gamma) * bracket;
    let xxd = 2.0 * params.kt / (params.m * params.gamma) * rise * rise;
    let xd2 = params.kt / params.m * -(-2.0 * u).exp_m1();
    Ok(FluctuationMoments { x2, xxd, xd2 })
}

/// Thermal de Broglie wavelength ħ/√(m·kT).
pub fn thermal_wavelength(params: &SimParams) -> f64 {
    params.hbar / (params.m * params.kt).sqrt()
}

/// Decoherence time τ_d = (λ_th²/d²)·γ⁻¹ for packet separation `d`.
pub fn decoherence_time(params: &SimParams, d: f64) -> Result<f64> {
    require(d > 0.0 && d.is_finite(), "d", d, "must be finite and > 0")?;
    let lam = thermal_wavelength(params);
    Ok(lam * lam / (d * d * params.gamma))
}
