//! Superposition of two separated Gaussian packets: characteristic function,
//! Wigner function with its interference term, interference measure and
//! phase, marginal probability distribution, attenuation coefficient, the
//! short-time asymptotics of both, and the associated time scales.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::gaussian::{moment_parts, second_moments, GaussianInit, GaussianState, Prep};
use crate::model::{fluctuation_moments, green_function, thermal_wavelength, SimParams};
use crate::{require, require_time, Result};

/// Initial two-packet data: centers at ±d/2, each of rms width `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatInit {
    /// Packet separation (length), ≥ 0.
    pub d: f64,
    /// Per-packet rms width (length).
    pub sigma: f64,
    pub prep: Prep,
}

impl CatInit {
    pub fn new(d: f64, sigma: f64, prep: Prep) -> Result<Self> {
        require(d >= 0.0 && d.is_finite(), "d", d, "must be finite and >= 0")?;
        require(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            sigma,
            "must be finite and > 0",
        )?;
        Ok(CatInit { d, sigma, prep })
    }

    fn packet(&self) -> GaussianInit {
        GaussianInit {
            x0: 0.0,
            sigma: self.sigma,
            prep: self.prep,
        }
    }
}

/// Exponent A(t) suppressing the interference term, with the linear
/// coefficients of its phase Φ(q,p) = phi_q·q + phi_p·p.
///
/// Invariants: a_of_t ≥ 0; for `ZeroTemp`, a_of_t(0) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceMeasure {
    pub a_of_t: f64,
    /// 1/length.
    pub phi_q: f64,
    /// 1/momentum.
    pub phi_p: f64,
}

/// A(t) and the phase coefficients at time `t`.
///
/// A(t) = [det(B)/det(A)]·d²/8σ², where A is the full second-moment matrix
/// of one packet and B is A with its ħ²/4σ² rank-one part removed.  det(B)
/// is assembled term by term like det(A), so A(0) = 0 exactly for `ZeroTemp`
/// and A(0) = mkT·d²/(2ħ² + 8mkTσ²)·... the closed t = 0 value for
/// `BathTemp` carries no cancellation error.
pub fn interference_measure(
    t: f64,
    params: &SimParams,
    init: &CatInit,
) -> Result<InterferenceMeasure> {
    require_time(t)?;
    let parts = moment_parts(t, params)?;
    let mom = second_moments(t, params, &init.packet())?;
    let sig2 = init.sigma * init.sigma;
    let mkt = match init.prep {
        Prep::ZeroTemp => 0.0,
        Prep::BathTemp => params.m * params.kt,
    };

    let det_b = parts.det_s()
        + sig2 * parts.quad_s(parts.v)
        + mkt * parts.quad_s(parts.u)
        + mkt * sig2 * parts.wedge2;
    let a_of_t = det_b / mom.det * (init.d * init.d / (8.0 * sig2));

    let g = parts.green;
    let mgd = params.m * g.gdot;
    let coef = params.hbar * init.d / (4.0 * sig2 * mom.det);
    Ok(InterferenceMeasure {
        a_of_t,
        phi_q: (g.g * mom.a22 - mgd * mom.a12) * coef,
        phi_p: (mgd * mom.a11 - g.g * mom.a12) * coef,
    })
}

/// Everything needed to evaluate the two-packet state repeatedly at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatState {
    /// Single-packet reference state centered at the origin.
    pub gauss: GaussianState,
    pub interference: InterferenceMeasure,
    /// Attenuation coefficient a(t) of the probability fringes.
    pub att: f64,
    /// Packet center offset (mĠ·d/2, m²G̈·d/2).
    pub shift_q: f64,
    pub shift_p: f64,
    /// Packet overlap e^{−d²/8σ²}.
    pub eps: f64,
    eps_exp: f64,
    cos_coef_q: f64,
    cos_coef_p: f64,
    z_coef_q: f64,
    z_coef_p: f64,
    fringe_env: f64,
    fringe_k: f64,
}

impl CatState {
    pub fn new(t: f64, params: &SimParams, init: &CatInit) -> Result<Self> {
        require_time(t)?;
        let gauss = GaussianState::new(t, params, &init.packet())?;
        let interference = interference_measure(t, params, init)?;
        let g = green_function(t, params)?;
        let f = fluctuation_moments(t, params)?;
        let m = params.m;
        let mgd = m * g.gdot;
        let sig2 = init.sigma * init.sigma;
        let d = init.d;
        let a11 = gauss.moments.a11;

        let spread = match init.prep {
            Prep::ZeroTemp => f.x2,
            Prep::BathTemp => f.x2 + m * params.kt * g.g * g.g,
        };
        let eps_exp = -d * d / (8.0 * sig2);
        Ok(CatState {
            gauss,
            interference,
            att: (-spread * d * d / (8.0 * sig2 * a11)).exp(),
            shift_q: mgd * d / 2.0,
            shift_p: m * m * g.gddot * d / 2.0,
            eps: eps_exp.exp(),
            eps_exp,
            cos_coef_q: m * m * g.gddot * d / (2.0 * params.hbar),
            cos_coef_p: mgd * d / (2.0 * params.hbar),
            z_coef_q: mgd * d / (4.0 * sig2),
            z_coef_p: g.g * d / (4.0 * sig2),
            fringe_env: (-mgd * mgd * d * d / (8.0 * a11)).exp(),
            fringe_k: params.hbar * g.g * d / (4.0 * sig2 * a11),
        })
    }

    /// Characteristic function at (`qq`, `pp`); real for this symmetric state.
    ///
    /// The overlap-cosh part is evaluated with the envelope folded into each
    /// exponent.  Every exponent is then ≤ 0, while the factored form
    /// ε·cosh(z) overflows once z exceeds ~700.
    pub fn char_function(&self, qq: f64, pp: f64) -> Complex64 {
        let a = &self.gauss.moments;
        let h = self.gauss.hbar;
        let quad =
            (a.a11 * pp * pp + 2.0 * a.a12 * pp * qq + a.a22 * qq * qq) / (2.0 * h * h);
        let direct = (-quad).exp() * (self.cos_coef_q * qq + self.cos_coef_p * pp).cos();
        let z = self.z_coef_q * qq + self.z_coef_p * pp;
        let cross =
            0.5 * ((-quad + self.eps_exp + z).exp() + (-quad + self.eps_exp - z).exp());
        Complex64::new((direct + cross) / (1.0 + self.eps), 0.0)
    }

    /// The three unnormalized Wigner contributions: the two displaced packets
    /// and the interference term.  `wigner` is their sum over 2(1+ε).
    pub fn wigner_terms(&self, q: f64, p: f64) -> (f64, f64, f64) {
        let minus = self.gauss.wigner(q - self.shift_q, p - self.shift_p);
        let plus = self.gauss.wigner(q + self.shift_q, p + self.shift_p);
        let im = &self.interference;
        let interf = 2.0
            * (-im.a_of_t).exp()
            * self.gauss.wigner(q, p)
            * (im.phi_q * q + im.phi_p * p).cos();
        (minus, plus, interf)
    }

    /// Phase-space density at (`q`, `p`).
    pub fn wigner(&self, q: f64, p: f64) -> f64 {
        let (minus, plus, interf) = self.wigner_terms(q, p);
        (minus + plus + interf) / (2.0 * (1.0 + self.eps))
    }

    /// Position distribution at `x`: two displaced packets plus the
    /// attenuated fringe term.
    pub fn probability(&self, x: f64) -> f64 {
        let a11 = self.gauss.moments.a11;
        let norm = 1.0 / (2.0 * PI * a11).sqrt();
        let p0 = |y: f64| norm * (-y * y / (2.0 * a11)).exp();
        let fringe =
            2.0 * self.att * self.fringe_env * p0(x) * (self.fringe_k * x).cos();
        (p0(x - self.shift_q) + p0(x + self.shift_q) + fringe) / (2.0 * (1.0 + self.eps))
    }
}

/// Characteristic function of the two-packet state; 1 at the origin.
pub fn char_function_cat(
    qq: f64,
    pp: f64,
    t: f64,
    params: &SimParams,
    init: &CatInit,
) -> Result<Complex64> {
    Ok(CatState::new(t, params, init)?.char_function(qq, pp))
}

/// Wigner function of the two-packet state.
pub fn wigner_cat(q: f64, p: f64, t: f64, params: &SimParams, init: &CatInit) -> Result<f64> {
    Ok(CatState::new(t, params, init)?.wigner(q, p))
}

/// Position distribution of the two-packet state.
pub fn probability_distribution(
    x: f64,
    t: f64,
    params: &SimParams,
    init: &CatInit,
) -> Result<f64> {
    Ok(CatState::new(t, params, init)?.probability(x))
}

/// Fringe attenuation coefficient a(t) ∈ (0, 1].
pub fn attenuation(t: f64, params: &SimParams, init: &CatInit) -> Result<f64> {
    Ok(CatState::new(t, params, init)?.att)
}

/// Short-time form of A(t): (d²/λ_th²)γt for `ZeroTemp`; the constant
/// d²/(2λ_th² + 8σ²) for `BathTemp`.
pub fn interference_shorttime(t: f64, params: &SimParams, init: &CatInit) -> Result<f64> {
    require_time(t)?;
    let lam2 = {
        let l = thermal_wavelength(params);
        l * l
    };
    Ok(match init.prep {
        Prep::ZeroTemp => init.d * init.d / lam2 * params.gamma * t,
        Prep::BathTemp => init.d * init.d / (2.0 * lam2 + 8.0 * init.sigma * init.sigma),
    })
}

/// Short-time form of a(t).
///
/// `ZeroTemp`: exp{−t³/(3τ_d(t² + t_c²))} with t_c = 2mσ²/ħ, so the decay
/// constant approaches 3τ_d once t ≫ t_c.  `BathTemp`: exp{−kT·d²t²/8mσ⁴}.
pub fn attenuation_shorttime(t: f64, params: &SimParams, init: &CatInit) -> Result<f64> {
    require_time(t)?;
    require(init.d > 0.0, "d", init.d, "must be > 0")?;
    let sig2 = init.sigma * init.sigma;
    Ok(match init.prep {
        Prep::ZeroTemp => {
            let tc = 2.0 * params.m * sig2 / params.hbar;
            let tau_d = crate::model::decoherence_time(params, init.d)?;
            (-t * t * t / (3.0 * tau_d * (t * t + tc * tc))).exp()
        }
        Prep::BathTemp => {
            (-params.kt * init.d * init.d * t * t / (8.0 * params.m * sig2 * sig2)).exp()
        }
    })
}

/// Time 2mσd/ħ for the packets to spread across their separation.
pub fn mixing_time(params: &SimParams, sigma: f64, d: f64) -> Result<f64> {
    require(
        sigma > 0.0 && sigma.is_finite(),
        "sigma",
        sigma,
        "must be finite and > 0",
    )?;
    require(d > 0.0 && d.is_finite(), "d", d, "must be finite and > 0")?;
    Ok(2.0 * params.m * sigma * d / params.hbar)
}

/// Phase-space integral of the interference term, in closed form:
/// e^{−A}·exp{−½ φᵀAφ}/(1+ε).  Identically ε/(1+ε) at every t.
pub fn interference_area(t: f64, params: &SimParams, init: &CatInit) -> Result<f64> {
    let st = CatState::new(t, params, init)?;
    let a = st.gauss.moments;
    let im = st.interference;
    let quad = 0.5
        * (im.phi_q * im.phi_q * a.a11
            + 2.0 * im.phi_q * im.phi_p * a.a12
            + im.phi_p * im.phi_p * a.a22);
    Ok((-im.a_of_t - quad).exp() / (1.0 + st.eps))
}
