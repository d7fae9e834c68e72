//! Coordinate-space density-matrix elements for single packets and
//! two-packet superpositions, purity and its short-time expansion, the
//! explicit negativity witness, and a grid diagnostic for the kernel
//! spectrum.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::cat::{interference_measure, CatInit};
use crate::gaussian::{second_moments, GaussianInit, Prep, SecondMoments};
use crate::model::{green_function, thermal_wavelength, SimParams};
use crate::{require, require_time, Error, Result};

/// The centered kernel R(x, x′): diagonal marginal (2πA11)^{−1/2}
/// exp{−x²/2A11}, off-diagonal decay set by det/ħ², and a quadratic phase
/// with coefficient A12/(2ħA11).
///
/// Satisfies R(x, x′) = conj(R(x′, x)) identically.
struct RhoKernel {
    norm: f64,
    coef_diff: f64,
    coef_sum: f64,
    coef_phase: f64,
}

impl RhoKernel {
    fn new(mom: &SecondMoments, hbar: f64) -> Self {
        RhoKernel {
            norm: 1.0 / (2.0 * PI * mom.a11).sqrt(),
            coef_diff: mom.det / (2.0 * hbar * hbar * mom.a11),
            coef_sum: 1.0 / (8.0 * mom.a11),
            coef_phase: mom.a12 / (2.0 * hbar * mom.a11),
        }
    }

    fn eval(&self, x: f64, xp: f64) -> Complex64 {
        let diff = x - xp;
        let sum = x + xp;
        let mag = self.norm * (-self.coef_diff * diff * diff - self.coef_sum * sum * sum).exp();
        Complex64::from_polar(mag, self.coef_phase * diff * sum)
    }
}

/// ⟨x|ρ(t)|x′⟩ for the evolved single packet.
pub fn rho_element_gaussian(
    x: f64,
    x_prime: f64,
    t: f64,
    params: &SimParams,
    init: &GaussianInit,
) -> Result<Complex64> {
    require_time(t)?;
    let mom = second_moments(t, params, init)?;
    let g = green_function(t, params)?;
    let kernel = RhoKernel::new(&mom, params.hbar);
    let shift = params.m * g.gdot * init.x0;
    let phase = params.m * params.m * g.gddot * init.x0 * (x - x_prime) / params.hbar;
    Ok(Complex64::from_polar(1.0, phase) * kernel.eval(x - shift, x_prime - shift))
}

/// ⟨x|ρ(t)|x′⟩ for the evolved two-packet superposition.
///
/// Four peaks: two diagonal at x = x′ = ±mĠd/2, and two off-diagonal at
/// x = −x′ = ±Kd/2 carrying the extra weight e^{−A(t)}.
pub fn rho_element_cat(
    x: f64,
    x_prime: f64,
    t: f64,
    params: &SimParams,
    init: &CatInit,
) -> Result<Complex64> {
    require_time(t)?;
    let single = GaussianInit::new(0.0, init.sigma, init.prep)?;
    let mom = second_moments(t, params, &single)?;
    let g = green_function(t, params)?;
    let im = interference_measure(t, params, init)?;
    let kernel = RhoKernel::new(&mom, params.hbar);

    let m = params.m;
    let h = params.hbar;
    let sig2 = init.sigma * init.sigma;
    let mgd = m * g.gdot;
    let d = init.d;

    let k_half = h * h * (mgd * mom.a11 - g.g * mom.a12) / (4.0 * sig2 * mom.det) * d / 2.0;
    let m_phase = h * (g.g * mom.a22 - mgd * mom.a12) / (4.0 * sig2 * mom.det) * d;
    let l_phase = m * m * g.gddot / h * d;
    let shift = mgd * d / 2.0;
    let damp = (-im.a_of_t).exp();

    let diff = x - x_prime;
    let sum = x + x_prime;
    let direct = Complex64::from_polar(1.0, l_phase * diff / 2.0)
        * kernel.eval(x - shift, x_prime - shift)
        + Complex64::from_polar(1.0, -l_phase * diff / 2.0)
            * kernel.eval(x + shift, x_prime + shift);
    let cross = Complex64::from_polar(damp, m_phase * sum / 2.0)
        * kernel.eval(x + k_half, x_prime - k_half)
        + Complex64::from_polar(damp, -m_phase * sum / 2.0)
            * kernel.eval(x - k_half, x_prime + k_half);

    let eps = (-d * d / (8.0 * sig2)).exp();
    Ok((direct + cross) / (2.0 * (1.0 + eps)))
}

/// Tr ρ² = ħ/(2√det) for the evolved single packet.
///
/// Exceeding 1 signals loss of positivity; equality at 1 holds exactly when
/// det = ħ²/4.
pub fn purity(t: f64, params: &SimParams, init: &GaussianInit) -> Result<f64> {
    let mom = second_moments(t, params, init)?;
    Ok(params.hbar / (2.0 * mom.det.sqrt()))
}

/// Leading short-time behavior 1 + (1 − 4σ²/λ_th²)γt of the `ZeroTemp`
/// purity: an initial rise above 1 whenever 2σ < λ_th.
pub fn purity_shorttime(t: f64, params: &SimParams, sigma: f64) -> Result<f64> {
    require_time(t)?;
    require(
        sigma > 0.0 && sigma.is_finite(),
        "sigma",
        sigma,
        "must be finite and > 0",
    )?;
    let lam = thermal_wavelength(params);
    Ok(1.0 + (1.0 - 4.0 * sigma * sigma / (lam * lam)) * params.gamma * t)
}

/// The orthogonal probe state paired with a width-σ packet at the origin:
/// ψ(x) = [x/(σ(2πσ²)^{1/4})]·exp{−(1/4σ² + imγ/2ħ)x²}, normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessState {
    pub sigma: f64,
    pub m: f64,
    pub gamma: f64,
    pub hbar: f64,
}

impl WitnessState {
    pub fn new(params: &SimParams, sigma: f64) -> Result<Self> {
        require(
            sigma > 0.0 && sigma.is_finite(),
            "sigma",
            sigma,
            "must be finite and > 0",
        )?;
        Ok(WitnessState {
            sigma,
            m: params.m,
            gamma: params.gamma,
            hbar: params.hbar,
        })
    }

    pub fn psi(&self, x: f64) -> Complex64 {
        let sig2 = self.sigma * self.sigma;
        let mag = x / (self.sigma * (2.0 * PI * sig2).powf(0.25))
            * (-x * x / (4.0 * sig2)).exp();
        Complex64::from_polar(mag, -self.m * self.gamma * x * x / (2.0 * self.hbar))
    }
}

/// ⟨ψ, ρ(t)ψ⟩ for the probe ψ of `WitnessState` against the packet evolved
/// from the same σ at the origin.
///
/// Equals −2[1 − 4det/ħ²]/D^{3/2} with D > 0, so it is negative exactly
/// where det < ħ²/4, i.e. where the purity exceeds 1.
pub fn negativity_witness(t: f64, params: &SimParams, sigma: f64, prep: Prep) -> Result<f64> {
    let init = GaussianInit::new(0.0, sigma, prep)?;
    let mom = second_moments(t, params, &init)?;
    let h2 = params.hbar * params.hbar;
    let sig2 = sigma * sigma;
    let chirp = mom.a12 + params.m * params.gamma * mom.a11;
    let denom = (1.0 + mom.a11 / sig2) * (1.0 + 4.0 * sig2 * mom.det / (h2 * mom.a11))
        + 4.0 * sig2 * chirp * chirp / (h2 * mom.a11);
    let w = -2.0 * (1.0 - 4.0 * mom.det / h2) / denom.powf(1.5);
    // -0.0 collapses to +0.0.
    Ok(w + 0.0)
}

/// Eigenvalues (descending) of the discretized kernel ρ(x_i, x_j)·Δx on a
/// uniform grid over [−half_extent, half_extent].
///
/// The kernel is symmetrized before diagonalizing, so the output is real;
/// the eigenvalues sum to Tr ρ and their squares to Tr ρ² up to
/// discretization error.  A suitable extent is ±(d/2 + 8·max width).
pub fn kernel_spectrum(
    rho: impl Fn(f64, f64) -> Complex64,
    half_extent: f64,
    n: usize,
) -> Result<Vec<f64>> {
    if n < 16 {
        return Err(Error::Grid("kernel spectrum needs at least 16 nodes"));
    }
    require(
        half_extent > 0.0 && half_extent.is_finite(),
        "half_extent",
        half_extent,
        "must be finite and > 0",
    )?;
    let dx = 2.0 * half_extent / (n - 1) as f64;
    let node = |i: usize| -half_extent + i as f64 * dx;

    let mut re = DMatrix::zeros(n, n);
    let mut im = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = rho(node(i), node(j)) * dx;
            re[(i, j)] = v.re;
            im[(i, j)] = v.im;
        }
    }
    let re_s = (re.clone() + re.transpose()) / 2.0;
    let im_s = (im.clone() - im.transpose()) / 2.0;

    // Real embedding [[Re, −Im], [Im, Re]] of the Hermitian kernel; each
    // eigenvalue appears twice.
    let mut emb = DMatrix::zeros(2 * n, 2 * n);
    emb.view_mut((0, 0), (n, n)).copy_from(&re_s);
    emb.view_mut((n, n), (n, n)).copy_from(&re_s);
    emb.view_mut((0, n), (n, n)).copy_from(&(-&im_s));
    emb.view_mut((n, 0), (n, n)).copy_from(&im_s);

    let mut eig: Vec<f64> = emb.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig.into_iter().step_by(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::probability_distribution;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn p1() -> SimParams {
        SimParams::new(1.0, 1.0, 5.0, 1.0).unwrap()
    }

    fn sig_quarter() -> f64 {
        thermal_wavelength(&p1()) / 4.0
    }

    fn trapz1d(f: impl Fn(f64) -> f64, x0: f64, x1: f64, n: usize) -> f64 {
        let h = (x1 - x0) / (n - 1) as f64;
        let mut sum = 0.5 * (f(x0) + f(x1));
        for i in 1..n - 1 {
            sum += f(x0 + i as f64 * h);
        }
        sum * h
    }

    #[test]
    fn gaussian_diagonal_is_real_and_traces_to_one() {
        let params = p1();
        for prep in [Prep::ZeroTemp, Prep::BathTemp] {
            let init = GaussianInit::new(1.0, sig_quarter(), prep).unwrap();
            for &t in &[0.0, 0.3, 2.0] {
                let mom = second_moments(t, &params, &init).unwrap();
                let w = mom.a11.sqrt();
                for k in -4..=4 {
                    let x = k as f64 * w;
                    let v = rho_element_gaussian(x, x, t, &params, &init).unwrap();
                    assert_eq!(v.im, 0.0);
                    assert!(v.re >= 0.0);
                }
                let trace = trapz1d(
                    |x| rho_element_gaussian(x, x, t, &params, &init).unwrap().re,
                    -10.0 * w,
                    10.0 * w + 1.0,
                    4001,
                );
                assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn cat_trace_is_one() {
        let params = p1();
        let lam = thermal_wavelength(&params);
        for prep in [Prep::ZeroTemp, Prep::BathTemp] {
            let init = CatInit::new(10.0 * lam, lam / 4.0, prep).unwrap();
            for &t in &[0.0, 0.01, 1.0] {
                let single = GaussianInit::new(0.0, init.sigma, prep).unwrap();
                let mom = second_moments(t, &params, &single).unwrap();
                let half = init.d / 2.0 + 10.0 * mom.a11.sqrt();
                let trace = trapz1d(
                    |x| rho_element_cat(x, x, t, &params, &init).unwrap().re,
                    -half,
                    half,
                    6001,
                );
                assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn cat_diagonal_matches_probability() {
        let params = p1();
        let lam = thermal_wavelength(&params);
        for prep in [Prep::ZeroTemp, Prep::BathTemp] {
            let init = CatInit::new(10.0 * lam, lam / 4.0, prep).unwrap();
            for &t in &[0.0, 0.01, 0.2, 1.0] {
                for k in -12..=12 {
                    let x = k as f64 * init.d / 10.0;
                    let diag = rho_element_cat(x, x, t, &params, &init).unwrap();
                    let prob = probability_distribution(x, t, &params, &init).unwrap();
                    assert_abs_diff_eq!(diag.re, prob, epsilon = 1e-10);
                    assert_eq!(diag.im, 0.0);
                }
            }
        }
    }

    #[test]
    fn cat_offdiagonal_peak_weight() {
        let params = p1();
        let lam = thermal_wavelength(&params);
        for prep in [Prep::ZeroTemp, Prep::BathTemp] {
            let init = CatInit::new(10.0 * lam, lam / 4.0, prep).unwrap();
            let t = 0.01;
            let single = GaussianInit::new(0.0, init.sigma, prep).unwrap();
            let mom = second_moments(t, &params, &single).unwrap();
            let g = green_function(t, &params).unwrap();
            let a = interference_measure(t, &params, &init).unwrap().a_of_t;

            let k_half = (params.m * g.gdot * mom.a11 - g.g * mom.a12)
                / (4.0 * init.sigma * init.sigma * mom.det)
                * init.d
                / 2.0;
            let shift = params.m * g.gdot * init.d / 2.0;
            let off = rho_element_cat(k_half, -k_half, t, &params, &init).unwrap();
            let diag = rho_element_cat(shift, shift, t, &params, &init).unwrap();
            assert_relative_eq!(off.norm() / diag.norm(), (-a).exp(), max_relative = 1e-6);
        }
    }

    #[test]
    fn purity_values() {
        let params = p1();
        let zero = GaussianInit::new(0.0, sig_quarter(), Prep::ZeroTemp).unwrap();
        let bath = GaussianInit::new(0.0, sig_quarter(), Prep::BathTemp).unwrap();

        assert_eq!(purity(0.0, &params, &zero).unwrap(), 1.0);
        assert_relative_eq!(
            purity(0.0, &params, &bath).unwrap(),
            0.894_427_190_999_916,
            max_relative = 1e-12
        );

        // Frozen from the closed form; the initial rise above 1 and the
        // later fall below it.
        assert_abs_diff_eq!(purity(0.01, &params, &zero).unwrap(), 1.007399653, epsilon = 1e-8);
        assert_abs_diff_eq!(purity(0.05, &params, &zero).unwrap(), 1.021165641, epsilon = 1e-8);
        assert_abs_diff_eq!(purity(0.1, &params, &zero).unwrap(), 0.954252122, epsilon = 1e-8);
    }

    #[test]
    fn purity_shorttime_slopes() {
        let params = p1();
        let lam = thermal_wavelength(&params);
        let t = 0.3;
        assert_relative_eq!(
            (purity_shorttime(t, &params, lam / 4.0).unwrap() - 1.0) / t,
            0.75,
            max_relative = 1e-12
        );
        assert_eq!(purity_shorttime(t, &params, lam / 2.0).unwrap(), 1.0);
    }

    #[test]
    fn purity_slope_matches_finite_difference() {
        let params = p1();
        let zero = GaussianInit::new(0.0, sig_quarter(), Prep::ZeroTemp).unwrap();
        let h = 1e-6;
        let p0 = purity(0.0, &params, &zero).unwrap();
        let p1v = purity(h, &params, &zero).unwrap();
        let p2v = purity(2.0 * h, &params, &zero).unwrap();
        let fd = (4.0 * p1v - p2v - 3.0 * p0) / (2.0 * h);
        assert_abs_diff_eq!(fd, 0.75, epsilon = 1e-6);
    }

    #[test]
    fn witness_frozen_values() {
        let params = p1();
        let s = sig_quarter();
        assert_eq!(negativity_witness(0.0, &params, s, Prep::ZeroTemp).unwrap(), 0.0);
        assert_abs_diff_eq!(
            negativity_witness(0.01, &params, s, Prep::ZeroTemp).unwrap(),
            -0.003488727512,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            negativity_witness(0.1, &params, s, Prep::ZeroTemp).unwrap(),
            0.002427478610,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            negativity_witness(1.0, &params, s, Prep::ZeroTemp).unwrap(),
            0.007332191206,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            negativity_witness(0.01, &params, s, Prep::BathTemp).unwrap(),
            0.045764606167,
            epsilon = 1e-11
        );
        assert_abs_diff_eq!(
            negativity_witness(1.0, &params, s, Prep::BathTemp).unwrap(),
            0.006731788894,
            epsilon = 1e-11
        );
    }

    #[test]
    fn witness_sign_tracks_purity_excess() {
        let params = p1();
        let s = sig_quarter();
        let zero = GaussianInit::new(0.0, s, Prep::ZeroTemp).unwrap();
        for k in 0..=1000 {
            let t = 2.0 * k as f64 / 1000.0;
            let w = negativity_witness(t, &params, s, Prep::ZeroTemp).unwrap();
            let p = purity(t, &params, &zero).unwrap();
            let det = second_moments(t, &params, &zero).unwrap().det;
            assert_eq!(w < 0.0, p > 1.0);
            assert_eq!(w < 0.0, 4.0 * det < 1.0);
        }
    }

    #[test]
    fn witness_state_is_normalized() {
        let params = p1();
        for &s in &[sig_quarter(), 0.5, 2.0] {
            let w = WitnessState::new(&params, s).unwrap();
            let norm = trapz1d(|x| w.psi(x).norm_sqr(), -14.0 * s, 14.0 * s, 4001);
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn witness_matches_double_quadrature() {
        let params = p1();
        let s = sig_quarter();
        let w = WitnessState::new(&params, s).unwrap();
        for (prep, times) in [
            (Prep::ZeroTemp, vec![0.01, 0.1, 1.0]),
            (Prep::BathTemp, vec![0.01, 1.0]),
        ] {
            let init = GaussianInit::new(0.0, s, prep).unwrap();
            for t in times {
                let mom = second_moments(t, &params, &init).unwrap();
                let half = 9.0 * mom.a11.sqrt().max(s);
                let n = 1201;
                let h = 2.0 * half / (n - 1) as f64;
                let mut total = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let wi = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
                    let x = -half + i as f64 * h;
                    let psi_x = w.psi(x).conj();
                    for j in 0..n {
                        let wj = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                        let xp = -half + j as f64 * h;
                        total += wi * wj
                            * psi_x
                            * rho_element_gaussian(x, xp, t, &params, &init).unwrap()
                            * w.psi(xp);
                    }
                }
                total *= h * h;
                let closed = negativity_witness(t, &params, s, prep).unwrap();
                assert_abs_diff_eq!(total.re, closed, epsilon = 1e-6);
                assert_abs_diff_eq!(total.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn kernel_spectrum_detects_nonpositivity() {
        let params = p1();
        let init = GaussianInit::new(0.0, sig_quarter(), Prep::ZeroTemp).unwrap();

        let spectrum_at = |t: f64| {
            let mom = second_moments(t, &params, &init).unwrap();
            kernel_spectrum(
                |x, xp| rho_element_gaussian(x, xp, t, &params, &init).unwrap(),
                8.0 * mom.a11.sqrt(),
                128,
            )
            .unwrap()
        };

        let at_zero = spectrum_at(0.0);
        assert_abs_diff_eq!(at_zero[0], 1.0, epsilon = 1e-6);
        assert!(at_zero.last().unwrap() > &-1e-9);

        let at_peak = spectrum_at(0.05);
        let trace: f64 = at_peak.iter().sum();
        let purity_sum: f64 = at_peak.iter().map(|l| l * l).sum();
        assert_abs_diff_eq!(trace, 1.0, epsilon = 1e-6);
        assert_relative_eq!(
            purity_sum,
            purity(0.05, &params, &init).unwrap(),
            max_relative = 1e-6
        );
        assert!(at_peak.last().unwrap() < &-1e-4);
    }

    #[test]
    fn kernel_spectrum_rejects_tiny_grids() {
        let params = p1();
        let init = GaussianInit::new(0.0, 0.5, Prep::ZeroTemp).unwrap();
        let r = kernel_spectrum(
            |x, xp| rho_element_gaussian(x, xp, 0.0, &params, &init).unwrap(),
            4.0,
            8,
        );
        assert!(r.is_err());
    }

    proptest! {
        #[test]
        fn prop_hermiticity(
            x in -3.0f64..3.0,
            xp in -3.0f64..3.0,
            t in 0.0f64..3.0,
        ) {
            let params = p1();
            let lam = thermal_wavelength(&params);
            let g_init = GaussianInit::new(0.7, lam / 4.0, Prep::BathTemp).unwrap();
            let a = rho_element_gaussian(x, xp, t, &params, &g_init).unwrap();
            let b = rho_element_gaussian(xp, x, t, &params, &g_init).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-30));

            let c_init = CatInit::new(10.0 * lam, lam / 4.0, Prep::ZeroTemp).unwrap();
            let a = rho_element_cat(x, xp, t, &params, &c_init).unwrap();
            let b = rho_element_cat(xp, x, t, &params, &c_init).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1e-30));
        }

        #[test]
        fn prop_cat_zero_separation_matches_gaussian(
            x in -2.0f64..2.0,
            xp in -2.0f64..2.0,
            t in 0.0f64..2.0,
        ) {
            let params = p1();
            let cat = CatInit::new(0.0, 0.3, Prep::BathTemp).unwrap();
            let single = GaussianInit::new(0.0, 0.3, Prep::BathTemp).unwrap();
            let a = rho_element_cat(x, xp, t, &params, &cat).unwrap();
            let b = rho_element_gaussian(x, xp, t, &params, &single).unwrap();
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}
