//! Fourier quadrature from the characteristic function to the Wigner
//! function, purity, and position-space density-matrix elements.
//!
//! Every operation runs a coarse and a node-doubled pass and refuses results
//! that moved by more than the requested tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cat::CatInit;
use crate::gaussian::{second_moments, GaussianInit};
use crate::model::{green_function, SimParams};
use crate::oracle::PhaseSpaceGrid;
use crate::{require, Error, Result};

const IMAG_RESIDUE_TOL: f64 = 1e-10;
const DEFAULT_NODES: usize = 256;
const DEFAULT_TOL: f64 = 1e-9;

/// Truncation box and node budget for the Fourier quadratures.
///
/// The box spans ±half_qq × ±half_pp; `nodes` intervals per axis on the
/// coarse pass, twice that on the fine pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub half_qq: f64,
    pub half_pp: f64,
    pub nodes: usize,
    pub tol: f64,
    pub hbar: f64,
}

impl QuadratureSpec {
    pub fn new(half_qq: f64, half_pp: f64, nodes: usize, tol: f64, hbar: f64) -> Result<Self> {
        require(
            half_qq > 0.0 && half_qq.is_finite(),
            "half_qq",
            half_qq,
            "must be finite and > 0",
        )?;
        require(
            half_pp > 0.0 && half_pp.is_finite(),
            "half_pp",
            half_pp,
            "must be finite and > 0",
        )?;
        require(tol > 0.0 && tol.is_finite(), "tol", tol, "must be finite and > 0")?;
        require(hbar > 0.0 && hbar.is_finite(), "hbar", hbar, "must be finite and > 0")?;
        if nodes < 16 {
            return Err(Error::Grid("quadrature needs at least 16 nodes"));
        }
        Ok(QuadratureSpec {
            half_qq,
            half_pp,
            nodes,
            tol,
            hbar,
        })
    }

    /// Box of ±8 envelope widths of the evolved single-packet characteristic
    /// function.
    pub fn for_gaussian(t: f64, params: &SimParams, init: &GaussianInit) -> Result<Self> {
        let mom = second_moments(t, params, init)?;
        let wq = params.hbar * (mom.a11 / mom.det).sqrt();
        let wp = params.hbar * (mom.a22 / mom.det).sqrt();
        Self::new(8.0 * wq, 8.0 * wp, DEFAULT_NODES, DEFAULT_TOL, params.hbar)
    }

    /// Single-packet box widened by the displaced ridges of the two-packet
    /// characteristic function.
    pub fn for_cat(t: f64, params: &SimParams, init: &CatInit) -> Result<Self> {
        let single = GaussianInit::new(0.0, init.sigma, init.prep)?;
        let mom = second_moments(t, params, &single)?;
        let g = green_function(t, params)?;
        let h = params.hbar;
        let mgd = params.m * g.gdot;
        let scale = h * h * init.d / (4.0 * init.sigma * init.sigma * mom.det);
        let ridge_qq = (mgd * mom.a11 - g.g * mom.a12).abs() * scale;
        let ridge_pp = (g.g * mom.a22 - mgd * mom.a12).abs() * scale;
        let wq = h * (mom.a11 / mom.det).sqrt();
        let wp = h * (mom.a22 / mom.det).sqrt();
        Self::new(
            8.0 * wq + ridge_qq,
            8.0 * wp + ridge_pp,
            DEFAULT_NODES,
            DEFAULT_TOL,
            params.hbar,
        )
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

fn converged(coarse: f64, fine: f64, tol: f64) -> Result<()> {
    let delta = (coarse - fine).abs();
    if !delta.is_finite() || delta > tol {
        return Err(Error::NotConverged { delta, tol });
    }
    Ok(())
}

/// W(q, p) = (1/2πħ)² ∫∫ e^{i(qP + pQ)/ħ} W̃(Q, P) dQ dP on the geometry of
/// `template`.
///
/// The imaginary part of the quadrature must sit below 1e−10 and is then
/// discarded; a larger residue is reported as non-convergence.
pub fn char_to_wigner(
    sampler: impl Fn(f64, f64) -> Complex64 + Sync,
    template: &PhaseSpaceGrid,
    spec: &QuadratureSpec,
) -> Result<PhaseSpaceGrid> {
    let coarse = wigner_pass(&sampler, template, spec, spec.nodes);
    let fine = wigner_pass(&sampler, template, spec, 2 * spec.nodes);
    let delta = coarse
        .iter()
        .zip(&fine)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if !delta.is_finite() || delta > spec.tol {
        return Err(Error::NotConverged { delta, tol: spec.tol });
    }
    let residue = fine.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if residue > IMAG_RESIDUE_TOL {
        return Err(Error::NotConverged {
            delta: residue,
            tol: IMAG_RESIDUE_TOL,
        });
    }
    let mut out = template.clone();
    out.values = fine.iter().map(|v| v.re).collect();
    Ok(out)
}

fn wigner_pass(
    sampler: &(impl Fn(f64, f64) -> Complex64 + Sync),
    template: &PhaseSpaceGrid,
    spec: &QuadratureSpec,
    intervals: usize,
) -> Vec<Complex64> {
    let m = intervals + 1;
    let dqq = 2.0 * spec.half_qq / intervals as f64;
    let dpp = 2.0 * spec.half_pp / intervals as f64;
    let h = spec.hbar;
    let nq = template.nq;
    let np = template.np;

    // Separate the double sum: for each Q node, accumulate the P sum against
    // every target q, then close over Q against every target p.
    let inner: Vec<Vec<Complex64>> = (0..m)
        .into_par_iter()
        .map(|k| {
            let qq = -spec.half_qq + k as f64 * dqq;
            let samples: Vec<Complex64> = (0..m)
                .map(|j| {
                    let w = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
                    sampler(qq, -spec.half_pp + j as f64 * dpp) * w
                })
                .collect();
            (0..nq)
                .map(|i| {
                    let q = template.q_at(i);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, s) in samples.iter().enumerate() {
                        let pp = -spec.half_pp + j as f64 * dpp;
                        acc += Complex64::from_polar(1.0, q * pp / h) * s;
                    }
                    acc
                })
                .collect()
        })
        .collect();

    let pref = dqq * dpp / (2.0 * PI * h).powi(2);
    let mut out = vec![Complex64::new(0.0, 0.0); nq * np];
    out.par_chunks_mut(np).enumerate().for_each(|(i, row)| {
        for (l, slot) in row.iter_mut().enumerate() {
            let p = template.p_at(l);
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, col) in inner.iter().enumerate() {
                let qq = -spec.half_qq + k as f64 * dqq;
                let w = if k == 0 || k == m - 1 { 0.5 } else { 1.0 };
                acc += Complex64::from_polar(w, p * qq / h) * col[i];
            }
            *slot = acc * pref;
        }
    });
    out
}

/// Tr ρ² = (1/2πħ) ∫∫ |W̃(Q, P)|² dQ dP.
pub fn purity_quadrature(
    sampler: impl Fn(f64, f64) -> Complex64 + Sync,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let pass = |intervals: usize| -> f64 {
        let m = intervals + 1;
        let dqq = 2.0 * spec.half_qq / intervals as f64;
        let dpp = 2.0 * spec.half_pp / intervals as f64;
        let total: f64 = (0..m)
            .into_par_iter()
            .map(|k| {
                let qq = -spec.half_qq + k as f64 * dqq;
                let wk = if k == 0 || k == m - 1 { 0.5 } else { 1.0 };
                let mut row = 0.0;
                for j in 0..m {
                    let wj = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
                    row += wj * sampler(qq, -spec.half_pp + j as f64 * dpp).norm_sqr();
                }
                wk * row
            })
            .sum();
        total * dqq * dpp / (2.0 * PI * spec.hbar)
    };
    let coarse = pass(spec.nodes);
    let fine = pass(2 * spec.nodes);
    converged(coarse, fine, spec.tol)?;
    Ok(fine)
}

/// ⟨x|ρ|x′⟩ = (1/2πħ) ∫ e^{i(x + x′)P/2ħ} W̃(x′ − x, P) dP.
pub fn rho_quadrature(
    sampler: impl Fn(f64, f64) -> Complex64 + Sync,
    x: f64,
    x_prime: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let qq = x_prime - x;
    let mid = (x + x_prime) / 2.0;
    let pass = |intervals: usize| -> Complex64 {
        let m = intervals + 1;
        let dpp = 2.0 * spec.half_pp / intervals as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let pp = -spec.half_pp + j as f64 * dpp;
            let w = if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
            acc += Complex64::from_polar(w, mid * pp / spec.hbar) * sampler(qq, pp);
        }
        acc * dpp / (2.0 * PI * spec.hbar)
    };
    let coarse = pass(spec.nodes);
    let fine = pass(2 * spec.nodes);
    let delta = (coarse - fine).norm();
    if !delta.is_finite() || delta > spec.tol {
        return Err(Error::NotConverged { delta, tol: spec.tol });
    }
    Ok(fine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::CatState;
    use crate::densmat::{rho_element_cat, rho_element_gaussian};
    use crate::gaussian::{GaussianState, Prep};
    use crate::model::thermal_wavelength;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn p1() -> SimParams {
        SimParams::new(1.0, 1.0, 5.0, 1.0).unwrap()
    }

    #[test]
    fn wigner_transform_matches_gaussian_closed_form() {
        let params = p1();
        let init = GaussianInit::new(1.0, thermal_wavelength(&params) / 4.0, Prep::ZeroTemp)
            .unwrap();
        let t = 1.0;
        let state = GaussianState::new(t, &params, &init).unwrap();
        let mom = second_moments(t, &params, &init).unwrap();
        let (mq, mp) = (state.mean_q, state.mean_p);
        let (wq, wp) = (mom.a11.sqrt(), mom.a22.sqrt());

        let template = PhaseSpaceGrid::new(
            mq - 5.0 * wq,
            mq + 5.0 * wq,
            mp - 5.0 * wp,
            mp + 5.0 * wp,
            64,
            64,
        )
        .unwrap();
        let spec = QuadratureSpec::for_gaussian(t, &params, &init).unwrap();
        let wig = char_to_wigner(|qq, pp| state.char_function(qq, pp), &template, &spec).unwrap();

        let mut worst = 0.0f64;
        for i in 0..wig.nq {
            for j in 0..wig.np {
                let exact = state.wigner(wig.q_at(i), wig.p_at(j));
                worst = worst.max((wig.at(i, j) - exact).abs());
            }
        }
        assert!(worst <= 1e-8, "max deviation {worst:.3e}");
    }

    #[test]
    fn wigner_transform_shows_cat_peak_ratio() {
        let params = p1();
        let lam = thermal_wavelength(&params);
        let init = CatInit::new(10.0 * lam, lam / 4.0, Prep::ZeroTemp).unwrap();
        let state = CatState::new(0.0, &params, &init).unwrap();
        let d = init.d;

        // Node layout puts the interference maximum (0, 0) and the sheared
        // packet maximum (d/2, −mγd/2) exactly on the grid.
        let template =
            PhaseSpaceGrid::new(-0.75 * d, 0.75 * d, -d, d, 97, 33).unwrap();
        let spec = QuadratureSpec::for_cat(0.0, &params, &init).unwrap();
        let wig = char_to_wigner(|qq, pp| state.char_function(qq, pp), &template, &spec).unwrap();

        let mut worst = 0.0f64;
        for i in 0..wig.nq {
            for j in 0..wig.np {
                let exact = state.wigner(wig.q_at(i), wig.p_at(j));
                worst = worst.max((wig.at(i, j) - exact).abs());
            }
        }
        assert!(worst <= 1e-8, "max deviation {worst:.3e}");

        let center = wig.at(48, 16);
        let side = wig.at(80, 8);
        assert_relative_eq!(wig.q_at(48), 0.0, epsilon = 1e-12);
        assert_relative_eq!(wig.q_at(80), d / 2.0, max_relative = 1e-12);
        assert_relative_eq!(wig.p_at(8), -d / 2.0, max_relative = 1e-12);
        assert_relative_eq!(center / side, 2.0, max_relative = 1e-7);
    }

    #[test]
    fn flat_sampler_concentrates_at_origin() {
        // W̃ ≡ 1 is the delta-distribution limit: the pointwise peak grows
        // with the truncation box while the integral stays near one, and the
        // node-doubling contract rejects it at tight tolerance.
        let template = PhaseSpaceGrid::new(-4.0, 4.0, -4.0, 4.0, 65, 65).unwrap();

        let strict = QuadratureSpec::new(10.0, 10.0, 256, 1e-9, 1.0).unwrap();
        assert!(matches!(
            char_to_wigner(|_, _| Complex64::new(1.0, 0.0), &template, &strict),
            Err(Error::NotConverged { .. })
        ));

        let loose_small = strict.with_tol(0.5);
        let loose_big = QuadratureSpec::new(20.0, 20.0, 512, 0.5, 1.0).unwrap();
        let small =
            char_to_wigner(|_, _| Complex64::new(1.0, 0.0), &template, &loose_small).unwrap();
        let big = char_to_wigner(|_, _| Complex64::new(1.0, 0.0), &template, &loose_big).unwrap();

        assert_relative_eq!(big.at(32, 32) / small.at(32, 32), 4.0, max_relative = 1e-10);
        assert_abs_diff_eq!(small.integral(), 1.0, epsilon = 0.05);
        assert_abs_diff_eq!(big.integral(), 1.0, epsilon = 0.05);
    }

    #[test]
    fn purity_quadrature_examples() {
        let params = p1();
        let lam = thermal_wavelength(&params);

        let zero = GaussianInit::new(0.0, lam / 4.0, Prep::ZeroTemp).unwrap();
        let state0 = GaussianState::new(0.0, &params, &zero).unwrap();
        let spec0 = QuadratureSpec::for_gaussian(0.0, &params, &zero).unwrap();
        let p0 = purity_quadrature(|qq, pp| state0.char_function(qq, pp), &spec0).unwrap();
        assert_abs_diff_eq!(p0, 1.0, epsilon = 1e-8);

        for prep in [Prep::ZeroTemp, Prep::BathTemp] {
            let init = GaussianInit::new(0.5, lam / 4.0, prep).unwrap();
            for &t in &[0.05, 0.7] {
                let state = GaussianState::new(t, &params, &init).unwrap();
                let spec = QuadratureSpec::for_gaussian(t, &params, &init).unwrap();
                let quad =
                    purity_quadrature(|qq, pp| state.char_function(qq, pp), &spec).unwrap();
                let mom = second_moments(t, &params, &init).unwrap();
                let closed = params.hbar / (2.0 * mom.det.sqrt());
                assert_relative_eq!(quad, closed, max_relative = 1e-6);
            }
        }

        let cat = CatInit::new(10.0 * lam, lam / 4.0, Prep::ZeroTemp).unwrap();
        let cstate = CatState::new(0.0, &params, &cat).unwrap();
        let cspec = QuadratureSpec::for_cat(0.0, &params, &cat).unwrap();
        let pc = purity_quadrature(|qq, pp| cstate.char_function(qq, pp), &cspec).unwrap();
        assert_abs_diff_eq!(pc, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn rho_quadrature_matches_closed_forms() {
        let params = p1();
        let lam = thermal_wavelength(&params);

        let init = GaussianInit::new(1.0, lam / 4.0, Prep::ZeroTemp).unwrap();
        for &t in &[0.05, 0.5] {
            let state = GaussianState::new(t, &params, &init).unwrap();
            let spec = QuadratureSpec::for_gaussian(t, &params, &init).unwrap();
            for &(x, xp) in &[(0.5, -0.3), (1.2, 1.0), (0.0, 0.0)] {
                let quad =
                    rho_quadrature(|qq, pp| state.char_function(qq, pp), x, xp, &spec).unwrap();
                let closed = rho_element_gaussian(x, xp, t, &params, &init).unwrap();
                assert!((quad - closed).norm() <= 1e-7);
            }
        }

        let cat = CatInit::new(10.0 * lam, lam / 4.0, Prep::BathTemp).unwrap();
        let t = 0.01;
        let cstate = CatState::new(t, &params, &cat).unwrap();
        let cspec = QuadratureSpec::for_cat(t, &params, &cat).unwrap();
        for &(x, xp) in &[(0.0, 0.0), (2.2, 2.2), (2.2, -2.2), (0.4, -1.9)] {
            let quad =
                rho_quadrature(|qq, pp| cstate.char_function(qq, pp), x, xp, &cspec).unwrap();
            let closed = rho_element_cat(x, xp, t, &params, &cat).unwrap();
            assert!((quad - closed).norm() <= 1e-7, "at ({x}, {xp})");
        }
    }

    #[test]
    fn rho_quadrature_trace_is_one() {
        let params = p1();
        let init = GaussianInit::new(0.8, 0.4, Prep::BathTemp).unwrap();
        let t = 0.3;
        let state = GaussianState::new(t, &params, &init).unwrap();
        let spec = QuadratureSpec::for_gaussian(t, &params, &init).unwrap();
        let mom = second_moments(t, &params, &init).unwrap();
        let width = mom.a11.sqrt();

        let n = 201;
        let lo = state.mean_q - 8.0 * width;
        let hi = state.mean_q + 8.0 * width;
        let h = (hi - lo) / (n - 1) as f64;
        let mut trace = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let x = lo + k as f64 * h;
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            trace += w * rho_quadrature(|qq, pp| state.char_function(qq, pp), x, x, &spec)
                .unwrap();
        }
        trace *= h;
        assert_abs_diff_eq!(trace.re, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(trace.im, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn spec_constructor_validates() {
        assert!(QuadratureSpec::new(0.0, 1.0, 256, 1e-9, 1.0).is_err());
        assert!(QuadratureSpec::new(1.0, 1.0, 8, 1e-9, 1.0).is_err());
        assert!(QuadratureSpec::new(1.0, 1.0, 256, 0.0, 1.0).is_err());
        assert!(QuadratureSpec::new(1.0, 1.0, 256, 1e-9, -1.0).is_err());
    }
}
