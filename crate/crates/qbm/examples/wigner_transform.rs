//! Fourier quadrature against the closed forms: characteristic function to
//! Wigner function on a grid, purity, and one density-matrix element.

use qbm::cat::{CatInit, CatState};
use qbm::densmat::{purity, rho_element_cat};
use qbm::gaussian::{GaussianInit, Prep};
use qbm::model::{thermal_wavelength, SimParams};
use qbm::oracle::{char_to_wigner, purity_quadrature, rho_quadrature, PhaseSpaceGrid, QuadratureSpec};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let lam = thermal_wavelength(&params);
    let init = CatInit::new(1.0, 0.25, Prep::ZeroTemp)?;
    let t = 0.05;

    let state = CatState::new(t, &params, &init)?;
    let template = PhaseSpaceGrid::new(-1.5, 1.5, -4.0, 4.0, 48, 48)?;
    let spec = QuadratureSpec::for_cat(t, &params, &init)?;
    let grid = char_to_wigner(|qq, pp| state.char_function(qq, pp), &template, &spec)?;

    let mut worst = 0.0f64;
    for i in 0..grid.nq {
        for j in 0..grid.np {
            worst = worst.max((grid.at(i, j) - state.wigner(grid.q_at(i), grid.p_at(j))).abs());
        }
    }
    println!(
        "wigner grid {}x{}: quadrature box +-{:.2} x +-{:.2}, worst |dev| {:.3e}",
        grid.nq, grid.np, spec.half_qq, spec.half_pp, worst
    );

    let packet = GaussianInit::new(0.5, lam / 4.0, Prep::ZeroTemp)?;
    for &tt in &[0.0, 0.1, 0.5] {
        let gs = qbm::gaussian::GaussianState::new(tt, &params, &packet)?;
        let gspec = QuadratureSpec::for_gaussian(tt, &params, &packet)?;
        println!(
            "purity t = {tt}: quadrature {:.12}, closed form {:.12}",
            purity_quadrature(|qq, pp| gs.char_function(qq, pp), &gspec)?,
            purity(tt, &params, &packet)?
        );
    }

    let (x, xp) = (0.3, -0.4);
    let via_fourier = rho_quadrature(|qq, pp| state.char_function(qq, pp), x, xp, &spec)?;
    let closed = rho_element_cat(x, xp, t, &params, &init)?;
    println!(
        "rho({x}, {xp}): quadrature {:.10}{:+.10}i, closed form {:.10}{:+.10}i",
        via_fourier.re, via_fourier.im, closed.re, closed.im
    );
    Ok(())
}
