//! Position-space density matrix of a split packet: diagonal peaks persist
//! while the off-diagonal coherence peaks decay by the attenuation factor.

use qbm::cat::{CatInit, CatState};
use qbm::densmat::rho_element_cat;
use qbm::gaussian::Prep;
use qbm::model::{decoherence_time, thermal_wavelength, SimParams};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let lam = thermal_wavelength(&params);
    let d = 10.0 * lam;
    let init = CatInit::new(d, lam / 4.0, Prep::ZeroTemp)?;
    let tau = decoherence_time(&params, d)?;

    println!(
        "{:>8} {:>14} {:>14} {:>10}",
        "t", "|rho(x,x)|", "|rho(x,-x)|", "ratio"
    );
    for t in [0.0, 0.5 * tau, tau, 2.0 * tau, 10.0 * tau] {
        let state = CatState::new(t, &params, &init)?;
        let x = state.shift_q;
        let diag = rho_element_cat(x, x, t, &params, &init)?.norm();
        let coh = rho_element_cat(x, -x, t, &params, &init)?.norm();
        println!("{t:>8.4} {diag:>14.6} {coh:>14.6} {:>10.6}", coh / diag);
    }

    println!();
    let t = tau;
    let x = CatState::new(t, &params, &init)?.shift_q;
    let a = rho_element_cat(x, -x, t, &params, &init)?;
    let b = rho_element_cat(-x, x, t, &params, &init)?;
    println!("hermiticity at the coherence peak:");
    println!("  rho(x,-x) = {a}");
    println!("  rho(-x,x) = {b}");
    Ok(())
}
