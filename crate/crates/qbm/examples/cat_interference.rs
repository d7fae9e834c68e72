//! Attenuation of the interference fringes of a split packet.
//!
//! Prints the interference measure A(t), the fringe wavenumbers and the
//! attenuation factor for both preparations, plus the short-time laws they
//! follow before gamma*t reaches the decoherence scale.

use qbm::cat::{attenuation, attenuation_shorttime, interference_measure, mixing_time, CatInit};
use qbm::gaussian::Prep;
use qbm::model::{decoherence_time, thermal_wavelength, SimParams};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let lam = thermal_wavelength(&params);
    let d = 10.0 * lam;
    let sigma = lam / 4.0;

    println!("separation            {d:.6}");
    println!("decoherence time      {:.6}", decoherence_time(&params, d)?);
    println!("moment mixing time    {:.6}", mixing_time(&params, sigma, d)?);
    println!();

    for prep in [Prep::ZeroTemp, Prep::BathTemp] {
        let init = CatInit::new(d, sigma, prep)?;
        println!("{prep:?}");
        println!(
            "{:>8} {:>12} {:>10} {:>10} {:>12} {:>12}",
            "t", "A(t)", "phi_q", "phi_p", "a(t)", "a short-t"
        );
        for t in [1e-4, 1e-3, 1e-2, 0.1, 1.0] {
            let m = interference_measure(t, &params, &init)?;
            let a = attenuation(t, &params, &init)?;
            let short = attenuation_shorttime(t, &params, &init)?;
            println!(
                "{t:>8} {:>12.6} {:>10.4} {:>10.4} {:>12.6e} {:>12.6e}",
                m.a_of_t, m.phi_q, m.phi_p, a, short
            );
        }
        println!();
    }
    Ok(())
}
