//! Second moments of a single packet for both preparations.
//!
//! The zero-temperature preparation starts at the measurement variance and
//! picks up momentum spread from the squeeze; the bath-temperature one starts
//! hotter by m*kT.  Both approach the same diffusive growth.

use qbm::gaussian::{mean_trajectory, second_moments, GaussianInit, Prep};
use qbm::model::{thermal_wavelength, SimParams};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let sigma = thermal_wavelength(&params) / 4.0;
    let x0 = 1.0;

    for prep in [Prep::ZeroTemp, Prep::BathTemp] {
        let init = GaussianInit::new(x0, sigma, prep)?;
        println!("{prep:?}");
        println!(
            "{:>6} {:>10} {:>10} {:>12} {:>12} {:>12}",
            "t", "<q>", "<p>", "A11", "A12", "A22"
        );
        for t in [0.0, 0.05, 0.2, 1.0, 3.0] {
            let (mq, mp) = mean_trajectory(t, &params, x0)?;
            let a = second_moments(t, &params, &init)?;
            println!(
                "{t:>6.2} {mq:>10.6} {mp:>10.6} {:>12.6} {:>12.6} {:>12.6}",
                a.a11, a.a12, a.a22
            );
        }
        println!();
    }
    Ok(())
}
