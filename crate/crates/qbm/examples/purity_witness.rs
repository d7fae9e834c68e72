//! Transient purity excess of a narrow packet and the witness that certifies
//! it: <psi, rho psi> with the first excited probe state goes negative on
//! exactly the interval where Tr rho^2 > 1.

use qbm::densmat::{kernel_spectrum, negativity_witness, purity, rho_element_gaussian};
use qbm::gaussian::{GaussianInit, Prep};
use qbm::model::{thermal_wavelength, SimParams};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let sigma = thermal_wavelength(&params) / 4.0;
    let init = GaussianInit::new(0.0, sigma, Prep::ZeroTemp)?;

    println!("{:>6} {:>12} {:>14}", "t", "purity", "witness");
    for k in 0..=12 {
        let t = 0.25 * k as f64 / 12.0;
        println!(
            "{t:>6.4} {:>12.8} {:>14.6e}",
            purity(t, &params, &init)?,
            negativity_witness(t, &params, sigma, Prep::ZeroTemp)?
        );
    }
    println!();

    let t = 0.05;
    let spectrum = kernel_spectrum(
        |x, xp| rho_element_gaussian(x, xp, t, &params, &init).unwrap(),
        3.5,
        128,
    )?;
    println!("kernel spectrum at t = {t}:");
    println!("  top    {:+.6}", spectrum[0]);
    println!("  bottom {:+.6e}", spectrum.last().unwrap());
    println!("  trace  {:.6}", spectrum.iter().sum::<f64>());
    println!(
        "  purity {:.6} (closed form {:.6})",
        spectrum.iter().map(|l| l * l).sum::<f64>(),
        purity(t, &params, &init)?
    );
    Ok(())
}
