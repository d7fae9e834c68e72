//! Recovery of the transport-equation coefficients from the moment flow.
//! For the free Ohmic problem they are constants: Γ = γ/2, Ω² = 0,
//! d_pp = mγkT, d_qp = 0, and the recovery is independent of the probe
//! widths used to invert the covariance flow.

use qbm::model::SimParams;
use qbm::oracle::extract_coefficients;

fn main() -> qbm::Result<()> {
    let params = SimParams::new(2.0, 0.7, 3.0, 1.5)?;
    println!(
        "expected: gamma_coeff = {}, omega2 = 0, d_pp = {}, d_qp = 0",
        params.gamma / 2.0,
        params.m * params.gamma * params.kt
    );
    println!();

    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>14}",
        "t", "gamma_coeff", "omega2", "d_pp", "d_qp"
    );
    for &t in &[0.01, 0.1, 0.5, 1.0, 2.0, 5.0] {
        let c = extract_coefficients(t, &params, (0.3, 0.6))?;
        println!(
            "{t:>6.2} {:>14.10} {:>14.6e} {:>14.10} {:>14.6e}",
            c.gamma_coeff, c.omega2, c.d_pp, c.d_qp
        );
    }
    println!();

    // Same answer from very different probe pairs.
    for probes in [(0.1, 0.9), (0.25, 0.7), (1.3, 2.9)] {
        let c = extract_coefficients(1.0, &params, probes)?;
        println!(
            "probes ({:>4}, {:>4}): gamma_coeff = {:.10}, d_pp = {:.10}",
            probes.0, probes.1, c.gamma_coeff, c.d_pp
        );
    }
    Ok(())
}
