//! Green function, fluctuation moments and the derived time/length scales.

use qbm::model::{
    decoherence_time, fluctuation_moments, green_function, thermal_wavelength, SimParams,
};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let lam = thermal_wavelength(&params);
    println!("thermal wavelength      {lam:.6}");
    println!("decoherence time (10 l) {:.6}", decoherence_time(&params, 10.0 * lam)?);
    println!();

    println!("{:>6} {:>10} {:>10} {:>10}", "t", "G", "G'", "G''");
    for t in [0.0, 0.1, 0.5, 1.0, 3.0] {
        let g = green_function(t, &params)?;
        println!("{t:>6.2} {:>10.6} {:>10.6} {:>10.6}", g.g, g.gdot, g.gddot);
    }
    println!();

    println!("{:>6} {:>12} {:>12} {:>12}", "t", "<X^2>", "<XX'+X'X>", "<X'^2>");
    for t in [1e-4, 0.01, 0.1, 1.0, 10.0] {
        let m = fluctuation_moments(t, &params)?;
        println!("{t:>6} {:>12.6e} {:>12.6e} {:>12.6e}", m.x2, m.xxd, m.xd2);
    }
    Ok(())
}
