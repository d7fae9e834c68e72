//! Position distribution of a narrowly split packet, fringes included.
//!
//! Uses a small separation so the packets overlap and the fringes are
//! visible in P(x).  The integrated fringe weight stays at eps/(1+eps) for
//! all times even while the fringe amplitude decays.

use qbm::cat::{interference_area, probability_distribution, CatInit};
use qbm::gaussian::Prep;
use qbm::model::SimParams;

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let init = CatInit::new(1.0, 0.25, Prep::ZeroTemp)?;
    let eps = (-1.0_f64 / (8.0 * 0.0625)).exp();
    println!("packet overlap eps    {eps:.6}");
    println!("fringe weight target  {:.6}", eps / (1.0 + eps));
    println!();

    println!("{:>6} {:>12} {:>12} {:>12}", "x", "P(x, 0)", "P(x, 0.05)", "P(x, 0.5)");
    for k in 0..=20 {
        let x = -1.25 + 2.5 * k as f64 / 20.0;
        let p0 = probability_distribution(x, 0.0, &params, &init)?;
        let p1 = probability_distribution(x, 0.05, &params, &init)?;
        let p2 = probability_distribution(x, 0.5, &params, &init)?;
        println!("{x:>6.3} {p0:>12.6} {p1:>12.6} {p2:>12.6}");
    }
    println!();

    for t in [0.0, 0.05, 0.5] {
        println!(
            "fringe weight at t = {t:<4}  {:.9}",
            interference_area(t, &params, &init)?
        );
    }
    Ok(())
}
