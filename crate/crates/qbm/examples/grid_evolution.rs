//! Direct grid integration of the phase-space transport equation, checked
//! against the closed-form mean and covariance at every snapshot.

use qbm::gaussian::{initial_squeezed_state, mean_trajectory, second_moments, GaussianInit, Prep};
use qbm::model::SimParams;
use qbm::oracle::{fokker_planck_integrate, PhaseSpaceGrid};

fn main() -> qbm::Result<()> {
    let params = SimParams::new(1.0, 1.0, 5.0, 1.0)?;
    let init = GaussianInit::new(1.0, 0.5, Prep::ZeroTemp)?;

    let grid = PhaseSpaceGrid::from_fn(-6.0, 8.0, -14.0, 14.0, 112, 128, |q, p| {
        initial_squeezed_state(q, p, &params, &init)
    })?;
    println!(
        "grid {}x{} over [{}, {}] x [{}, {}], initial mass {:.9}",
        grid.nq,
        grid.np,
        grid.q_min,
        grid.q_max,
        grid.p_min,
        grid.p_max,
        grid.integral()
    );

    let traj = fokker_planck_integrate(&grid, &params, 0.3, 0.0)?;
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>11}",
        "t", "<q>", "<q> ref", "var q", "var q ref", "var p", "var p ref"
    );
    for (t, frame) in traj.times.iter().zip(&traj.frames) {
        let m = frame.moments()?;
        let (mean_q, _) = mean_trajectory(*t, &params, init.x0)?;
        let mom = second_moments(*t, &params, &init)?;
        println!(
            "{t:>6.3} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>10.6} {:>11.6}",
            m.mean_q, mean_q, m.var_q, mom.a11, m.var_p, mom.a22
        );
    }

    let last = traj.frames.last().unwrap();
    println!();
    println!(
        "mass drift {:.3e}, most negative cell {:.3e} of peak {:.3e}",
        (last.integral() - grid.integral()).abs(),
        last.min_value(),
        last.max_value()
    );
    Ok(())
}
