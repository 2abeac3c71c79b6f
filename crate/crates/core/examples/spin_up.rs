//! Integrates the torque-limited spin-up from near the unstable equilibrium
//! and compares it with the small-angle and linear-ramp pictures.
//!
//! Writes `spin_up.csv` and `spin_up.svg` to the directory given as the first
//! argument (default: current directory).

use std::fs::File;
use std::path::PathBuf;

use gravrotor::dynamics::{
    fit_t0, integrate_spin_up, omega_at_quarter_turn, quarter_turn_time, small_angle_theta, t0_empirical, SpinUpProblem,
};
use gravrotor::render::render_trajectory_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir)?;
    let problem = SpinUpProblem::new(1.0, 1.0, 1e-6, 30.0)?;
    let mut traj = integrate_spin_up(&problem, 1e-8)?;

    let last = traj.final_sample();
    println!(
        "{} samples, {} accepted / {} rejected steps, energy residual {:.1e}",
        traj.samples.len(),
        traj.stats.accepted_steps,
        traj.stats.rejected_steps,
        traj.stats.max_energy_residual
    );
    println!(
        "final: t = {}, theta = {:.4}, omega = {:.6}",
        last.t, last.theta, last.omega
    );

    for t in [2.0, 6.0, 10.0] {
        println!(
            "t = {t:>4}: theta = {:.6e}  cosh picture {:.6e}",
            traj.theta_at(t),
            small_angle_theta(t, problem.theta0, problem.inertia, problem.tau_max)
        );
    }

    let qt = quarter_turn_time(problem.theta0, problem.inertia, problem.tau_max)?;
    let tq = traj.quarter_turn_time().expect("reaches a quarter turn");
    println!(
        "quarter turn: ode {tq:.4} s, cosh {:.4} s, log {:.4} s",
        qt.exact, qt.approx
    );
    println!(
        "omega at quarter turn: ode {:.4}, linear ramp {:.4}",
        traj.omega_at(tq),
        omega_at_quarter_turn(problem.inertia, problem.tau_max)
    );

    let t0 = fit_t0(&mut traj)?;
    println!(
        "delay: fitted {t0:.4} s, ln(1/theta0) {:.4} s",
        t0_empirical(1.0, 1.0, 1e-6)?
    );

    traj.write_csv(File::create(dir.join("spin_up.csv"))?)?;
    std::fs::write(dir.join("spin_up.svg"), render_trajectory_svg(&traj))?;
    Ok(())
}
