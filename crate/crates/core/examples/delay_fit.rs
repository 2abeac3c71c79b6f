//! Fits the spin-up delay for initial angles spanning seven decades.

use gravrotor::dynamics::{fit_t0, integrate_spin_up, t0_empirical, SpinUpProblem};

fn main() -> gravrotor::Result<()> {
    println!("{:>8} {:>10} {:>10} {:>8}", "theta0", "t0 fit", "ln(1/th)", "rel");
    for e in (3..=10).rev() {
        let theta0 = 10f64.powi(-e);
        let duration = (std::f64::consts::PI / theta0).ln() + 16.0;
        let mut traj = integrate_spin_up(&SpinUpProblem::new(1.0, 1.0, theta0, duration)?, 1e-7)?;
        let fit = fit_t0(&mut traj)?;
        let formula = t0_empirical(1.0, 1.0, theta0)?;
        println!(
            "{theta0:>8.0e} {fit:>10.4} {formula:>10.4} {:>+8.3}",
            fit / formula - 1.0
        );
    }
    Ok(())
}
