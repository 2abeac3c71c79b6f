//! Spin-up of the `|1>` branch under the alternating magnetic field.
//!
//! The field is flipped every half turn so the torque on the moment never
//! reverses: `I theta'' = tau_max |sin theta|`, starting from rest at the
//! angle `theta0` left over from the superposition step. The `|0>` branch
//! is aligned with the field and stays put.

mod dopri;
mod fit;

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2, PI};
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fit::{fit_t0, fit_t0_with_slope};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinUpProblem {
    /// Moment of inertia, kg m².
    pub inertia: f64,
    /// Peak torque `m B`, N m. Zero is accepted and gives a rotor at rest.
    pub tau_max: f64,
    /// Initial angle between moment and field, rad.
    pub theta0: f64,
    /// Length of the ramp, s.
    pub duration: f64,
}

impl SpinUpProblem {
    pub fn new(inertia: f64, tau_max: f64, theta0: f64, duration: f64) -> Result<Self> {
        if !(inertia > 0.0 && inertia.is_finite()) {
            return Err(Error::domain(format!("inertia must be positive, got {inertia}")));
        }
        if !(tau_max >= 0.0 && tau_max.is_finite()) {
            return Err(Error::domain(format!("tau_max must be non-negative, got {tau_max}")));
        }
        if !(theta0 > 0.0 && theta0 <= FRAC_PI_2) {
            return Err(Error::domain(format!("theta0 must lie in (0, pi/2], got {theta0}")));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::domain(format!("duration must be positive, got {duration}")));
        }
        Ok(SpinUpProblem {
            inertia,
            tau_max,
            theta0,
            duration,
        })
    }

    /// Angular acceleration at full torque, `tau_max / I`.
    pub fn rate(&self) -> f64 {
        self.tau_max / self.inertia
    }

    /// Slope of the linear regime, `(2/pi) tau_max / I`.
    pub fn linear_slope(&self) -> f64 {
        FRAC_2_PI * self.rate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub theta: f64,
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverStats {
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// Largest `|KE - W| / KE` over the samples with `omega > 0`.
    pub max_energy_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpinUpTrajectory {
    pub problem: SpinUpProblem,
    pub samples: Vec<Sample>,
    pub t0_fit: Option<f64>,
    pub stats: SolverStats,
}

/// Largest step the solver may take regardless of tolerance.
const MIN_SAMPLES: f64 = 512.0;
const MAX_STEPS: usize = 20_000_000;
/// Local error target relative to the requested tolerance.
const LOCAL_TOL_FRACTION: f64 = 1e-3;

/// `integral_0^theta |sin x| dx`, exact for any `theta >= 0`.
fn sin_work(theta: f64) -> f64 {
    let turns = (theta / PI).floor();
    2.0 * turns + 1.0 - (theta - turns * PI).cos()
}

/// `integral_{theta0}^{theta0 + du} |sin x| dx` without cancellation for
/// small `du` inside the first half turn.
fn work_integral(theta0: f64, du: f64) -> f64 {
    let theta = theta0 + du;
    if theta <= PI {
        2.0 * (theta0 + 0.5 * du).sin() * (0.5 * du).sin()
    } else {
        sin_work(theta) - sin_work(theta0)
    }
}

/// Integrates the spin-up from rest. `tol` bounds the relative error in `omega`
/// and the spacing of the returned samples.
pub fn integrate_spin_up(problem: &SpinUpProblem, tol: f64) -> Result<SpinUpTrajectory> {
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::domain(format!("tolerance must lie in (0, 1e-2], got {tol}")));
    }
    let rate = problem.rate();
    let theta0 = problem.theta0;

    // omega'' ~ rate * omega, so linear interpolation error is h^2 rate / 8 relative
    let h_interp = if rate > 0.0 {
        (8.0 * tol / rate).sqrt()
    } else {
        f64::INFINITY
    };
    let settings = dopri::Settings {
        rtol: tol * LOCAL_TOL_FRACTION,
        atol: 0.0,
        h_max: h_interp.min(problem.duration / MIN_SAMPLES),
        max_steps: MAX_STEPS,
    };

    // state is (theta - theta0, omega) so that the early exponential growth
    // is resolved relative to the displacement rather than to theta0
    let rhs = |_t: f64, y: &[f64; 2]| [y[1], rate * (theta0 + y[0]).sin().abs()];

    let mut samples = vec![Sample {
        t: 0.0,
        theta: theta0,
        omega: 0.0,
    }];
    let mut max_residual = 0.0f64;
    let counters = dopri::integrate(rhs, 0.0, [0.0, 0.0], problem.duration, settings, |t, y| {
        let kinetic = 0.5 * y[1] * y[1];
        if kinetic > 0.0 {
            let work = rate * work_integral(theta0, y[0]);
            max_residual = max_residual.max((kinetic - work).abs() / kinetic);
        }
        samples.push(Sample {
            t,
            theta: theta0 + y[0],
            omega: y[1],
        });
    })?;

    Ok(SpinUpTrajectory {
        problem: *problem,
        samples,
        t0_fit: None,
        stats: SolverStats {
            accepted_steps: counters.accepted,
            rejected_steps: counters.rejected,
            max_energy_residual: max_residual,
        },
    })
}

impl SpinUpTrajectory {
    pub fn final_sample(&self) -> Sample {
        *self.samples.last().expect("trajectory always holds the initial sample")
    }

    fn bracket(&self, t: f64) -> (Sample, Sample) {
        let idx = self.samples.partition_point(|s| s.t < t);
        let hi = idx.clamp(1, self.samples.len() - 1);
        (self.samples[hi - 1], self.samples[hi])
    }

    /// Linearly interpolated angular velocity, clamped to the sampled range.
    pub fn omega_at(&self, t: f64) -> f64 {
        if self.samples.len() == 1 {
            return self.samples[0].omega;
        }
        let (a, b) = self.bracket(t);
        let t = t.clamp(self.samples[0].t, self.final_sample().t);
        let s = (t - a.t) / (b.t - a.t);
        a.omega + s * (b.omega - a.omega)
    }

    /// Cubic Hermite interpolation of the angle using `omega` as its slope.
    pub fn theta_at(&self, t: f64) -> f64 {
        if self.samples.len() == 1 {
            return self.samples[0].theta;
        }
        let (a, b) = self.bracket(t);
        hermite(a, b, t.clamp(self.samples[0].t, self.final_sample().t))
    }

    /// First time the rotor reaches `theta = pi/2`, if it does.
    pub fn quarter_turn_time(&self) -> Option<f64> {
        self.time_at_angle(FRAC_PI_2)
    }

    pub fn time_at_angle(&self, target: f64) -> Option<f64> {
        if self.samples[0].theta >= target {
            return Some(self.samples[0].t);
        }
        let i = self.samples.iter().position(|s| s.theta >= target)?;
        let (a, b) = (self.samples[i - 1], self.samples[i]);
        // theta is monotone on the bracket; bisect the Hermite cubic
        let (mut lo, mut hi) = (a.t, b.t);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if hermite(a, b, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Step (5): the ramp-down is the ramp-up played backwards.
    pub fn ramp_down(&self) -> Vec<Sample> {
        let end = self.final_sample().t;
        self.samples
            .iter()
            .rev()
            .map(|s| Sample { t: end - s.t, ..*s })
            .collect()
    }

    /// Writes `t,theta,omega` rows, one per accepted solver sample.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "t,theta,omega")?;
        for s in &self.samples {
            writeln!(w, "{:e},{:e},{:e}", s.t, s.theta, s.omega)?;
        }
        Ok(())
    }
}

fn hermite(a: Sample, b: Sample, t: f64) -> f64 {
    let h = b.t - a.t;
    let s = (t - a.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * a.theta
        + (s3 - 2.0 * s2 + s) * h * a.omega
        + (-2.0 * s3 + 3.0 * s2) * b.theta
        + (s3 - s2) * h * b.omega
}

/// Delay before the linear ramp: `sqrt(I/tau_max) ln(1/theta0)`.
pub fn t0_empirical(inertia: f64, tau_max: f64, theta0: f64) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < 1.0) && theta0 != 1.0 {
        return Err(Error::domain(format!(
            "delay formula needs 0 < theta0 < 1, got {theta0}"
        )));
    }
    if theta0 == 1.0 {
        return Ok(0.0);
    }
    Ok((inertia / tau_max).sqrt() * (1.0 / theta0).ln())
}

/// Piecewise-linear ramp: zero until `t0`, then slope `(2/pi) tau_max / I`.
pub fn omega_empirical(t: f64, inertia: f64, tau_max: f64, t0: f64) -> f64 {
    if t < t0 {
        0.0
    } else {
        FRAC_2_PI * tau_max / inertia * (t - t0)
    }
}

/// Linearised solution `theta0 cosh(sqrt(tau_max/I) t)`, valid while `theta << 1`.
pub fn small_angle_theta(t: f64, theta0: f64, inertia: f64, tau_max: f64) -> f64 {
    theta0 * ((tau_max / inertia).sqrt() * t).cosh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterTurn {
    /// `sqrt(I/tau) arccosh(pi / (2 theta0))`
    pub exact: f64,
    /// `sqrt(I/tau) ln(pi / theta0)`
    pub approx: f64,
}

/// Time for the linearised motion to reach `pi/2`.
pub fn quarter_turn_time(theta0: f64, inertia: f64, tau_max: f64) -> Result<QuarterTurn> {
    if !(theta0 > 0.0) {
        return Err(Error::domain(format!("theta0 must be positive, got {theta0}")));
    }
    if theta0 >= FRAC_PI_2 {
        return Ok(QuarterTurn {
            exact: 0.0,
            approx: 0.0,
        });
    }
    let scale = (inertia / tau_max).sqrt();
    Ok(QuarterTurn {
        exact: scale * (FRAC_PI_2 / theta0).acosh(),
        approx: scale * (PI / theta0).ln(),
    })
}

/// Small-angle estimate of the speed at the quarter turn, `(pi/2) sqrt(tau/I)`.
pub fn omega_at_quarter_turn(inertia: f64, tau_max: f64) -> f64 {
    FRAC_PI_2 * (tau_max / inertia).sqrt()
}

/// Speed at `theta = pi/2` under the full `|sin|` torque, from energy
/// conservation: `sqrt(2 (tau/I) cos theta0)`.
pub fn omega_at_quarter_turn_exact(inertia: f64, tau_max: f64, theta0: f64) -> f64 {
    (2.0 * tau_max / inertia * theta0.cos()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn work_integral_matches_closed_form() {
        assert_relative_eq!(sin_work(PI), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sin_work(2.5 * PI), 5.0, max_relative = 1e-15);
        assert_relative_eq!(
            work_integral(0.3, 2.0),
            (0.3f64).cos() - (2.3f64).cos(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            work_integral(0.3, 7.0),
            sin_work(7.3) - sin_work(0.3),
            max_relative = 1e-13
        );
        // small-displacement branch: theta0 du for tiny du
        assert_relative_eq!(work_integral(1e-8, 1e-12), 1e-8 * 1e-12, max_relative = 1e-3);
    }

    #[test]
    fn problem_validation() {
        assert!(SpinUpProblem::new(0.0, 1.0, 0.1, 1.0).is_err());
        assert!(SpinUpProblem::new(1.0, -1.0, 0.1, 1.0).is_err());
        assert!(SpinUpProblem::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SpinUpProblem::new(1.0, 1.0, 2.0, 1.0).is_err());
        assert!(SpinUpProblem::new(1.0, 1.0, 0.1, 0.0).is_err());
        assert!(SpinUpProblem::new(1.0, 0.0, 0.1, 1.0).is_ok());
    }

    #[test]
    fn tolerance_range() {
        let p = SpinUpProblem::new(1.0, 1.0, 0.1, 1.0).unwrap();
        assert!(integrate_spin_up(&p, 0.0).is_err());
        assert!(integrate_spin_up(&p, 0.1).is_err());
        integrate_spin_up(&p, 1e-2).unwrap();
    }

    #[test]
    fn no_torque_means_no_motion() {
        let p = SpinUpProblem::new(1.0, 0.0, 1e-3, 10.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-6).unwrap();
        assert!(traj.samples.len() > 2);
        for s in &traj.samples {
            assert_eq!(s.theta, 1e-3);
            assert_eq!(s.omega, 0.0);
        }
    }

    #[test]
    fn samples_are_monotone() {
        let p = SpinUpProblem::new(1.0, 1.0, 1e-6, 30.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-6).unwrap();
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
            assert!(w[1].theta >= w[0].theta);
            assert!(w[1].omega >= w[0].omega);
            assert!(w[0].omega >= 0.0);
        }
        assert_eq!(traj.final_sample().t, 30.0);
        assert!(traj.stats.max_energy_residual <= 1e-6);
    }

    #[test]
    fn right_angle_start_ramps_linearly() {
        let p = SpinUpProblem::new(1.0, 1.0, FRAC_PI_2, 60.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-7).unwrap();
        // average torque over a half turn is (2/pi) tau_max
        let w = traj.final_sample().omega;
        assert_relative_eq!(w, FRAC_2_PI * 60.0, max_relative = 0.05);
        let mut t = traj;
        let t0 = fit_t0(&mut t).unwrap();
        assert!(t0.abs() < 0.1 * 60.0, "t0 = {t0}");
    }

    #[test]
    fn interpolation_is_accurate_between_samples() {
        let tol = 1e-6;
        let p = SpinUpProblem::new(1.0, 1.0, 1e-3, 20.0).unwrap();
        let traj = integrate_spin_up(&p, tol).unwrap();
        let fine = integrate_spin_up(&p, 1e-9).unwrap();
        for w in traj.samples.windows(2).skip(10) {
            let mid = 0.5 * (w[0].t + w[1].t);
            let reference = fine.omega_at(mid);
            if reference > 1e-3 {
                assert!((traj.omega_at(mid) - reference).abs() <= 2.0 * tol * reference);
            }
        }
    }

    #[test]
    fn quarter_turn_from_trajectory() {
        let p = SpinUpProblem::new(1.0, 1.0, 1e-6, 30.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-7).unwrap();
        let tq = traj.quarter_turn_time().unwrap();
        assert_relative_eq!(traj.theta_at(tq), FRAC_PI_2, max_relative = 1e-9);
        // energy conservation fixes the speed there
        assert_relative_eq!(
            traj.omega_at(tq),
            omega_at_quarter_turn_exact(1.0, 1.0, 1e-6),
            max_relative = 1e-5
        );
        // sin x < x, so the true motion lags the linearised one
        let q = quarter_turn_time(1e-6, 1.0, 1.0).unwrap();
        assert!(tq > q.exact);
    }

    #[test]
    fn ramp_down_reverses() {
        let p = SpinUpProblem::new(1.0, 1.0, 0.5, 5.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-5).unwrap();
        let down = traj.ramp_down();
        assert_eq!(down[0].t, 0.0);
        assert_eq!(down[0].omega, traj.final_sample().omega);
        assert_eq!(down.last().unwrap().omega, 0.0);
        assert!(down.windows(2).all(|w| w[1].t > w[0].t && w[1].omega <= w[0].omega));
    }

    #[test]
    fn csv_header_and_rows() {
        let p = SpinUpProblem::new(1.0, 1.0, 0.5, 1.0).unwrap();
        let traj = integrate_spin_up(&p, 1e-4).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,theta,omega"));
        assert_eq!(lines.count(), traj.samples.len());
    }

    #[test]
    fn t0_formula() {
        assert_relative_eq!(
            t0_empirical(1.0, 1.0, 1e-6).unwrap(),
            13.815_510_557_964_274,
            max_relative = 1e-14
        );
        assert_eq!(t0_empirical(1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(t0_empirical(1.0, 1.0, 1.5).is_err());
        assert!(t0_empirical(1.0, 1.0, 0.0).is_err());
        assert_relative_eq!(
            t0_empirical(2.926, 3.59e-2, 5.70e-12).unwrap(),
            233.7,
            max_relative = 1e-3
        );
    }

    #[test]
    fn piecewise_ramp() {
        let t0 = 13.816;
        assert_eq!(omega_empirical(t0, 1.0, 1.0, t0), 0.0);
        assert_eq!(omega_empirical(5.0, 1.0, 1.0, t0), 0.0);
        assert_relative_eq!(
            omega_empirical(30.0, 1.0, 1.0, t0),
            FRAC_2_PI * 16.184,
            max_relative = 1e-14
        );
        assert_relative_eq!(omega_empirical(30.0, 1.0, 1.0, t0), 10.30, max_relative = 1e-3);
    }

    #[test]
    fn cosh_solution() {
        assert_eq!(small_angle_theta(0.0, 1e-6, 1.0, 1.0), 1e-6);
        assert_relative_eq!(
            small_angle_theta(10.0, 1e-6, 1.0, 1.0),
            1.101_323_292_010_332_5e-2,
            max_relative = 1e-12
        );
        let h = 1e-6;
        let d = (small_angle_theta(h, 1e-3, 2.0, 3.0) - small_angle_theta(-h, 1e-3, 2.0, 3.0)) / (2.0 * h);
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn quarter_turn_formulas() {
        let q = quarter_turn_time(1e-6, 1.0, 1.0).unwrap();
        assert_relative_eq!(q.exact, 14.960_240_443_813_573, max_relative = 1e-12);
        assert_relative_eq!(q.approx, 14.960_240_443_813_674, max_relative = 1e-12);
        let z = quarter_turn_time(FRAC_PI_2, 1.0, 1.0).unwrap();
        assert_eq!((z.exact, z.approx), (0.0, 0.0));
        // arccosh(x) = ln(2x) - 1/(4x^2) + ..., and 2x = pi/theta0
        let q = quarter_turn_time(0.1, 4.0, 1.0).unwrap();
        let x = FRAC_PI_2 / 0.1;
        assert_relative_eq!(q.approx - q.exact, 2.0 / (4.0 * x * x), max_relative = 0.05);
    }

    #[test]
    fn quarter_turn_speed() {
        assert_relative_eq!(omega_at_quarter_turn(1.0, 1.0), FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(omega_at_quarter_turn(1.0, 4.0), 2.0 * FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(omega_at_quarter_turn(2.926, 3.59e-2), 0.1740, max_relative = 1e-3);
    }
}
