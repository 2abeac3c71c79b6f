//! Least-squares extraction of the delay `t0` from a sampled ramp.
//!
//! The model is the piecewise ramp `max(0, s (t - t0))` with `s` fixed, so the
//! cost is piecewise quadratic in `t0` and the global minimum is found exactly
//! by visiting each inter-sample interval once. Samples are weighted by the
//! trapezoid rule so the result does not depend on solver step density.

use crate::error::{Error, Result};

use super::{Sample, SpinUpTrajectory};

/// Fits `t0` with the slope `(2/pi) tau_max / I` over the part of the ramp
/// after the first quarter turn, and stores it in `traj.t0_fit`.
pub fn fit_t0(traj: &mut SpinUpTrajectory) -> Result<f64> {
    let slope = traj.problem.linear_slope();
    let t0 = fit_t0_with_slope(traj, slope)?;
    traj.t0_fit = Some(t0);
    Ok(t0)
}

/// Same as [`fit_t0`] with an explicit slope; does not touch the trajectory.
pub fn fit_t0_with_slope(traj: &SpinUpTrajectory, slope: f64) -> Result<f64> {
    if !(slope > 0.0 && slope.is_finite()) {
        return Err(Error::Fit(format!("slope must be positive, got {slope}")));
    }
    check_linear_tail(traj)?;
    let start = traj
        .quarter_turn_time()
        .ok_or_else(|| Error::Fit("rotor never completes a quarter turn".into()))?;
    let window: Vec<Sample> = traj.samples.iter().copied().filter(|s| s.t >= start).collect();
    if window.len() < 2 {
        return Err(Error::Fit(format!(
            "only {} samples after the quarter turn",
            window.len()
        )));
    }
    Ok(piecewise_fit(&window, slope))
}

fn check_linear_tail(traj: &SpinUpTrajectory) -> Result<()> {
    let first = traj.samples[0].t;
    let last = traj.final_sample().t;
    let quarter = traj.omega_at(first + 0.25 * (last - first));
    let peak = traj.samples.iter().fold(0.0f64, |m, s| m.max(s.omega));
    if !(peak > 3.0 * quarter) {
        return Err(Error::Fit(format!(
            "no linear tail: peak omega {peak:e} is not above 3x omega at 25% of the run ({quarter:e})"
        )));
    }
    Ok(())
}

fn trapezoid_weights(samples: &[Sample]) -> Vec<f64> {
    let n = samples.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { samples[i].t - samples[i - 1].t } else { 0.0 };
            let right = if i + 1 < n {
                samples[i + 1].t - samples[i].t
            } else {
                0.0
            };
            0.5 * (left + right)
        })
        .collect()
}

/// Minimises `sum w_i (omega_i - slope * max(0, t_i - t0))^2` over `t0`.
fn piecewise_fit(samples: &[Sample], slope: f64) -> f64 {
    let n = samples.len();
    let w = trapezoid_weights(samples);
    // with t0 below sample i the residual is slope * (a_i - t0)
    let a: Vec<f64> = samples.iter().map(|s| s.t - s.omega / slope).collect();

    // suffix sums over the samples on the ramp
    let mut sw = vec![0.0; n + 1];
    let mut sa = vec![0.0; n + 1];
    let mut saa = vec![0.0; n + 1];
    for i in (0..n).rev() {
        sw[i] = sw[i + 1] + w[i];
        sa[i] = sa[i + 1] + w[i] * a[i];
        saa[i] = saa[i + 1] + w[i] * a[i] * a[i];
    }

    let mut flat = 0.0; // sum of w omega^2 for samples before t0
    let mut best = (f64::INFINITY, samples[0].t);
    for k in 0..n {
        if sw[k] > 0.0 {
            let lo = if k == 0 { f64::NEG_INFINITY } else { samples[k - 1].t };
            let hi = samples[k].t;
            let c = (sa[k] / sw[k]).clamp(lo, hi);
            let ramp = slope * slope * (saa[k] - 2.0 * c * sa[k] + c * c * sw[k]);
            let cost = flat + ramp.max(0.0);
            if cost < best.0 {
                best = (cost, c);
            }
        }
        flat += w[k] * samples[k].omega * samples[k].omega;
    }
    best.1
}
