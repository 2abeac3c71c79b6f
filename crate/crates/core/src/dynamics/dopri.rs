//! Embedded Dormand-Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights are A7*; these are (b5 - b4)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Counters {
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, calling `on_step` after
/// every accepted step with `(t, y)`.
pub fn integrate<const N: usize, F, S>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    settings: Settings,
    mut on_step: S,
) -> Result<Counters>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: FnMut(f64, &[f64; N]),
{
    let mut counters = Counters::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, t, &y, &k1, settings).min(settings.h_max);

    while t < t_end {
        if counters.accepted + counters.rejected >= settings.max_steps {
            return Err(Error::Numerical {
                reason: format!("step budget of {} exhausted", settings.max_steps),
                t,
                steps: counters.accepted,
                step_size: h,
            });
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new);

        let mut err = 0.0f64;
        for i in 0..N {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = (settings.atol + settings.rtol * y[i].abs().max(y_new[i].abs())).max(f64::MIN_POSITIVE);
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::Numerical {
                reason: "non-finite error estimate".into(),
                t,
                steps: counters.accepted,
                step_size: h,
            });
        }

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            k1 = k7;
            counters.accepted += 1;
            on_step(t, &y);
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h = (h * factor).min(settings.h_max);
        } else {
            counters.rejected += 1;
            h *= (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
        }

        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::Numerical {
                reason: "step size underflow".into(),
                t,
                steps: counters.accepted,
                step_size: h,
            });
        }
    }
    Ok(counters)
}

// Hairer-Wanner starting step heuristic.
fn initial_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], k1: &[f64; N], s: Settings) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let sc = |i: usize, v: &[f64; N]| (s.atol + s.rtol * v[i].abs()).max(f64::MIN_POSITIVE);
    let norm =
        |v: &[f64; N], w: &[f64; N]| (0..N).map(|i| (v[i] / sc(i, w)).powi(2)).sum::<f64>().sqrt() / (N as f64).sqrt();
    let d0 = norm(y, y);
    let d1 = norm(k1, y);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, h0, &[(1.0, k1)]);
    let k2 = f(t + h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| k2[i] - k1[i]);
    let d2 = norm(&diff, y) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    let h = (100.0 * h0).min(h1);
    // pure relative control starting from y = 0 makes the norms degenerate
    if h.is_finite() && h > 0.0 {
        h
    } else {
        h0
    }
}
