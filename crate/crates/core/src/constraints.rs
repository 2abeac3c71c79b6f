//! The three operational requirements at one `(R, omega_max)` point.
//!
//! 1. the entangling phase accumulated over the ramps and the hold exceeds
//!    `phi_min`;
//! 2. the rim speed `omega_max R` stays below the speed of sound;
//! 3. the rotor can be spun up to `omega_max` within `T3` with a magnetic
//!    moment small enough that fewer than one photon is radiated.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::t0_empirical;
use crate::error::{Error, Result};
use crate::physical::{PhysicalConstants, ProtocolParams, RotorGeometry};

/// Phase-weighted duration of up-ramp, hold and down-ramp: `2 T3 / 5 + T4`.
///
/// A linear ramp of length `T3` contributes `integral (t/T3)^4 dt = T3 / 5`.
pub fn effective_phase_time(t3: f64, t4: f64) -> f64 {
    2.0 * t3 / 5.0 + t4
}

/// `(G / 4 hbar c^4) (I^2 omega_max^4 / r) (2 T3 / 5 + T4)`.
pub fn protocol_phase(k: &PhysicalConstants, inertia: f64, omega_max: f64, r: f64, t3: f64, t4: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("separation must be positive, got {r}")));
    }
    let w2 = omega_max * omega_max;
    Ok(k.g / (4.0 * k.hbar * k.c.powi(4)) * inertia * inertia * w2 * w2 / r * effective_phase_time(t3, t4))
}

/// Highest angular velocity before the rim reaches the speed of sound.
pub fn centrifugal_limit(radius: f64, sound_speed: f64) -> f64 {
    sound_speed / radius
}

/// Half-separation angle reached by the electric torque `p E` in time `T2`,
/// capped at `pi/4` (branches a right angle apart).
pub fn superposition_angle(inertia: f64, params: &ProtocolParams) -> f64 {
    let torque = params.dipole * params.e_field;
    (torque * params.t2 * params.t2 / (2.0 * inertia)).min(FRAC_PI_4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationBudget {
    /// Radiated power at `omega_max`, W.
    pub power: f64,
    /// Photon emission rate at `omega_max`, s⁻¹.
    pub photon_rate: f64,
    /// Expected photon number over ramp up, hold and ramp down.
    pub expected_photons: f64,
}

impl RadiationBudget {
    /// Coherence survives only if strictly fewer than one photon is expected.
    pub fn is_dark(&self) -> bool {
        self.expected_photons < 1.0
    }
}

/// `6 pi eps0 c^5`, the magnetic-dipole radiation denominator.
fn dipole_radiation_scale(k: &PhysicalConstants) -> f64 {
    6.0 * PI * k.eps0 * k.c.powi(5)
}

/// Photon-weighted duration: each linear ramp gives `T3 / 6` (rate ∝ omega³).
fn effective_photon_time(t3: f64, t4: f64) -> f64 {
    t3 / 3.0 + t4
}

/// Radiation of a magnetic moment `m` rotating at `omega_max`.
pub fn radiation_budget(k: &PhysicalConstants, omega_max: f64, m: f64, t3: f64, t4: f64) -> RadiationBudget {
    let scale = dipole_radiation_scale(k);
    let w3 = omega_max.powi(3);
    let photon_rate = w3 * m * m / (scale * k.hbar);
    RadiationBudget {
        power: w3 * omega_max * m * m / scale,
        photon_rate,
        expected_photons: photon_rate * effective_photon_time(t3, t4),
    }
}

/// Moment at which one photon is expected, the supremum of radiation-free moments.
pub fn photon_limited_moment(k: &PhysicalConstants, omega_max: f64, t3: f64, t4: f64) -> f64 {
    let denom = omega_max.powi(3) * effective_photon_time(t3, t4);
    if denom == 0.0 {
        return f64::INFINITY;
    }
    (dipole_radiation_scale(k) * k.hbar / denom).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentLimit {
    /// Remanence times volume.
    Volume,
    /// Photon emission.
    Radiation,
}

/// Largest usable magnetic moment: the smaller of the two caps.
pub fn moment_budget(k: &PhysicalConstants, geom: &RotorGeometry, omega_max: f64, t3: f64, t4: f64) -> f64 {
    geom.remanent_moment(k).min(photon_limited_moment(k, omega_max, t3, t4))
}

pub fn moment_limit(k: &PhysicalConstants, geom: &RotorGeometry, omega_max: f64, t3: f64, t4: f64) -> MomentLimit {
    if geom.remanent_moment(k) <= photon_limited_moment(k, omega_max, t3, t4) {
        MomentLimit::Volume
    } else {
        MomentLimit::Radiation
    }
}

/// Angular velocity at which the two moment caps coincide.
pub fn moment_crossover_omega(k: &PhysicalConstants, geom: &RotorGeometry, t3: f64, t4: f64) -> f64 {
    let m = geom.remanent_moment(k);
    (dipole_radiation_scale(k) * k.hbar / (m * m * effective_photon_time(t3, t4))).cbrt()
}

/// Intermediate quantities of the spin-up check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinUpCapability {
    pub omega_achievable: f64,
    pub t0: f64,
    pub theta0: f64,
    pub moment: f64,
    pub tau_max: f64,
}

impl SpinUpCapability {
    /// Time to reach `omega_target` after the delay, at the relaxed requirement.
    fn time_needed(&self, inertia: f64, omega_target: f64, relax: f64) -> f64 {
        let slope = FRAC_2_PI * self.tau_max / inertia;
        self.t0 + omega_target / (relax * slope)
    }
}

/// Angular velocity reached at the end of `T3`, including the delay `t0`
/// caused by starting at a small angle.
pub fn achievable_omega(
    k: &PhysicalConstants,
    geom: &RotorGeometry,
    params: &ProtocolParams,
    omega_target: f64,
) -> Result<SpinUpCapability> {
    let inertia = geom.moment_of_inertia();
    let moment = moment_budget(k, geom, omega_target, params.t3, params.t4);
    let tau_max = moment * params.b_field;
    let theta0 = superposition_angle(inertia, params);
    let t0 = t0_empirical(inertia, tau_max, theta0)?;
    let omega_achievable = (FRAC_2_PI * tau_max / inertia * (params.t3 - t0)).max(0.0);
    Ok(SpinUpCapability {
        omega_achievable,
        t0,
        theta0,
        moment,
        tau_max,
    })
}

/// Result of checking one parameter point. Serialises to the flat JSON
/// object used by the `point` command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub phi: f64,
    pub phi_ok: bool,
    pub centrifugal_ok: bool,
    pub spin_up_ok: bool,
    /// `log10(phi / phi_min)`
    pub margin_phi: f64,
    /// `log10(v_s / (omega_max R))`
    pub margin_centrifugal: f64,
    /// `log10(T3 / t_needed)` with `t_needed = t0 + omega_max / slope`
    pub margin_spinup: f64,
    pub m: f64,
    pub theta0: f64,
    pub t0: f64,
    pub omega_achievable: f64,
}

impl ConstraintReport {
    pub fn all_ok(&self) -> bool {
        self.phi_ok && self.centrifugal_ok && self.spin_up_ok
    }
}

pub fn evaluate_point(
    k: &PhysicalConstants,
    geom: &RotorGeometry,
    omega_max: f64,
    params: &ProtocolParams,
) -> Result<ConstraintReport> {
    evaluate_point_relaxed(k, geom, omega_max, params, 1.0)
}

/// Like [`evaluate_point`], but spin-up only has to reach `omega_max / relax`.
pub fn evaluate_point_relaxed(
    k: &PhysicalConstants,
    geom: &RotorGeometry,
    omega_max: f64,
    params: &ProtocolParams,
    relax: f64,
) -> Result<ConstraintReport> {
    if !(omega_max > 0.0 && omega_max.is_finite()) {
        return Err(Error::domain(format!("omega_max must be positive, got {omega_max}")));
    }
    if !(relax > 0.0 && relax.is_finite()) {
        return Err(Error::domain(format!(
            "relaxation factor must be positive, got {relax}"
        )));
    }
    params.validate()?;

    let inertia = geom.moment_of_inertia();
    let r = geom.center_separation(params.r_min);
    let phi = protocol_phase(k, inertia, omega_max, r, params.t3, params.t4)?;

    let radius = geom.radius();
    let limit = centrifugal_limit(radius, geom.material.sound_speed);

    let spin = achievable_omega(k, geom, params, omega_max)?;
    let spin_up_ok = spin.omega_achievable >= omega_max / relax && spin.t0 < params.t3;

    Ok(ConstraintReport {
        phi,
        phi_ok: phi > params.phi_min,
        centrifugal_ok: omega_max * radius < geom.material.sound_speed,
        spin_up_ok,
        margin_phi: (phi / params.phi_min).log10(),
        margin_centrifugal: (limit / omega_max).log10(),
        margin_spinup: (params.t3 / spin.time_needed(inertia, omega_max, relax)).log10(),
        m: spin.moment,
        theta0: spin.theta0,
        t0: spin.t0,
        omega_achievable: spin.omega_achievable,
    })
}
