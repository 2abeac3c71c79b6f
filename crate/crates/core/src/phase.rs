//! Gravitational controlled-phase gate between two rotors in mass superposition.
//!
//! Each rotor is in `(|0> + |1>)/sqrt(2)` with masses `M` and `M + dM`. Under
//! `H = -G M1 M2 / r` at fixed separation every branch picks up a phase
//! `G M_i M_j T / (hbar r)`; only the combination
//! `phi00 + phi11 - phi01 - phi10 = G dM^2 T / (hbar r)` is non-local.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::physical::PhysicalConstants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSuperposition {
    /// Mass of the `|0>` branch, kg.
    pub base_mass: f64,
    /// Mass excess of the `|1>` branch, kg. Sign is irrelevant to the phase.
    pub mass_difference: f64,
}

/// `1/2 sum_ij exp(i phi_ij) |ij>` with equal amplitudes.
///
/// Phases are kept unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoQubitPhaseState {
    pub phi00: f64,
    pub phi01: f64,
    pub phi10: f64,
    pub phi11: f64,
}

impl TwoQubitPhaseState {
    pub const AMPLITUDE: f64 = 0.5;

    pub fn phases(&self) -> [f64; 4] {
        [self.phi00, self.phi01, self.phi10, self.phi11]
    }

    /// Always 1: four amplitudes of modulus 1/2.
    pub fn norm(&self) -> f64 {
        (4.0 * Self::AMPLITUDE * Self::AMPLITUDE).sqrt()
    }

    /// `phi00 + phi11 - phi01 - phi10`, invariant under local and global phases.
    pub fn entangling_phase(&self) -> f64 {
        (self.phi00 - self.phi01) + (self.phi11 - self.phi10)
    }

    /// Removes local phases so that only `|11>` carries a phase.
    pub fn canonical(&self) -> Self {
        final_state(self.entangling_phase())
    }

    /// Applies `exp(i a)` on qubit 1's `|1>` and `exp(i b)` on qubit 2's `|1>`,
    /// plus a global phase `g`.
    pub fn with_local_phases(&self, a: f64, b: f64, g: f64) -> Self {
        TwoQubitPhaseState {
            phi00: self.phi00 + g,
            phi01: self.phi01 + b + g,
            phi10: self.phi10 + a + g,
            phi11: self.phi11 + a + b + g,
        }
    }

    /// Complex amplitudes `(re, im)` in the order `|00>, |01>, |10>, |11>`.
    pub fn amplitudes(&self) -> [(f64, f64); 4] {
        self.phases()
            .map(|p| (Self::AMPLITUDE * p.cos(), Self::AMPLITUDE * p.sin()))
    }

    /// Wootters concurrence `2 |a00 a11 - a01 a10|` of the pure state itself.
    ///
    /// For the canonical family this evaluates to `|sin(phi / 2)|`, which is
    /// not the `|sin 2 phi|` returned by [`concurrence`]; both vanish only at
    /// `phi = 0 (mod 2 pi)` and agree to first order up to a factor of 4.
    pub fn pure_state_concurrence(&self) -> f64 {
        let [a, b, c, d] = self.amplitudes();
        let mul = |x: (f64, f64), y: (f64, f64)| (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0);
        let ad = mul(a, d);
        let bc = mul(b, c);
        2.0 * (ad.0 - bc.0).hypot(ad.1 - bc.1)
    }
}

fn check_separation(r: f64) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("separation must be positive, got {r}")));
    }
    Ok(())
}

fn coupling(k: &PhysicalConstants, t: f64, r: f64) -> Result<f64> {
    check_separation(r)?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("interaction time must be non-negative, got {t}")));
    }
    Ok(k.g * t / (k.hbar * r))
}

/// Branch phases accumulated over time `t` at separation `r`.
pub fn branch_phases(k: &PhysicalConstants, ms: MassSuperposition, t: f64, r: f64) -> Result<TwoQubitPhaseState> {
    let kappa = coupling(k, t, r)?;
    let m0 = ms.base_mass;
    let m1 = ms.base_mass + ms.mass_difference;
    Ok(TwoQubitPhaseState {
        phi00: kappa * m0 * m0,
        phi01: kappa * m0 * m1,
        phi10: kappa * m1 * m0,
        phi11: kappa * m1 * m1,
    })
}

/// `G dM^2 T / (hbar r)`.
pub fn entangling_phase_from_mass(k: &PhysicalConstants, dm: f64, t: f64, r: f64) -> Result<f64> {
    Ok(coupling(k, t, r)? * dm * dm)
}

/// `G E^2 T / (hbar c^4 r)`, the same phase with `dM = E / c^2`.
pub fn entangling_phase_from_energy(k: &PhysicalConstants, energy: f64, t: f64, r: f64) -> Result<f64> {
    entangling_phase_from_mass(k, mass_equivalent(k, energy), t, r)
}

pub fn rotational_energy(inertia: f64, omega: f64) -> f64 {
    0.5 * inertia * omega * omega
}

pub fn mass_equivalent(k: &PhysicalConstants, energy: f64) -> f64 {
    energy / (k.c * k.c)
}

pub fn final_state(phi: f64) -> TwoQubitPhaseState {
    TwoQubitPhaseState {
        phi00: 0.0,
        phi01: 0.0,
        phi10: 0.0,
        phi11: phi,
    }
}

/// `|sin 2 phi|`.
pub fn concurrence(phi: f64) -> f64 {
    // reduce first so that huge unwrapped phases keep their precision
    let reduced = phi.rem_euclid(FRAC_PI_2);
    (2.0 * reduced).sin().abs().min(1.0)
}

/// Repetitions needed to resolve `phi` against shot noise, `ceil(1 / phi^2)`.
pub fn repetitions_required(phi: f64) -> Result<u64> {
    if phi == 0.0 || !phi.is_finite() {
        return Err(Error::Divergence(format!("phase {phi} cannot be resolved")));
    }
    // snap away the few ulps of rounding in 1/phi^2 before taking the ceiling
    let n = (1.0 / (phi * phi) * (1.0 - 4.0 * f64::EPSILON)).ceil();
    if n >= u64::MAX as f64 {
        return Err(Error::Divergence(format!(
            "phase {phi} needs more than 2^64 repetitions"
        )));
    }
    Ok(n as u64)
}
