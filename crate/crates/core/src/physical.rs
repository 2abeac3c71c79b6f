//! Physical constants, materials and rotor geometry.
//!
//! All quantities are SI. Geometry is treated as a point mass for the
//! gravitational interaction; only mass, volume, moment of inertia and the
//! centre-to-centre separation are derived from the shape.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fundamental constants (CODATA 2018).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Newtonian constant of gravitation, m³ kg⁻¹ s⁻².
    pub g: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Speed of light in vacuum, m s⁻¹.
    pub c: f64,
    /// Vacuum electric permittivity, F m⁻¹.
    pub eps0: f64,
    /// Vacuum magnetic permeability, H m⁻¹.
    pub mu0: f64,
    /// One debye in C m.
    pub debye: f64,
}

pub const G: f64 = 6.674_30e-11;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const C: f64 = 299_792_458.0;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const MU0: f64 = 1.256_637_062_12e-6;
/// 1 D = 10⁻²¹ / c  C m.
pub const DEBYE: f64 = 1e-21 / C;

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    g: G,
    hbar: HBAR,
    c: C,
    eps0: EPS0,
    mu0: MU0,
    debye: DEBYE,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// Same constants with a rescaled speed of light. Used to probe the
    /// `c -> inf` limit; the electromagnetic constants are left untouched.
    pub fn with_speed_of_light(self, c: f64) -> Self {
        PhysicalConstants { c, ..self }
    }

    pub fn debye_to_si(&self, p_debye: f64) -> f64 {
        p_debye * self.debye
    }

    pub fn si_to_debye(&self, p: f64) -> f64 {
        p / self.debye
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.g, self.hbar, self.c, self.eps0, self.mu0, self.debye];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::domain("physical constants must be finite and positive"));
        }
        let closure = self.mu0 * self.eps0 * self.c * self.c;
        if (closure - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("mu0*eps0*c^2 = {closure}, expected 1")));
        }
        Ok(())
    }
}

/// Bulk material properties of the rotor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Mass density, kg m⁻³.
    pub density: f64,
    /// Remanent flux density B_r, T.
    pub remanence: f64,
    /// Speed of sound, m s⁻¹.
    pub sound_speed: f64,
}

impl Default for Material {
    /// Osmium-like density, neodymium-magnet remanence, and the upper bound on
    /// the speed of sound in condensed matter.
    fn default() -> Self {
        Material {
            density: 2.3e4,
            remanence: 1.4,
            sound_speed: 3.7e4,
        }
    }
}

impl Material {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("density", self.density),
            ("remanence", self.remanence),
            ("sound_speed", self.sound_speed),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("material {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Rotor shape. Discs spin about their symmetry axis and face each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Shape {
    Sphere { radius: f64 },
    Disc { radius: f64, height: f64 },
}

/// Which family of shapes a sweep uses; discs get `H = R / 10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Sphere,
    Disc,
}

impl ShapeKind {
    pub fn at_radius(self, radius: f64) -> Shape {
        match self {
            ShapeKind::Sphere => Shape::Sphere { radius },
            ShapeKind::Disc => Shape::Disc {
                radius,
                height: radius * DEFAULT_DISC_ASPECT,
            },
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Sphere => "sphere",
            ShapeKind::Disc => "disc",
        }
    }
}

impl std::str::FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sphere" => Ok(ShapeKind::Sphere),
            "disc" | "disk" => Ok(ShapeKind::Disc),
            other => Err(Error::domain(format!("unknown shape '{other}' (sphere|disc)"))),
        }
    }
}

/// Default disc height-to-radius ratio.
pub const DEFAULT_DISC_ASPECT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotorGeometry {
    pub shape: Shape,
    pub material: Material,
}

impl RotorGeometry {
    pub fn sphere(radius: f64, material: Material) -> Result<Self> {
        RotorGeometry {
            shape: Shape::Sphere { radius },
            material,
        }
        .validated()
    }

    pub fn disc(radius: f64, height: f64, material: Material) -> Result<Self> {
        RotorGeometry {
            shape: Shape::Disc { radius, height },
            material,
        }
        .validated()
    }

    /// Disc with the default aspect ratio `H = R / 10`.
    pub fn thin_disc(radius: f64, material: Material) -> Result<Self> {
        Self::disc(radius, radius * DEFAULT_DISC_ASPECT, material)
    }

    pub fn of_kind(kind: ShapeKind, radius: f64, material: Material) -> Result<Self> {
        RotorGeometry {
            shape: kind.at_radius(radius),
            material,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        self.material.validate()?;
        let ok = match self.shape {
            Shape::Sphere { radius } => radius.is_finite() && radius > 0.0,
            Shape::Disc { radius, height } => radius.is_finite() && radius > 0.0 && height.is_finite() && height > 0.0,
        };
        if !ok {
            return Err(Error::domain(format!("invalid rotor dimensions: {:?}", self.shape)));
        }
        Ok(self)
    }

    pub fn kind(&self) -> ShapeKind {
        match self.shape {
            Shape::Sphere { .. } => ShapeKind::Sphere,
            Shape::Disc { .. } => ShapeKind::Disc,
        }
    }

    pub fn radius(&self) -> f64 {
        match self.shape {
            Shape::Sphere { radius } | Shape::Disc { radius, .. } => radius,
        }
    }

    pub fn volume(&self) -> f64 {
        match self.shape {
            Shape::Sphere { radius } => 4.0 / 3.0 * PI * radius.powi(3),
            Shape::Disc { radius, height } => PI * radius * radius * height,
        }
    }

    pub fn mass(&self) -> f64 {
        self.material.density * self.volume()
    }

    /// Moment of inertia about a diameter (sphere) or the symmetry axis (disc).
    pub fn moment_of_inertia(&self) -> f64 {
        let r2 = self.radius().powi(2);
        match self.shape {
            Shape::Sphere { .. } => 0.4 * self.mass() * r2,
            Shape::Disc { .. } => 0.5 * self.mass() * r2,
        }
    }

    /// Centre-to-centre distance of two identical rotors whose closest
    /// surfaces are `r_min` apart. Discs face each other.
    pub fn center_separation(&self, r_min: f64) -> f64 {
        match self.shape {
            Shape::Sphere { radius } => 2.0 * radius + r_min,
            Shape::Disc { height, .. } => height + r_min,
        }
    }

    /// Largest magnetic moment the rotor volume can carry: `B_r V / mu0`.
    pub fn remanent_moment(&self, k: &PhysicalConstants) -> f64 {
        self.material.remanence * self.volume() / k.mu0
    }
}

/// Durations, control fields and thresholds of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    /// Superposition (electric torque) step, s.
    pub t2: f64,
    /// Magnetic spin-up ramp, s.
    pub t3: f64,
    /// Free gravitational interaction at full speed, s.
    pub t4: f64,
    /// Electric dipole moment, C m.
    pub dipole: f64,
    /// Electric field during the superposition step, V m⁻¹.
    pub e_field: f64,
    /// Magnetic field during spin-up, T.
    pub b_field: f64,
    /// Closest surface-to-surface distance, m.
    pub r_min: f64,
    /// Smallest entangling phase considered resolvable, rad.
    pub phi_min: f64,
}

impl Default for ProtocolParams {
    fn default() -> Self {
        ProtocolParams {
            t2: 1e3,
            t3: 1e3,
            t4: 1e3,
            dipole: 1e3 * DEBYE,
            e_field: 1e10,
            b_field: 100.0,
            r_min: 1e-5,
            phi_min: 1e-3,
        }
    }
}

impl ProtocolParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("T2", self.t2),
            ("T3", self.t3),
            ("T4", self.t4),
            ("p", self.dipole),
            ("E_field", self.e_field),
            ("B_field", self.b_field),
            ("r_min", self.r_min),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        // infinity is allowed and switches the phase requirement off
        if !(self.phi_min > 0.0) {
            return Err(Error::domain(format!("phi_min must be positive, got {}", self.phi_min)));
        }
        Ok(())
    }
}
