//! Gravity-mediated entanglement between two rotors held in superpositions of
//! rotational energy.
//!
//! The crate covers the whole chain from a single entangling phase to maps of
//! the experimentally viable parameter space:
//!
//! - [`physical`]: constants, materials, sphere and disc geometry;
//! - [`phase`]: branch phases, entangling phase, concurrence and the
//!   repetition budget;
//! - [`dynamics`]: the `|sin theta|` spin-up ODE, its analytic limits and the
//!   delay-time fit;
//! - [`constraints`]: phase size, centrifugal and radiation-free spin-up
//!   checks at one `(R, omega_max)` point;
//! - [`atlas`]: grid sweeps over `(R, omega_max)` and geometry comparison;
//! - [`config`], [`render`] and [`cli`]: configuration files, SVG figures and
//!   the command-line front end.

pub mod atlas;
pub mod cli;
pub mod config;
pub mod constraints;
pub mod dynamics;
pub mod error;
pub mod phase;
pub mod physical;
pub mod render;

pub use error::{Error, Result};
