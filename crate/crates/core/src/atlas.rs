//! Feasibility maps over the `(R, omega_max)` plane.
//!
//! Both axes are log-spaced. Cells are evaluated independently (in parallel)
//! and stored by position, so a grid is bit-identical for a given spec no
//! matter how many threads computed it.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constraints::{evaluate_point_relaxed, ConstraintReport};
use crate::error::{Error, Result};
use crate::physical::{Material, PhysicalConstants, ProtocolParams, RotorGeometry, ShapeKind};

/// Largest fraction of cells allowed to fail evaluation.
pub const MAX_INVALID_FRACTION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Radius range, m.
    pub radius_range: (f64, f64),
    /// Angular velocity range, rad s⁻¹.
    pub omega_range: (f64, f64),
    pub n_radius: usize,
    pub n_omega: usize,
    pub shape: ShapeKind,
    pub params: ProtocolParams,
    pub material: Material,
    /// Spin-up only has to reach `omega / relax`. 1 is the strict check.
    pub relax: f64,
}

impl SweepSpec {
    /// 128 x 128 over `R in [1e-3, 1] m`, `omega in [0.1, 1e3] rad/s`.
    pub fn standard(shape: ShapeKind) -> Self {
        SweepSpec {
            radius_range: (1e-3, 1.0),
            omega_range: (1e-1, 1e3),
            n_radius: 128,
            n_omega: 128,
            shape,
            params: ProtocolParams::default(),
            material: Material::default(),
            relax: 1.0,
        }
    }

    pub fn with_relax(self, relax: f64) -> Self {
        SweepSpec { relax, ..self }
    }

    pub fn with_shape(self, shape: ShapeKind) -> Self {
        SweepSpec { shape, ..self }
    }

    pub fn with_resolution(self, n_radius: usize, n_omega: usize) -> Self {
        SweepSpec {
            n_radius,
            n_omega,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("R", self.radius_range), ("omega", self.omega_range)] {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} range must satisfy 0 < min < max, got [{lo}, {hi}]"
                )));
            }
        }
        if self.n_radius < 2 || self.n_omega < 2 {
            return Err(Error::domain(format!(
                "grid needs at least 2 x 2 nodes, got {} x {}",
                self.n_radius, self.n_omega
            )));
        }
        if !(self.relax > 0.0 && self.relax.is_finite()) {
            return Err(Error::domain(format!(
                "relaxation factor must be positive, got {}",
                self.relax
            )));
        }
        self.params.validate()?;
        self.material.validate()
    }

    pub fn radii(&self) -> Vec<f64> {
        log_axis(self.radius_range, self.n_radius)
    }

    pub fn omegas(&self) -> Vec<f64> {
        log_axis(self.omega_range, self.n_omega)
    }

    /// True when two specs differ at most in shape.
    pub fn same_axes(&self, other: &SweepSpec) -> bool {
        self.with_shape(ShapeKind::Sphere) == other.with_shape(ShapeKind::Sphere)
    }
}

/// `n` log-spaced nodes with the end points reproduced exactly.
pub fn log_axis((lo, hi): (f64, f64), n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// One evaluated node; `report` is `None` when evaluation failed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub radius: f64,
    pub omega: f64,
    pub report: Option<ConstraintReport>,
}

impl Cell {
    pub fn phase_ok(&self) -> bool {
        self.report.is_some_and(|r| r.phi_ok)
    }

    pub fn centrifugal_ok(&self) -> bool {
        self.report.is_some_and(|r| r.centrifugal_ok)
    }

    pub fn spin_up_ok(&self) -> bool {
        self.report.is_some_and(|r| r.spin_up_ok)
    }

    pub fn overlap(&self) -> bool {
        self.report.is_some_and(|r| r.all_ok())
    }
}

/// Row-major grid: row `i` is radius `i`, column `j` is omega `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityGrid {
    pub spec: SweepSpec,
    pub radii: Vec<f64>,
    pub omegas: Vec<f64>,
    pub cells: Vec<Cell>,
}

impl FeasibilityGrid {
    pub fn shape(&self) -> (usize, usize) {
        (self.radii.len(), self.omegas.len())
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.omegas.len() + j]
    }

    fn mask(&self, f: impl Fn(&Cell) -> bool) -> Vec<Vec<bool>> {
        self.cells
            .chunks(self.omegas.len())
            .map(|row| row.iter().map(&f).collect())
            .collect()
    }

    pub fn phase_mask(&self) -> Vec<Vec<bool>> {
        self.mask(Cell::phase_ok)
    }

    pub fn centrifugal_mask(&self) -> Vec<Vec<bool>> {
        self.mask(Cell::centrifugal_ok)
    }

    pub fn spin_up_mask(&self) -> Vec<Vec<bool>> {
        self.mask(Cell::spin_up_ok)
    }

    pub fn overlap_mask(&self) -> Vec<Vec<bool>> {
        self.mask(Cell::overlap)
    }

    pub fn invalid_count(&self) -> usize {
        self.cells.iter().filter(|c| c.report.is_none()).count()
    }

    /// `R,omega,phi,margin_phi,margin_centrifugal,margin_spinup,phase_ok,centrifugal_ok,spinup_ok,overlap`
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(
            w,
            "R,omega,phi,margin_phi,margin_centrifugal,margin_spinup,phase_ok,centrifugal_ok,spinup_ok,overlap"
        )?;
        for c in &self.cells {
            let (phi, mp, mc, ms) = match c.report {
                Some(r) => (r.phi, r.margin_phi, r.margin_centrifugal, r.margin_spinup),
                None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
            };
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{:e},{:e},{},{},{},{}",
                c.radius,
                c.omega,
                phi,
                mp,
                mc,
                ms,
                c.phase_ok() as u8,
                c.centrifugal_ok() as u8,
                c.spin_up_ok() as u8,
                c.overlap() as u8
            )?;
        }
        Ok(())
    }
}

/// Evaluates every node of the grid on the current rayon pool.
pub fn sweep(k: &PhysicalConstants, spec: &SweepSpec) -> Result<FeasibilityGrid> {
    spec.validate()?;
    let radii = spec.radii();
    let omegas = spec.omegas();
    let n_omega = omegas.len();

    let cells: Vec<Cell> = (0..radii.len() * n_omega)
        .into_par_iter()
        .map(|idx| {
            let radius = radii[idx / n_omega];
            let omega = omegas[idx % n_omega];
            let report = RotorGeometry::of_kind(spec.shape, radius, spec.material)
                .and_then(|g| evaluate_point_relaxed(k, &g, omega, &spec.params, spec.relax))
                .ok();
            Cell { radius, omega, report }
        })
        .collect();

    let grid = FeasibilityGrid {
        spec: *spec,
        radii,
        omegas,
        cells,
    };
    let invalid = grid.invalid_count();
    if invalid as f64 > MAX_INVALID_FRACTION * grid.cells.len() as f64 {
        return Err(Error::Sweep {
            invalid,
            total: grid.cells.len(),
        });
    }
    Ok(grid)
}

/// [`sweep`] on a dedicated pool of `threads` workers.
pub fn sweep_with_threads(k: &PhysicalConstants, spec: &SweepSpec, threads: usize) -> Result<FeasibilityGrid> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain(format!("cannot build thread pool: {e}")))?;
    pool.install(|| sweep(k, spec))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub radius_min: f64,
    pub radius_max: f64,
    pub omega_min: f64,
    pub omega_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestPoint {
    pub radius: f64,
    pub omega: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapStats {
    pub cell_count: usize,
    pub bounding_box: Option<BoundingBox>,
    /// Overlap cell with the largest entangling phase.
    pub best_point: Option<BestPoint>,
}

pub fn overlap_stats(grid: &FeasibilityGrid) -> OverlapStats {
    let mut count = 0;
    let mut bbox: Option<BoundingBox> = None;
    let mut best: Option<BestPoint> = None;
    for c in grid.cells.iter().filter(|c| c.overlap()) {
        count += 1;
        bbox = Some(match bbox {
            None => BoundingBox {
                radius_min: c.radius,
                radius_max: c.radius,
                omega_min: c.omega,
                omega_max: c.omega,
            },
            Some(b) => BoundingBox {
                radius_min: b.radius_min.min(c.radius),
                radius_max: b.radius_max.max(c.radius),
                omega_min: b.omega_min.min(c.omega),
                omega_max: b.omega_max.max(c.omega),
            },
        });
        let phi = c.report.map_or(f64::NAN, |r| r.phi);
        if best.is_none_or(|b| phi > b.phi) {
            best = Some(BestPoint {
                radius: c.radius,
                omega: c.omega,
                phi,
            });
        }
    }
    OverlapStats {
        cell_count: count,
        bounding_box: bbox,
        best_point: best,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryComparison {
    pub sphere_cells: usize,
    pub disc_cells: usize,
    /// `disc_cells / sphere_cells`; infinite when spheres have no overlap.
    pub ratio: f64,
}

/// Compares the overlap of two grids computed on the same axes.
pub fn compare_grids(sphere: &FeasibilityGrid, disc: &FeasibilityGrid) -> Result<GeometryComparison> {
    if !sphere.spec.same_axes(&disc.spec) {
        return Err(Error::domain(
            "geometry comparison needs identical axes, resolution and parameters",
        ));
    }
    let sphere_cells = overlap_stats(sphere).cell_count;
    let disc_cells = overlap_stats(disc).cell_count;
    Ok(GeometryComparison {
        sphere_cells,
        disc_cells,
        ratio: disc_cells as f64 / sphere_cells as f64,
    })
}

pub fn compare_geometries(
    k: &PhysicalConstants,
    sphere_spec: &SweepSpec,
    disc_spec: &SweepSpec,
) -> Result<GeometryComparison> {
    if !sphere_spec.same_axes(disc_spec) {
        return Err(Error::domain(
            "geometry comparison needs identical axes, resolution and parameters",
        ));
    }
    compare_grids(&sweep(k, sphere_spec)?, &sweep(k, disc_spec)?)
}
