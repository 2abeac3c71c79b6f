//! Sweeps the (R, omega_max) plane for spheres and draws the regions.
//!
//! Writes `regions.svg` and `regions.csv` to the directory given as the first
//! argument (default: current directory).

use std::fs::File;
use std::path::PathBuf;

use gravrotor::atlas::{overlap_stats, sweep, SweepSpec};
use gravrotor::physical::{ShapeKind, CODATA_2018};
use gravrotor::render::render_regions_svg;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir)?;
    let grid = sweep(&CODATA_2018, &SweepSpec::standard(ShapeKind::Sphere))?;

    let stats = overlap_stats(&grid);
    println!(
        "{} of {} cells satisfy every constraint",
        stats.cell_count,
        grid.cells.len()
    );
    if let Some(b) = stats.bounding_box {
        println!(
            "overlap spans R in [{:.3}, {:.3}] m, omega in [{:.3}, {:.3}] rad/s",
            b.radius_min, b.radius_max, b.omega_min, b.omega_max
        );
    }
    if let Some(p) = stats.best_point {
        println!(
            "largest phase {:.3e} rad at R = {:.3} m, omega = {:.3} rad/s",
            p.phi, p.radius, p.omega
        );
    }

    grid.write_csv(File::create(dir.join("regions.csv"))?)?;
    std::fs::write(dir.join("regions.svg"), render_regions_svg(&grid))?;
    Ok(())
}
