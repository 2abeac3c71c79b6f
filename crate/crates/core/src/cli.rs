//! Command-line front end.
//!
//! Every subcommand parses and validates its configuration and finishes all
//! computation before the first file is created, so a failed run leaves no
//! partial outputs behind.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::atlas::{compare_grids, overlap_stats, sweep, FeasibilityGrid};
use crate::config::RunConfig;
use crate::constraints::evaluate_point_relaxed;
use crate::dynamics::{
    fit_t0, integrate_spin_up, omega_at_quarter_turn, quarter_turn_time, t0_empirical, SpinUpProblem,
};
use crate::error::{Error, Result};
use crate::physical::{RotorGeometry, ShapeKind, CODATA_2018};
use crate::render::{render_regions_svg, render_trajectory_svg};

#[derive(Debug, Parser)]
#[command(
    name = "gravrotor",
    version,
    about = "Feasibility of gravity-mediated rotor entanglement"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` configuration file; built-in defaults otherwise.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `out_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "sphere|disc")]
    shape: Option<ShapeKind>,
    /// Rotor radius in m.
    #[arg(long = "R", global = true, value_name = "M")]
    radius: Option<f64>,
    /// Target rotation rate in rad/s.
    #[arg(long, global = true, value_name = "RAD_PER_S")]
    omega: Option<f64>,
    /// Initial angle from the unstable equilibrium.
    #[arg(long, global = true, value_name = "RAD")]
    theta0: Option<f64>,
    /// Allow reaching omega_max / FACTOR within the spin-up time.
    #[arg(long, global = true, value_name = "FACTOR")]
    relax: Option<f64>,
    /// Sweep resolution as N_R x N_omega, e.g. 64x64.
    #[arg(long, global = true, value_name = "NxM")]
    grid: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate all constraints at one (R, omega) point; JSON to stdout.
    Point,
    /// Sweep the (R, omega) grid; writes CSV, SVG and a JSON summary.
    Sweep,
    /// Integrate one spin-up; writes CSV and SVG.
    Dynamics,
    /// Fit the spin-up delay over a range of initial angles; writes CSV.
    #[command(name = "fit-t0")]
    FitT0,
    /// Sweep sphere and disc rotors on the same grid; writes JSON.
    #[command(name = "compare-geometries")]
    CompareGeometries,
}

/// Runs the CLI with process stdout and stderr. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Same as [`run`] with injected output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::config(0, format!("--grid expects NxM with positive integers, got '{s}'"));
    let (n, m) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    Ok((n, m))
}

fn load_config(c: &Common) -> Result<RunConfig> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(o) = &c.out {
        cfg.out_dir = o.clone();
    }
    if let Some(s) = c.shape {
        cfg.shape = s;
    }
    if let Some(r) = c.relax {
        cfg.relax = r;
    }
    if let Some(t) = c.theta0 {
        cfg.dyn_theta0 = t;
        cfg.fit_theta0 = vec![t];
    }
    if let Some(g) = &c.grid {
        (cfg.n_radius, cfg.n_omega) = parse_grid(g)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn require(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::config(0, format!("`point` needs {flag}")))
}

/// Files are only written once every artifact is in memory.
struct Outputs {
    dir: PathBuf,
    files: Vec<(String, Vec<u8>)>,
}

impl Outputs {
    fn new(dir: &Path) -> Self {
        Outputs {
            dir: dir.to_owned(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    fn commit(self, out: &mut dyn Write) -> Result<()> {
        let io = |path: &Path| {
            let path = path.to_owned();
            move |source| Error::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io(&self.dir))?;
        for (name, bytes) in self.files {
            let path = self.dir.join(name);
            fs::write(&path, bytes).map_err(io(&path))?;
            let _ = writeln!(out, "{}", path.display());
        }
        Ok(())
    }
}

fn grid_csv(grid: &FeasibilityGrid) -> Vec<u8> {
    let mut buf = Vec::new();
    grid.write_csv(&mut buf).expect("writing to memory");
    buf
}

fn grid_summary(grid: &FeasibilityGrid) -> serde_json::Value {
    let count = |f: fn(&crate::atlas::Cell) -> bool| grid.cells.iter().filter(|c| f(c)).count();
    json!({
        "shape": grid.spec.shape.name(),
        "n_radius": grid.spec.n_radius,
        "n_omega": grid.spec.n_omega,
        "radius_range": grid.spec.radius_range,
        "omega_range": grid.spec.omega_range,
        "relax": grid.spec.relax,
        "invalid_cells": grid.invalid_count(),
        "phase_cells": count(crate::atlas::Cell::phase_ok),
        "centrifugal_cells": count(crate::atlas::Cell::centrifugal_ok),
        "spin_up_cells": count(crate::atlas::Cell::spin_up_ok),
        "overlap": overlap_stats(grid),
    })
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialising plain data");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let cfg = load_config(&cli.common)?;
    let k = CODATA_2018;
    match cli.command {
        Command::Point => {
            let radius = require(cli.common.radius, "--R")?;
            let omega = require(cli.common.omega, "--omega")?;
            let geom = RotorGeometry::of_kind(cfg.shape, radius, cfg.material)?;
            let report = evaluate_point_relaxed(&k, &geom, omega, &cfg.params, cfg.relax)?;
            let _ = write!(out, "{}", pretty(&report));
        }
        Command::Sweep => {
            let grid = sweep(&k, &cfg.sweep_spec())?;
            let name = cfg.shape.name();
            let mut files = Outputs::new(&cfg.out_dir);
            files.add(format!("sweep_{name}.csv"), grid_csv(&grid));
            files.add(format!("regions_{name}.svg"), render_regions_svg(&grid));
            files.add(format!("summary_{name}.json"), pretty(&grid_summary(&grid)));
            files.commit(out)?;
        }
        Command::Dynamics => {
            let problem = cfg.spin_up_problem()?;
            let mut traj = integrate_spin_up(&problem, cfg.tol)?;
            if let Err(e) = fit_t0(&mut traj) {
                let _ = writeln!(err, "warning: no delay overlay ({e})");
            }
            let mut csv = Vec::new();
            traj.write_csv(&mut csv).expect("writing to memory");
            let mut files = Outputs::new(&cfg.out_dir);
            files.add("trajectory.csv", csv);
            files.add("trajectory.svg", render_trajectory_svg(&traj));
            files.commit(out)?;
        }
        Command::FitT0 => {
            let mut csv = String::from(
                "theta0,t0_fit,t0_formula,quarter_turn_ode,quarter_turn_exact,quarter_turn_approx,omega_quarter_ode,omega_quarter_formula\n",
            );
            let (i, tau) = (cfg.dyn_inertia, cfg.dyn_tau_max);
            for &theta0 in &cfg.fit_theta0 {
                let row = fit_row(i, tau, theta0, cfg.tol)?;
                csv.push_str(&row);
            }
            let mut files = Outputs::new(&cfg.out_dir);
            files.add("t0_fit.csv", csv);
            files.commit(out)?;
        }
        Command::CompareGeometries => {
            let spheres = sweep(&k, &cfg.sweep_spec().with_shape(ShapeKind::Sphere))?;
            let discs = sweep(&k, &cfg.sweep_spec().with_shape(ShapeKind::Disc))?;
            let cmp = compare_grids(&spheres, &discs)?;
            let doc = json!({
                "comparison": cmp,
                "sphere": grid_summary(&spheres),
                "disc": grid_summary(&discs),
            });
            let mut files = Outputs::new(&cfg.out_dir);
            files.add("geometry_comparison.json", pretty(&doc));
            files.commit(out)?;
        }
    }
    Ok(())
}

/// Runs long enough to show a clear linear tail after the knee.
fn fit_duration(inertia: f64, tau_max: f64, theta0: f64) -> f64 {
    (inertia / tau_max).sqrt() * ((std::f64::consts::PI / theta0).ln() + 16.0)
}

fn fit_row(inertia: f64, tau_max: f64, theta0: f64, tol: f64) -> Result<String> {
    if !(tau_max > 0.0) {
        return Err(Error::domain("fit-t0 needs dyn_tau_max > 0"));
    }
    let problem = SpinUpProblem::new(inertia, tau_max, theta0, fit_duration(inertia, tau_max, theta0))?;
    let mut traj = integrate_spin_up(&problem, tol)?;
    let t0 = fit_t0(&mut traj)?;
    let qt = quarter_turn_time(theta0, inertia, tau_max)?;
    let tq = traj.quarter_turn_time().unwrap_or(f64::NAN);
    Ok(format!(
        "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
        theta0,
        t0,
        t0_empirical(inertia, tau_max, theta0)?,
        tq,
        qt.exact,
        qt.approx,
        traj.omega_at(tq),
        omega_at_quarter_turn(inertia, tau_max),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run_with(std::iter::once("gravrotor").chain(args.iter().copied()), &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn grid_flag() {
        assert_eq!(parse_grid("64x32").unwrap(), (64, 32));
        assert!(parse_grid("64").is_err());
        assert!(parse_grid("ax2").is_err());
    }

    #[test]
    fn point_reports_json() {
        let (code, out, _) = call(&["point", "--R", "0.15", "--omega", "6.283"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["phi_ok"], true);
    }

    #[test]
    fn point_without_radius_is_a_config_error() {
        let (code, out, err) = call(&["point", "--omega", "1"]);
        assert_eq!((code, out.is_empty()), (1, true));
        assert!(err.contains("--R"));
    }

    #[test]
    fn unknown_flag_exits_one() {
        assert_eq!(call(&["point", "--bogus"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn bad_override_is_rejected_before_work() {
        let (code, _, err) = call(&["sweep", "--grid", "0x4", "--out", "/nonexistent/should/not/exist"]);
        assert_eq!(code, 1);
        assert!(err.contains("config error"));
    }
}
