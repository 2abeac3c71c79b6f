//! All constraints at a single design point, printed as JSON.
//!
//! Usage: `point_report [R] [omega]` (default 0.15 m, 2 pi rad/s).

use gravrotor::constraints::{evaluate_point, moment_limit, radiation_budget};
use gravrotor::physical::{Material, ProtocolParams, RotorGeometry, CODATA_2018};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<f64>());
    let radius = args.next().transpose()?.unwrap_or(0.15);
    let omega = args.next().transpose()?.unwrap_or(std::f64::consts::TAU);

    let k = CODATA_2018;
    let params = ProtocolParams::default();
    let geom = RotorGeometry::sphere(radius, Material::default())?;
    let report = evaluate_point(&k, &geom, omega, &params)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    let budget = radiation_budget(&k, omega, report.m, params.t3, params.t4);
    eprintln!(
        "moment {:.3e} A m^2 ({:?}-limited), {:.3} photons expected",
        report.m,
        moment_limit(&k, &geom, omega, params.t3, params.t4),
        budget.expected_photons
    );
    Ok(())
}
