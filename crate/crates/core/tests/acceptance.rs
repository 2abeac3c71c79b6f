//! Acceptance suite, run without the test harness so that every criterion
//! prints its `PASS`/`FAIL` line. Exits non-zero if any criterion fails.

use std::cell::Cell;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use gravrotor::atlas::{compare_geometries, overlap_stats, sweep, sweep_with_threads, SweepSpec};
use gravrotor::constraints::{
    centrifugal_limit, effective_phase_time, evaluate_point, photon_limited_moment, protocol_phase, radiation_budget,
};
use gravrotor::dynamics::{
    fit_t0, integrate_spin_up, omega_at_quarter_turn, small_angle_theta, t0_empirical, SpinUpProblem,
};
use gravrotor::phase::{
    concurrence, entangling_phase_from_energy, entangling_phase_from_mass, mass_equivalent, rotational_energy,
};
use gravrotor::physical::{Material, ProtocolParams, RotorGeometry, ShapeKind, CODATA_2018};

const K: gravrotor::physical::PhysicalConstants = CODATA_2018;

// independent 30-digit evaluations
const MASS_OF_0_4_J: f64 = 4.450600224e-18;
const ENERGY_OF_4E_18_KG: f64 = 0.3595020715;
const PHI_BACK_OF_ENVELOPE: f64 = 1.012627099e-5;
const MOMENT_LIMIT_2PI: f64 = 3.589844140896181e-4;

fn report(n: u32, name: &str, ok: bool, detail: &str, started: Instant) -> bool {
    println!(
        "criterion {n} {name}: {} ({detail}; {:.2} s)",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed().as_secs_f64()
    );
    ok
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn criterion_1_mass_energy() -> bool {
    let t = Instant::now();
    let m = mass_equivalent(&K, 0.4);
    let e = 4e-18 * K.c * K.c;
    let ok =
        rel(m, MASS_OF_0_4_J) < 1e-9 && rel(e, ENERGY_OF_4E_18_KG) < 1e-9 && rel(m, 4e-18) < 0.12 && rel(e, 0.4) < 0.12;
    let detail = format!(
        "M(0.4 J) = {m:.4e} kg vs 4e-18 ({:+.1}%), E(4e-18 kg) = {e:.4} J vs 0.4 ({:+.1}%)",
        100.0 * (m / 4e-18 - 1.0),
        100.0 * (e / 0.4 - 1.0)
    );
    report(1, "mass-energy consistency", ok, &detail, t)
}

fn criterion_2_back_of_envelope_phase() -> bool {
    let t = Instant::now();
    let phi = entangling_phase_from_mass(&K, 4e-18, 1.0, 1e-6).unwrap();
    let ok = rel(phi, PHI_BACK_OF_ENVELOPE) < 1e-3;
    let detail = format!("phi = {phi:.6e} rad vs {PHI_BACK_OF_ENVELOPE:.6e}");
    report(2, "entangling phase", ok, &detail, t)
}

fn criterion_3_phase_identities() -> bool {
    let t = Instant::now();
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    let draws = (
        -6.0..2.0f64,
        -4.0..3.0f64,
        -1.0..4.0f64,
        -1.0..4.0f64,
        -6.0..0.0f64,
        -20.0..-14.0f64,
    );
    let worst = Cell::new(0.0f64);
    let result = runner.run(&draws, |(li, lw, lt3, lt4, lr, ldm)| {
        let (i, w, t3, t4, r, dm) = (
            10f64.powf(li),
            10f64.powf(lw),
            10f64.powf(lt3),
            10f64.powf(lt4),
            10f64.powf(lr),
            10f64.powf(ldm),
        );
        let t_eff = effective_phase_time(t3, t4);

        let by_mass = entangling_phase_from_mass(&K, dm, t_eff, r).unwrap();
        let by_energy = entangling_phase_from_energy(&K, dm * K.c * K.c, t_eff, r).unwrap();
        let e1 = rel(by_energy, by_mass);

        let closed = K.g / (4.0 * K.hbar * K.c.powi(4)) * i * i * w.powi(4) * t_eff / r;
        let via_energy = entangling_phase_from_energy(&K, rotational_energy(i, w), t_eff, r).unwrap();
        let protocol = protocol_phase(&K, i, w, r, t3, t4).unwrap();
        let e2 = rel(via_energy, closed).max(rel(protocol, closed));
        worst.set(worst.get().max(e1).max(e2));
        prop_assert!(e1 <= 1e-12 && e2 <= 1e-12, "e1 {e1:e}, e2 {e2:e}");
        Ok(())
    });
    let detail = match &result {
        Ok(()) => format!("1000 draws, worst relative difference {:.1e}", worst.get()),
        Err(e) => e.to_string(),
    };
    report(3, "phase identities", result.is_ok(), &detail, t)
}

fn criterion_4_spin_up_dynamics() -> bool {
    let t = Instant::now();
    let mut lines = Vec::new();
    let (mut ok_a, mut ok_b, mut ok_c) = (true, true, true);
    let w_quarter = omega_at_quarter_turn(1.0, 1.0);
    for theta0 in [1e-10f64, 1e-8, 1e-6, 1e-4, 1e-3] {
        let duration = (PI / theta0).ln() + 16.0;
        let p = SpinUpProblem::new(1.0, 1.0, theta0, duration).unwrap();
        let mut traj = integrate_spin_up(&p, 1e-8).unwrap();

        let cosh_err = traj
            .samples
            .iter()
            .filter(|s| s.theta <= 0.1)
            .map(|s| rel(s.theta, small_angle_theta(s.t, theta0, 1.0, 1.0)))
            .fold(0.0, f64::max);
        let fit = fit_t0(&mut traj).unwrap();
        let formula = t0_empirical(1.0, 1.0, theta0).unwrap();
        let fit_err = fit / formula - 1.0;
        let tq = traj.quarter_turn_time().unwrap();
        let wq = traj.omega_at(tq);
        let wq_err = wq / w_quarter - 1.0;

        let (a, b, c) = (cosh_err < 0.01, fit_err.abs() < 0.10, wq_err.abs() < 0.05);
        ok_a &= a;
        ok_b &= b;
        ok_c &= c;
        let mark = |x: bool| if x { "ok" } else { "FAIL" };
        lines.push(format!(
            "  theta0 {theta0:.0e}: (a) cosh {cosh_err:.1e} {}  (b) t0 {fit:.3} vs {formula:.3} {:+.1}% {}  (c) omega {wq:.4} vs {w_quarter:.4} {:+.1}% {}",
            mark(a),
            100.0 * fit_err,
            mark(b),
            100.0 * wq_err,
            mark(c)
        ));
    }
    let detail = format!(
        "(a) {} (b) {} (c) {}",
        if ok_a { "pass" } else { "fail" },
        if ok_b { "pass" } else { "fail" },
        if ok_c { "pass" } else { "fail" }
    );
    let ok = report(4, "spin-up dynamics", ok_a && ok_b && ok_c, &detail, t);
    for l in &lines {
        println!("{l}");
    }
    ok
}

fn criterion_5_region_overlap() -> bool {
    let t = Instant::now();
    let spec = SweepSpec::standard(ShapeKind::Sphere).with_relax(2.0);
    let grid = sweep(&K, &spec).unwrap();
    let stats = overlap_stats(&grid);
    let in_window = grid
        .cells
        .iter()
        .filter(|c| c.overlap() && (0.05..=0.5).contains(&c.radius) && (1.0..=30.0).contains(&c.omega))
        .count();

    let geom = RotorGeometry::sphere(0.15, Material::default()).unwrap();
    let r = evaluate_point(&K, &geom, TAU, &ProtocolParams::default()).unwrap();
    let point_ok = rel(r.phi, 1.22e-3) < 0.02 && r.phi_ok && r.centrifugal_ok && r.omega_achievable >= TAU / 2.0;

    let ok = stats.cell_count > 0 && in_window > 0 && point_ok;
    let detail = format!(
        "{} overlap cells, {in_window} inside R 0.05..0.5 m x omega 1..30 rad/s; R = 0.15 m: phi {:.4e}, omega_achievable {:.3} vs {:.3}",
        stats.cell_count,
        r.phi,
        r.omega_achievable,
        TAU / 2.0
    );
    report(5, "feasibility overlap", ok, &detail, t)
}

fn criterion_6_disc_beats_sphere() -> bool {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for relax in [1.0, 2.0] {
        let s = SweepSpec::standard(ShapeKind::Sphere).with_relax(relax);
        let cmp = compare_geometries(&K, &s, &s.with_shape(ShapeKind::Disc)).unwrap();
        ok &= cmp.disc_cells > cmp.sphere_cells;
        parts.push(format!(
            "relax {relax}: disc {} vs sphere {}",
            cmp.disc_cells, cmp.sphere_cells
        ));
    }
    report(6, "disc versus sphere", ok, &parts.join(", "), t)
}

fn criterion_7_property_suite() -> bool {
    let t = Instant::now();
    let mut runner = TestRunner::new(Config {
        cases: 256,
        failure_persistence: None,
        ..Config::default()
    });
    let mut failures = Vec::new();

    let r = runner.run(&(-50.0..50.0f64), |phi| {
        let c = concurrence(phi);
        prop_assert!((0.0..=1.0).contains(&c));
        prop_assert!((concurrence(phi + PI / 2.0) - c).abs() < 1e-9);
        prop_assert!((concurrence(-phi) - c).abs() < 1e-12);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("concurrence: {e}"));
    }

    let r = runner.run(&(-6.0..2.0f64, -3.0..3.0f64, -6.0..0.0f64), |(li, lw, lr)| {
        let (i, w, r) = (10f64.powf(li), 10f64.powf(lw), 10f64.powf(lr));
        let a = protocol_phase(&K, i, w, r, 1e3, 1e3).unwrap();
        let b = protocol_phase(&K, i, 2.0 * w, r, 1e3, 1e3).unwrap();
        prop_assert!(rel(b, 16.0 * a) <= 1e-12);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("omega^4 scaling: {e}"));
    }

    let r = runner.run(&(-3.0..0.0f64, 3.0..5.0f64), |(lr, lv)| {
        let (radius, vs) = (10f64.powf(lr), 10f64.powf(lv));
        let w = centrifugal_limit(radius, vs);
        prop_assert!(rel(w * radius, vs) <= f64::EPSILON);
        let material = Material {
            sound_speed: vs,
            ..Material::default()
        };
        let geom = RotorGeometry::sphere(radius, material).unwrap();
        let params = ProtocolParams::default();
        let below = evaluate_point(&K, &geom, w * (1.0 - 1e-9), &params).unwrap();
        let above = evaluate_point(&K, &geom, w * (1.0 + 1e-9), &params).unwrap();
        prop_assert!(below.centrifugal_ok && !above.centrifugal_ok);
        Ok(())
    });
    if let Err(e) = r {
        failures.push(format!("centrifugal boundary: {e}"));
    }

    let mut small = TestRunner::new(Config {
        cases: 24,
        failure_persistence: None,
        ..Config::default()
    });
    let r = small.run(
        &(-2.0..2.0f64, -2.0..2.0f64, -10.0..-0.5f64, -8.0..-4.0f64),
        |(li, lt, lth, ltol)| {
            let (i, tau, theta0, tol) = (10f64.powf(li), 10f64.powf(lt), 10f64.powf(lth), 10f64.powf(ltol));
            let duration = (i / tau).sqrt() * ((PI / theta0).ln() + 6.0);
            let traj = integrate_spin_up(&SpinUpProblem::new(i, tau, theta0, duration).unwrap(), tol).unwrap();
            prop_assert!(
                traj.stats.max_energy_residual <= tol,
                "{:e} > {tol:e}",
                traj.stats.max_energy_residual
            );
            Ok(())
        },
    );
    if let Err(e) = r {
        failures.push(format!("energy balance: {e}"));
    }

    for shape in [ShapeKind::Sphere, ShapeKind::Disc] {
        let spec = SweepSpec::standard(shape).with_relax(2.0);
        let one = sweep_with_threads(&K, &spec, 1).unwrap();
        for threads in [4, 8] {
            if sweep_with_threads(&K, &spec, threads).unwrap() != one {
                failures.push(format!("{} sweep differs on {threads} threads", shape.name()));
            }
        }
    }

    let detail = if failures.is_empty() {
        "concurrence, omega^4, centrifugal boundary, energy balance, 1/4/8-thread sweeps".to_string()
    } else {
        failures.join("; ")
    };
    report(7, "property suite", failures.is_empty(), &detail, t)
}

fn criterion_8_radiation() -> bool {
    let t = Instant::now();
    let m = photon_limited_moment(&K, TAU, 1e3, 1e3);
    let n = radiation_budget(&K, TAU, m, 1e3, 1e3).expected_photons;
    let n_rounded = radiation_budget(&K, TAU, 3.59e-4, 1e3, 1e3).expected_photons;
    let ok = rel(m, MOMENT_LIMIT_2PI) < 5e-3 && rel(m, 3.59e-4) < 5e-3 && (n_rounded - 1.0).abs() < 5e-3;
    let detail = format!("m = {m:.5e} A m^2, <n>(m) = {n:.6}, <n>(3.59e-4) = {n_rounded:.5}");
    report(8, "radiation limit", ok, &detail, t)
}

fn main() {
    let criteria: [fn() -> bool; 8] = [
        criterion_1_mass_energy,
        criterion_2_back_of_envelope_phase,
        criterion_3_phase_identities,
        criterion_4_spin_up_dynamics,
        criterion_5_region_overlap,
        criterion_6_disc_beats_sphere,
        criterion_7_property_suite,
        criterion_8_radiation,
    ];
    let failed: Vec<usize> = criteria
        .iter()
        .enumerate()
        .filter_map(|(i, c)| (!c()).then_some(i + 1))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!(
            "acceptance: {} of {} criteria fail: {failed:?}",
            failed.len(),
            criteria.len()
        );
        std::process::exit(1);
    }
}
