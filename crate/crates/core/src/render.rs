//! Standalone SVG figures: feasibility regions and spin-up trajectories.
//!
//! Output is plain text built with fixed number formatting, so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;

use crate::atlas::{overlap_stats, Cell, FeasibilityGrid};
use crate::dynamics::{omega_empirical, SpinUpTrajectory};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 580.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 230.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    xr: (f64, f64),
    yr: (f64, f64),
}

impl Frame {
    fn x(&self, v: f64) -> f64 {
        self.x0 + (v - self.xr.0) / (self.xr.1 - self.xr.0) * self.w
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + self.h - (v - self.yr.0) / (self.yr.1 - self.yr.0) * self.h
    }
}

fn header(s: &mut String, w: f64, h: f64) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
}

/// Cell edges on a log axis: geometric midpoints, half a step past the ends.
fn log_edges(nodes: &[f64]) -> Vec<f64> {
    let l: Vec<f64> = nodes.iter().map(|v| v.log10()).collect();
    let n = l.len();
    let mut edges = Vec::with_capacity(n + 1);
    edges.push(l[0] - 0.5 * (l[1] - l[0]));
    for w in l.windows(2) {
        edges.push(0.5 * (w[0] + w[1]));
    }
    edges.push(l[n - 1] + 0.5 * (l[n - 1] - l[n - 2]));
    edges
}

fn decade_ticks(lo: f64, hi: f64) -> Vec<i32> {
    (lo.ceil() as i32..=hi.floor() as i32).collect()
}

fn power_label(k: i32) -> String {
    format!(r#"10<tspan dy="-6" font-size="10">{k}</tspan>"#)
}

struct Region {
    id: &'static str,
    label: &'static str,
    pattern: &'static str,
    test: fn(&Cell) -> bool,
}

const REGIONS: [Region; 4] = [
    Region {
        id: "phase",
        label: "phase > phi_min",
        pattern: r##"<pattern id="phase" width="8" height="8" patternUnits="userSpaceOnUse"><circle cx="4" cy="4" r="1.3" fill="#e07b00"/></pattern>"##,
        test: Cell::phase_ok,
    },
    Region {
        id: "centrifugal",
        label: "below sound speed",
        pattern: r##"<pattern id="centrifugal" width="12" height="12" patternUnits="userSpaceOnUse"><circle cx="6" cy="6" r="3" fill="none" stroke="#c0392b" stroke-width="1"/></pattern>"##,
        test: Cell::centrifugal_ok,
    },
    Region {
        id: "spinup",
        label: "spin-up achievable",
        pattern: r##"<pattern id="spinup" width="8" height="8" patternUnits="userSpaceOnUse" patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="8" stroke="#1f5fbf" stroke-width="2"/></pattern>"##,
        test: Cell::spin_up_ok,
    },
    Region {
        id: "overlap",
        label: "all three",
        pattern: r##"<pattern id="overlap" width="4" height="4" patternUnits="userSpaceOnUse"><rect width="4" height="4" fill="#1a7f37"/></pattern>"##,
        test: Cell::overlap,
    },
];

/// Log-log map of the three constraint regions and their overlap.
pub fn render_regions_svg(grid: &FeasibilityGrid) -> String {
    let xe = log_edges(&grid.radii);
    let ye = log_edges(&grid.omegas);
    let f = Frame {
        x0: LEFT,
        y0: TOP,
        w: WIDTH - LEFT - RIGHT,
        h: HEIGHT - TOP - BOTTOM,
        xr: (xe[0], xe[xe.len() - 1]),
        yr: (ye[0], ye[ye.len() - 1]),
    };

    let mut s = String::new();
    header(&mut s, WIDTH, HEIGHT);
    s.push_str("<defs>\n");
    for r in &REGIONS {
        s.push_str(r.pattern);
        s.push('\n');
    }
    s.push_str("</defs>\n");

    let n_omega = grid.omegas.len();
    for r in &REGIONS {
        let (opacity, stroke) = if r.id == "overlap" {
            ("0.55", r##" stroke="#0b3d1a" stroke-width="0.6""##)
        } else {
            ("0.8", "")
        };
        let _ = writeln!(
            s,
            r#"<g id="region-{}" fill="url(#{})" fill-opacity="{opacity}"{stroke}>"#,
            r.id, r.id
        );
        // merge runs along omega within each radius column
        for (i, row) in grid.cells.chunks(n_omega).enumerate() {
            let mut j = 0;
            while j < n_omega {
                if !(r.test)(&row[j]) {
                    j += 1;
                    continue;
                }
                let start = j;
                while j < n_omega && (r.test)(&row[j]) {
                    j += 1;
                }
                let (x1, x2) = (f.x(xe[i]), f.x(xe[i + 1]));
                let (y1, y2) = (f.y(ye[j]), f.y(ye[start]));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x1:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}"/>"#,
                    x2 - x1,
                    y2 - y1
                );
            }
        }
        s.push_str("</g>\n");
    }

    // axes
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        f.x0, f.y0, f.w, f.h
    );
    for k in decade_ticks(f.xr.0, f.xr.1) {
        let x = f.x(k as f64);
        let yb = f.y0 + f.h;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{yb:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            yb + 6.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            yb + 22.0,
            power_label(k)
        );
    }
    for k in decade_ticks(f.yr.0, f.yr.1) {
        let y = f.y(k as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
            f.x0 - 6.0,
            f.x0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            f.x0 - 10.0,
            y + 4.0,
            power_label(k)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">R (m)</text>"#,
        f.x0 + 0.5 * f.w,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(24 {:.2}) rotate(-90)" text-anchor="middle">ω_max (rad·s⁻¹)</text>"#,
        f.y0 + 0.5 * f.h
    );

    // legend
    let lx = WIDTH - RIGHT + 20.0;
    for (n, r) in REGIONS.iter().enumerate() {
        let ly = TOP + 10.0 + 28.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.2}" y="{ly:.2}" width="22" height="16" fill="url(#{})" stroke="black" stroke-width="0.5"/>"#,
            r.id
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 30.0,
            ly + 12.5,
            r.label
        );
    }
    let stats = overlap_stats(grid);
    let note = if stats.cell_count == 0 {
        "no overlap".to_string()
    } else {
        format!("{} overlap cells", stats.cell_count)
    };
    let _ = writeln!(
        s,
        r#"<text x="{lx:.2}" y="{:.2}">{note}</text>"#,
        TOP + 10.0 + 28.0 * 4.0 + 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{lx:.2}" y="{:.2}" font-size="11">{}, relax = {}</text>"#,
        TOP + 10.0 + 28.0 * 5.0 + 12.0,
        grid.spec.shape.name(),
        grid.spec.relax
    );
    s.push_str("</svg>\n");
    s
}

fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    if !(hi > lo) {
        return vec![lo];
    }
    let step = nice_step(hi - lo, 5);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("{v:.1e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn panel(s: &mut String, f: &Frame, xs: &[f64], ys: &[f64], color: &str, label: &str, xlabel: bool) {
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        f.x0, f.y0, f.w, f.h
    );
    for t in linear_ticks(f.xr.0, f.xr.1) {
        let x = f.x(t);
        let yb = f.y0 + f.h;
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{yb:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            yb + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            yb + 19.0,
            fmt_tick(t)
        );
    }
    for v in linear_ticks(f.yr.0, f.yr.1) {
        let y = f.y(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
            f.x0 - 5.0,
            f.x0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            f.x0 - 8.0,
            y + 4.0,
            fmt_tick(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text transform="translate({:.2} {:.2}) rotate(-90)" text-anchor="middle">{label}</text>"#,
        f.x0 - 62.0,
        f.y0 + 0.5 * f.h
    );
    if xlabel {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t (s)</text>"#,
            f.x0 + 0.5 * f.w,
            f.y0 + f.h + 40.0
        );
    }
    let mut pts = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let _ = write!(pts, "{:.2},{:.2} ", f.x(*x), f.y(*y));
    }
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{}"/>"#,
        pts.trim_end()
    );
}

/// At most this many points per curve.
const MAX_POINTS: usize = 2000;

/// Two stacked panels, `theta(t)` and `omega(t)`, with the piecewise-linear
/// model overlaid on `omega` when a fitted delay is present.
pub fn render_trajectory_svg(traj: &SpinUpTrajectory) -> String {
    let stride = traj.samples.len().div_ceil(MAX_POINTS).max(1);
    let mut picked: Vec<_> = traj.samples.iter().step_by(stride).copied().collect();
    if picked.last() != traj.samples.last() {
        picked.push(traj.final_sample());
    }
    let ts: Vec<f64> = picked.iter().map(|p| p.t).collect();
    let thetas: Vec<f64> = picked.iter().map(|p| p.theta).collect();
    let omegas: Vec<f64> = picked.iter().map(|p| p.omega).collect();

    let t_end = traj.final_sample().t;
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi * 1.05)
        } else {
            (lo, lo + 1.0)
        }
    };

    let (w, h) = (760.0, 620.0);
    let pw = w - 110.0 - 30.0;
    let ph = (h - 40.0 - 80.0 - 50.0) / 2.0;
    let top = Frame {
        x0: 110.0,
        y0: 40.0,
        w: pw,
        h: ph,
        xr: (0.0, t_end),
        yr: range(&thetas),
    };
    let bottom = Frame {
        y0: 40.0 + ph + 50.0,
        yr: range(&omegas),
        ..top
    };

    let mut s = String::new();
    header(&mut s, w, h);
    let p = traj.problem;
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="22" text-anchor="middle">spin-up: I = {}, tau_max = {}, theta0 = {:e}</text>"#,
        w / 2.0,
        p.inertia,
        p.tau_max,
        p.theta0
    );
    panel(&mut s, &top, &ts, &thetas, "#1f5fbf", "θ (rad)", false);
    panel(&mut s, &bottom, &ts, &omegas, "#1f5fbf", "ω (rad·s⁻¹)", true);

    if let Some(t0) = traj.t0_fit {
        let model: Vec<f64> = [0.0, t0.clamp(0.0, t_end), t_end]
            .iter()
            .map(|t| omega_empirical(*t, p.inertia, p.tau_max, t0))
            .collect();
        let xs = [0.0, t0.clamp(0.0, t_end), t_end];
        let mut pts = String::new();
        for (x, y) in xs.iter().zip(&model) {
            let _ = write!(pts, "{:.2},{:.2} ", bottom.x(*x), bottom.y(y.min(bottom.yr.1)));
        }
        let _ = writeln!(
            s,
            r##"<polyline id="model" fill="none" stroke="#e07b00" stroke-width="1.4" stroke-dasharray="6 4" points="{}"/>"##,
            pts.trim_end()
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">fitted t0 = {:.4}</text>"#,
            bottom.x0 + 10.0,
            bottom.y0 + 18.0,
            t0
        );
    }
    s.push_str("</svg>\n");
    s
}
