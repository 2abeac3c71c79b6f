//! Flat `key = value` run configuration.
//!
//! One setting per line, SI units, `#` starts a comment. Unknown or repeated
//! keys are rejected, and every problem is reported with its line number.
//! Keys that are absent take the default values below.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::atlas::SweepSpec;
use crate::dynamics::SpinUpProblem;
use crate::error::{ConfigIssue, Error, Result};
use crate::physical::{Material, ProtocolParams, ShapeKind};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: Material,
    pub params: ProtocolParams,
    pub shape: ShapeKind,
    pub radius_range: (f64, f64),
    pub omega_range: (f64, f64),
    pub n_radius: usize,
    pub n_omega: usize,
    pub relax: f64,
    pub out_dir: PathBuf,
    /// Relative tolerance of the spin-up integrator.
    pub tol: f64,
    pub dyn_inertia: f64,
    pub dyn_tau_max: f64,
    pub dyn_theta0: f64,
    pub dyn_duration: f64,
    /// Initial angles scanned by `fit-t0`.
    pub fit_theta0: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let sweep = SweepSpec::standard(ShapeKind::Sphere);
        RunConfig {
            material: Material::default(),
            params: ProtocolParams::default(),
            shape: ShapeKind::Sphere,
            radius_range: sweep.radius_range,
            omega_range: sweep.omega_range,
            n_radius: sweep.n_radius,
            n_omega: sweep.n_omega,
            relax: 1.0,
            out_dir: PathBuf::from("out"),
            tol: 1e-6,
            dyn_inertia: 1.0,
            dyn_tau_max: 1.0,
            dyn_theta0: 1e-6,
            dyn_duration: 30.0,
            fit_theta0: vec![1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3],
        }
    }
}

const KEYS: &[&str] = &[
    "rho",
    "B_r",
    "v_s",
    "T2",
    "T3",
    "T4",
    "p",
    "E_field",
    "B_field",
    "r_min",
    "phi_min",
    "shape",
    "R_min",
    "R_max",
    "omega_min",
    "omega_max",
    "nR",
    "nOmega",
    "relax",
    "out_dir",
    "tol",
    "dyn_I",
    "dyn_tau_max",
    "dyn_theta0",
    "dyn_duration",
    "fit_theta0",
];

fn parse_f64(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("'{v}' is not a number"))
}

fn parse_count(v: &str) -> std::result::Result<usize, String> {
    v.parse::<usize>()
        .map_err(|_| format!("'{v}' is not a non-negative integer"))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut issues = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                issues.push(ConfigIssue::new(
                    line,
                    format!("expected 'key = value', got '{content}'"),
                ));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            let Some(&known) = KEYS.iter().find(|k| **k == key) else {
                issues.push(ConfigIssue::new(line, format!("unknown key '{key}'")));
                continue;
            };
            if let Some(first) = seen.insert(known, line) {
                issues.push(ConfigIssue::new(line, format!("'{key}' already set on line {first}")));
                continue;
            }
            if let Err(msg) = cfg.set(known, value) {
                issues.push(ConfigIssue::new(line, format!("{key}: {msg}")));
            }
        }

        let line_of = |key: &str| seen.get(key).copied().unwrap_or(0);
        let mut reported: Vec<String> = Vec::new();
        for (keys, result) in cfg.checks() {
            if let Err(e) = result {
                // the sweep check repeats the parameter checks
                let msg = e.to_string();
                if reported.contains(&msg) {
                    continue;
                }
                let line = keys.iter().map(|k| line_of(k)).max().unwrap_or(0);
                issues.push(ConfigIssue::new(line, msg.clone()));
                reported.push(msg);
            }
        }

        if issues.is_empty() {
            Ok(cfg)
        } else {
            issues.sort_by_key(|i| i.line);
            Err(Error::Config(issues))
        }
    }

    fn set(&mut self, key: &str, v: &str) -> std::result::Result<(), String> {
        match key {
            "rho" => self.material.density = parse_f64(v)?,
            "B_r" => self.material.remanence = parse_f64(v)?,
            "v_s" => self.material.sound_speed = parse_f64(v)?,
            "T2" => self.params.t2 = parse_f64(v)?,
            "T3" => self.params.t3 = parse_f64(v)?,
            "T4" => self.params.t4 = parse_f64(v)?,
            "p" => self.params.dipole = parse_f64(v)?,
            "E_field" => self.params.e_field = parse_f64(v)?,
            "B_field" => self.params.b_field = parse_f64(v)?,
            "r_min" => self.params.r_min = parse_f64(v)?,
            "phi_min" => self.params.phi_min = parse_f64(v)?,
            "shape" => self.shape = v.parse().map_err(|e: Error| e.to_string())?,
            "R_min" => self.radius_range.0 = parse_f64(v)?,
            "R_max" => self.radius_range.1 = parse_f64(v)?,
            "omega_min" => self.omega_range.0 = parse_f64(v)?,
            "omega_max" => self.omega_range.1 = parse_f64(v)?,
            "nR" => self.n_radius = parse_count(v)?,
            "nOmega" => self.n_omega = parse_count(v)?,
            "relax" => self.relax = parse_f64(v)?,
            "out_dir" => {
                if v.is_empty() {
                    return Err("empty path".into());
                }
                self.out_dir = PathBuf::from(v)
            }
            "tol" => self.tol = parse_f64(v)?,
            "dyn_I" => self.dyn_inertia = parse_f64(v)?,
            "dyn_tau_max" => self.dyn_tau_max = parse_f64(v)?,
            "dyn_theta0" => self.dyn_theta0 = parse_f64(v)?,
            "dyn_duration" => self.dyn_duration = parse_f64(v)?,
            "fit_theta0" => {
                self.fit_theta0 = v
                    .split(',')
                    .map(|s| parse_f64(s.trim()))
                    .collect::<std::result::Result<_, _>>()?;
                if self.fit_theta0.is_empty() {
                    return Err("empty list".into());
                }
            }
            _ => unreachable!("key list and setter out of sync: {key}"),
        }
        Ok(())
    }

    /// Semantic checks, each tagged with the keys it depends on.
    fn checks(&self) -> Vec<(&'static [&'static str], Result<()>)> {
        let tol_check = if self.tol > 0.0 && self.tol <= 1e-2 {
            Ok(())
        } else {
            Err(Error::domain(format!("tol must lie in (0, 1e-2], got {}", self.tol)))
        };
        let fit_check = match self.fit_theta0.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            Some(t) => Err(Error::domain(format!("fit_theta0 entries must lie in (0, 1), got {t}"))),
            None => Ok(()),
        };
        vec![
            (&["rho", "B_r", "v_s"][..], self.material.validate()),
            (
                &["T2", "T3", "T4", "p", "E_field", "B_field", "r_min", "phi_min"][..],
                self.params.validate(),
            ),
            (
                &["R_min", "R_max", "omega_min", "omega_max", "nR", "nOmega", "relax"][..],
                self.sweep_spec().validate(),
            ),
            (&["tol"][..], tol_check),
            (
                &["dyn_I", "dyn_tau_max", "dyn_theta0", "dyn_duration"][..],
                self.spin_up_problem().map(|_| ()),
            ),
            (&["fit_theta0"][..], fit_check),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let issues: Vec<ConfigIssue> = self
            .checks()
            .into_iter()
            .filter_map(|(_, r)| r.err().map(|e| ConfigIssue::new(0, e.to_string())))
            .collect();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(issues))
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            radius_range: self.radius_range,
            omega_range: self.omega_range,
            n_radius: self.n_radius,
            n_omega: self.n_omega,
            shape: self.shape,
            params: self.params,
            material: self.material,
            relax: self.relax,
        }
    }

    pub fn spin_up_problem(&self) -> Result<SpinUpProblem> {
        SpinUpProblem::new(self.dyn_inertia, self.dyn_tau_max, self.dyn_theta0, self.dyn_duration)
    }

    /// Serialises every key in a fixed order; parsing the output gives back
    /// an identical config.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("rho", format!("{:?}", self.material.density));
        put("B_r", format!("{:?}", self.material.remanence));
        put("v_s", format!("{:?}", self.material.sound_speed));
        put("T2", format!("{:?}", self.params.t2));
        put("T3", format!("{:?}", self.params.t3));
        put("T4", format!("{:?}", self.params.t4));
        put("p", format!("{:?}", self.params.dipole));
        put("E_field", format!("{:?}", self.params.e_field));
        put("B_field", format!("{:?}", self.params.b_field));
        put("r_min", format!("{:?}", self.params.r_min));
        put("phi_min", format!("{:?}", self.params.phi_min));
        put("shape", self.shape.name().to_string());
        put("R_min", format!("{:?}", self.radius_range.0));
        put("R_max", format!("{:?}", self.radius_range.1));
        put("omega_min", format!("{:?}", self.omega_range.0));
        put("omega_max", format!("{:?}", self.omega_range.1));
        put("nR", self.n_radius.to_string());
        put("nOmega", self.n_omega.to_string());
        put("relax", format!("{:?}", self.relax));
        put("out_dir", self.out_dir.display().to_string());
        put("tol", format!("{:?}", self.tol));
        put("dyn_I", format!("{:?}", self.dyn_inertia));
        put("dyn_tau_max", format!("{:?}", self.dyn_tau_max));
        put("dyn_theta0", format!("{:?}", self.dyn_theta0));
        put("dyn_duration", format!("{:?}", self.dyn_duration));
        put(
            "fit_theta0",
            self.fit_theta0
                .iter()
                .map(|t| format!("{t:?}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIPPED: &str = include_str!("../../../paper_defaults.cfg");

    fn lines(e: Error) -> Vec<usize> {
        match e {
            Error::Config(issues) => issues.iter().map(|i| i.line).collect(),
            other => panic!("expected config error, got {other}"),
        }
    }

    #[test]
    fn shipped_defaults_match_builtin() {
        let cfg = RunConfig::parse(SHIPPED).unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg = RunConfig::parse("# header\n\n  T3 = 500  # shorter ramp\nshape=disc\n").unwrap();
        assert_eq!(cfg.params.t3, 500.0);
        assert_eq!(cfg.shape, ShapeKind::Disc);
    }

    #[test]
    fn unknown_and_duplicate_keys() {
        let e = RunConfig::parse("T3 = 1\nfoo = 2\nT3 = 3\n").unwrap_err();
        assert_eq!(lines(e), [2, 3]);
    }

    #[test]
    fn all_errors_are_reported() {
        let e = RunConfig::parse("rho = heavy\nno equals sign\nnR = -4\nT4 = 0\n").unwrap_err();
        assert_eq!(lines(e), [1, 2, 3, 4]);
    }

    #[test]
    fn semantic_errors_point_at_the_key() {
        let e = RunConfig::parse("tol = 1\n\nR_min = 2\n").unwrap_err();
        assert_eq!(lines(e), [1, 3]);
        let e = RunConfig::parse("fit_theta0 = 1e-3, 2\n").unwrap_err();
        assert_eq!(lines(e), [1]);
    }

    #[test]
    fn round_trip_of_defaults() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::parse(&cfg.to_config_string()).unwrap(), cfg);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn round_trip(
                rho in 1.0f64..1e5, t3 in 1.0f64..1e5, phi_min in 1e-9f64..1.0,
                disc in any::<bool>(), n in 2usize..512, relax in 1.0f64..10.0,
                tol in 1e-10f64..1e-2, thetas in prop::collection::vec(1e-12f64..0.9, 1..6),
            ) {
                let mut cfg = RunConfig::default();
                cfg.material.density = rho;
                cfg.params.t3 = t3;
                cfg.params.phi_min = phi_min;
                cfg.shape = if disc { ShapeKind::Disc } else { ShapeKind::Sphere };
                cfg.n_omega = n;
                cfg.relax = relax;
                cfg.tol = tol;
                cfg.fit_theta0 = thetas;
                let back = RunConfig::parse(&cfg.to_config_string()).unwrap();
                prop_assert_eq!(back, cfg);
            }
        }
    }
}
