//! Flat `key = value` job files.
//!
//! One assignment per line, `#` starts a comment, keys may appear once.
//! Unknown keys, malformed values and out-of-range parameters are rejected
//! with the line they came from. Values given with `--override` report
//! line 0.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evolution::SimConfig;
use crate::functionals::ActionConvention;
use crate::ground_state::GroundStateOptions;
use crate::specfun::eigenvalue_alpha;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Groundstate,
    Evolve,
    BlowupDemo,
    VirialScan,
    Inequalities,
    Spectrum,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Groundstate,
        Command::Evolve,
        Command::BlowupDemo,
        Command::VirialScan,
        Command::Inequalities,
        Command::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Groundstate => "groundstate",
            Command::Evolve => "evolve",
            Command::BlowupDemo => "blowup-demo",
            Command::VirialScan => "virial-scan",
            Command::Inequalities => "inequalities",
            Command::Spectrum => "spectrum",
        }
    }

    /// Keys that must be present in the file.
    pub fn mandatory(self) -> &'static [&'static str] {
        match self {
            Command::Groundstate => &["alpha", "p", "omega"],
            Command::Evolve => &["alpha", "p", "sign", "dt", "t_end"],
            Command::BlowupDemo => &["alpha", "p", "omega"],
            Command::VirialScan => &["alpha", "p"],
            Command::Inequalities => &[],
            Command::Spectrum => &["alpha"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    Gaussian,
    GaussianMass,
    ScaledGroundState,
    Snapshot,
}

impl InitialKind {
    fn name(self) -> &'static str {
        match self {
            InitialKind::Gaussian => "gaussian",
            InitialKind::GaussianMass => "gaussian_mass",
            InitialKind::ScaledGroundState => "scaled_ground_state",
            InitialKind::Snapshot => "snapshot",
        }
    }
}

impl FromStr for InitialKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            InitialKind::Gaussian,
            InitialKind::GaussianMass,
            InitialKind::ScaledGroundState,
            InitialKind::Snapshot,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| {
            format!("initial must be gaussian, gaussian_mass, scaled_ground_state or snapshot, got {s:?}")
        })
    }
}

/// Everything a command needs, with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub command: Command,
    pub sim: SimConfig,
    pub ground: GroundStateOptions,
    pub initial: InitialKind,
    pub amplitude: f64,
    pub width: f64,
    /// Gaussian data are resolvent-projected (a domain element) unless false.
    pub with_charge: bool,
    /// Projection shift; defaults to `max(λ_ref, 10/σ²)`.
    pub projection_shift: Option<f64>,
    pub mass: f64,
    pub c_max: f64,
    pub snapshot: Option<String>,
    /// Radii swept by `virial-scan`.
    pub virial_radii: Vec<f64>,
    /// Shifts at which `spectrum` tabulates `Γ` and the Green norm.
    pub shifts: Vec<f64>,
    pub members: usize,
    pub kato_pairs: usize,
    pub kato_eps: f64,
    pub kato_bound: f64,
    /// Cells per length scale for the concentrating families.
    pub cells_per_scale: usize,
}

/// Keys in emission order.
pub const KEYS: &[&str] = &[
    "alpha",
    "p",
    "sign",
    "omega",
    "dt",
    "t_end",
    "n_points",
    "r_max",
    "lambda_ref",
    "monitor_every",
    "virial_R",
    "blowup_norm_threshold",
    "dt_min",
    "adapt_tol",
    "action_convention",
    "dtau",
    "dtau_max",
    "tol_resid",
    "tol_nehari",
    "max_iters",
    "initial",
    "amplitude",
    "width",
    "with_charge",
    "projection_shift",
    "mass",
    "c_max",
    "snapshot",
    "virial_radii",
    "shifts",
    "members",
    "kato_pairs",
    "kato_eps",
    "kato_bound",
    "cells_per_scale",
];

impl JobConfig {
    pub fn defaults(command: Command) -> Self {
        let mut sim = SimConfig::default();
        let mut initial = InitialKind::Gaussian;
        let mut amplitude = 1.0;
        match command {
            Command::BlowupDemo => {
                sim.p = 4.0;
                sim.dt = 2.5e-4;
                sim.dt_min = 1e-7;
                sim.t_end = 1.0;
                sim.monitor_every = 1;
                sim.blowup_norm_threshold = 15.0;
                initial = InitialKind::ScaledGroundState;
            }
            Command::VirialScan => {
                sim.p = 4.0;
                sim.t_end = 1.0;
                sim.monitor_every = 10;
                amplitude = 0.5;
            }
            _ => {}
        }
        Self {
            command,
            sim,
            ground: GroundStateOptions::default(),
            initial,
            amplitude,
            width: 1.0,
            with_charge: true,
            projection_shift: None,
            mass: 1.0,
            c_max: 2.0,
            snapshot: None,
            virial_radii: vec![5.0, 10.0, 20.0],
            shifts: vec![1.0, 4.0],
            members: 50,
            kato_pairs: 100,
            kato_eps: 0.5,
            kato_bound: 5.0,
            cells_per_scale: 40,
        }
    }

    /// Parses a job file for `command`.
    pub fn parse(command: Command, text: &str) -> Result<Self> {
        Self::parse_with_overrides(command, text, &[])
    }

    /// Parses a job file, then applies `key=value` overrides.
    pub fn parse_with_overrides(command: Command, text: &str, overrides: &[String]) -> Result<Self> {
        let mut cfg = Self::defaults(command);
        let mut lines: BTreeMap<&'static str, usize> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = split_assignment(content, line)?;
            let key = canonical_key(key, line)?;
            if lines.insert(key, line).is_some() {
                return Err(config_error(line, format!("duplicate key {key:?}")));
            }
            cfg.set(key, value).map_err(|m| config_error(line, m))?;
        }
        for o in overrides {
            let (key, value) = split_assignment(o, 0)?;
            let key = canonical_key(key, 0)?;
            cfg.set(key, value)
                .map_err(|m| config_error(0, format!("override {o:?}: {m}")))?;
            lines.insert(key, 0);
        }
        if let Some(missing) = command.mandatory().iter().find(|k| !lines.contains_key(*k)) {
            return Err(config_error(
                0,
                format!("missing mandatory key {missing:?} for {command}"),
            ));
        }
        cfg.validate()
            .map_err(|(key, m)| config_error(lines.get(key).copied().unwrap_or(0), m))?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let s = &mut self.sim;
        let g = &mut self.ground;
        match key {
            "alpha" => s.alpha = num(value)?,
            "p" => s.p = num(value)?,
            "sign" => s.sign = value.parse()?,
            "omega" => s.omega = num(value)?,
            "dt" => s.dt = num(value)?,
            "t_end" => s.t_end = num(value)?,
            "n_points" => s.n_points = int(value)?,
            "r_max" => s.r_max = num(value)?,
            "lambda_ref" => s.lambda_ref = auto(value)?,
            "monitor_every" => s.monitor_every = int(value)?,
            "virial_R" => s.virial_r = auto(value)?,
            "blowup_norm_threshold" => s.blowup_norm_threshold = num(value)?,
            "dt_min" => s.dt_min = num(value)?,
            "adapt_tol" => s.adapt_tol = num(value)?,
            "action_convention" => s.action_convention = value.parse::<ActionConvention>()?,
            "dtau" => g.dtau = num(value)?,
            "dtau_max" => g.dtau_max = num(value)?,
            "tol_resid" => g.tol_resid = num(value)?,
            "tol_nehari" => g.tol_nehari = num(value)?,
            "max_iters" => g.max_iters = int(value)?,
            "initial" => self.initial = value.parse()?,
            "amplitude" => self.amplitude = num(value)?,
            "width" => self.width = num(value)?,
            "with_charge" => {
                self.with_charge = value
                    .parse()
                    .map_err(|_| format!("expected true or false, got {value:?}"))?
            }
            "projection_shift" => self.projection_shift = auto(value)?,
            "mass" => self.mass = num(value)?,
            "c_max" => self.c_max = num(value)?,
            "snapshot" => self.snapshot = (value != "none").then(|| value.to_string()),
            "virial_radii" => self.virial_radii = list(value)?,
            "shifts" => self.shifts = list(value)?,
            "members" => self.members = int(value)?,
            "kato_pairs" => self.kato_pairs = int(value)?,
            "kato_eps" => self.kato_eps = num(value)?,
            "kato_bound" => self.kato_bound = num(value)?,
            "cells_per_scale" => self.cells_per_scale = int(value)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    fn value_of(&self, key: &str) -> String {
        let s = &self.sim;
        let g = &self.ground;
        let opt = |v: Option<f64>| v.map_or("auto".to_string(), |x| format!("{x:?}"));
        let join = |v: &[f64]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ");
        match key {
            "alpha" => format!("{:?}", s.alpha),
            "p" => format!("{:?}", s.p),
            "sign" => s.sign.to_string(),
            "omega" => format!("{:?}", s.omega),
            "dt" => format!("{:?}", s.dt),
            "t_end" => format!("{:?}", s.t_end),
            "n_points" => s.n_points.to_string(),
            "r_max" => format!("{:?}", s.r_max),
            "lambda_ref" => opt(s.lambda_ref),
            "monitor_every" => s.monitor_every.to_string(),
            "virial_R" => opt(s.virial_r),
            "blowup_norm_threshold" => format!("{:?}", s.blowup_norm_threshold),
            "dt_min" => format!("{:?}", s.dt_min),
            "adapt_tol" => format!("{:?}", s.adapt_tol),
            "action_convention" => s.action_convention.to_string(),
            "dtau" => format!("{:?}", g.dtau),
            "dtau_max" => format!("{:?}", g.dtau_max),
            "tol_resid" => format!("{:?}", g.tol_resid),
            "tol_nehari" => format!("{:?}", g.tol_nehari),
            "max_iters" => g.max_iters.to_string(),
            "initial" => self.initial.name().to_string(),
            "amplitude" => format!("{:?}", self.amplitude),
            "width" => format!("{:?}", self.width),
            "with_charge" => self.with_charge.to_string(),
            "projection_shift" => opt(self.projection_shift),
            "mass" => format!("{:?}", self.mass),
            "c_max" => format!("{:?}", self.c_max),
            "snapshot" => self.snapshot.clone().unwrap_or_else(|| "none".into()),
            "virial_radii" => join(&self.virial_radii),
            "shifts" => join(&self.shifts),
            "members" => self.members.to_string(),
            "kato_pairs" => self.kato_pairs.to_string(),
            "kato_eps" => format!("{:?}", self.kato_eps),
            "kato_bound" => format!("{:?}", self.kato_bound),
            "cells_per_scale" => self.cells_per_scale.to_string(),
            _ => unreachable!("emit covers KEYS"),
        }
    }

    /// Canonical text with every key; `parse(emit(c)) == c`.
    pub fn emit(&self) -> String {
        let mut out = format!("# {} job\n", self.command);
        for key in KEYS {
            out.push_str(&format!("{key} = {}\n", self.value_of(key)));
        }
        out
    }

    /// Range checks, reporting the offending key.
    fn validate(&self) -> std::result::Result<(), (&'static str, String)> {
        let s = &self.sim;
        if !s.alpha.is_finite() {
            return Err(("alpha", format!("alpha must be finite, got {}", s.alpha)));
        }
        if !(s.p > 1.0) || !s.p.is_finite() {
            return Err(("p", format!("p > 1 is required, got {}", s.p)));
        }
        let needs_omega = matches!(self.command, Command::Groundstate | Command::BlowupDemo)
            || self.initial == InitialKind::ScaledGroundState && self.command != Command::Inequalities;
        let e = eigenvalue_alpha(s.alpha).abs();
        if needs_omega && !(s.omega > e) {
            return Err((
                "omega",
                format!("omega > |e_alpha| = {e} is required, got {}", s.omega),
            ));
        }
        if s.n_points < 16 {
            return Err((
                "n_points",
                format!("n_points must be at least 16, got {}", s.n_points),
            ));
        }
        if !(s.r_max > 0.0) || !s.r_max.is_finite() {
            return Err(("r_max", format!("r_max must be positive, got {}", s.r_max)));
        }
        if let Some(l) = s.lambda_ref {
            if !(l > e) {
                return Err((
                    "lambda_ref",
                    format!("lambda_ref > |e_alpha| = {e} is required, got {l}"),
                ));
            }
        }
        if let Some(mu) = self.projection_shift {
            if !(mu > e) {
                return Err((
                    "projection_shift",
                    format!("projection_shift > |e_alpha| = {e} is required, got {mu}"),
                ));
            }
        }
        if !(s.dt > 0.0) {
            return Err(("dt", format!("dt must be positive, got {}", s.dt)));
        }
        if !(s.t_end > 0.0) {
            return Err(("t_end", format!("t_end must be positive, got {}", s.t_end)));
        }
        if s.monitor_every == 0 {
            return Err(("monitor_every", "monitor_every must be at least 1".into()));
        }
        if let Some(r) = s.virial_r {
            if !(r > 0.0) {
                return Err(("virial_R", format!("virial_R must be positive, got {r}")));
            }
        }
        if !(s.blowup_norm_threshold > 1.0) {
            return Err((
                "blowup_norm_threshold",
                "blowup_norm_threshold must exceed 1".into(),
            ));
        }
        if !(s.dt_min > 0.0) || s.dt_min > s.dt {
            return Err(("dt_min", format!("dt_min must lie in (0, dt], got {}", s.dt_min)));
        }
        if !(s.adapt_tol >= 0.0) {
            return Err(("adapt_tol", "adapt_tol must be non-negative".into()));
        }
        let g = &self.ground;
        if !(g.dtau > 0.0) || !(g.dtau_max >= g.dtau) {
            return Err(("dtau", "need 0 < dtau <= dtau_max".into()));
        }
        if !(g.tol_resid > 0.0) || !(g.tol_nehari > 0.0) {
            return Err(("tol_resid", "tolerances must be positive".into()));
        }
        if !(self.width > 0.0) {
            return Err(("width", format!("width must be positive, got {}", self.width)));
        }
        if !(self.mass >= 0.0) {
            return Err(("mass", format!("mass must be non-negative, got {}", self.mass)));
        }
        if !(self.c_max > 1.0) {
            return Err(("c_max", format!("c_max must exceed 1, got {}", self.c_max)));
        }
        if self.initial == InitialKind::Snapshot && self.snapshot.is_none() {
            return Err(("initial", "initial = snapshot needs a snapshot path".into()));
        }
        if self.virial_radii.is_empty() || self.virial_radii.iter().any(|r| !(*r > 0.0)) {
            return Err(("virial_radii", "virial_radii must be positive".into()));
        }
        if self.shifts.iter().any(|l| !(*l > 0.0)) {
            return Err(("shifts", "shifts must be positive".into()));
        }
        if !(self.kato_eps > 0.0 && self.kato_eps < 1.0) {
            return Err((
                "kato_eps",
                format!("kato_eps must lie in (0, 1), got {}", self.kato_eps),
            ));
        }
        if !(self.kato_bound > 0.0) {
            return Err(("kato_bound", "kato_bound must be positive".into()));
        }
        if self.cells_per_scale < 4 {
            return Err(("cells_per_scale", "cells_per_scale must be at least 4".into()));
        }
        Ok(())
    }
}

fn config_error(line: usize, msg: String) -> Error {
    Error::Config { line, msg }
}

fn split_assignment(content: &str, line: usize) -> Result<(&str, &str)> {
    let (key, value) = content
        .split_once('=')
        .ok_or_else(|| config_error(line, format!("expected key = value, got {content:?}")))?;
    let (key, value) = (key.trim(), value.trim());
    if key.is_empty() || value.is_empty() {
        return Err(config_error(
            line,
            format!("expected key = value, got {content:?}"),
        ));
    }
    Ok((key, value))
}

fn canonical_key(key: &str, line: usize) -> Result<&'static str> {
    KEYS.iter()
        .copied()
        .find(|k| *k == key)
        .ok_or_else(|| config_error(line, format!("unknown key {key:?}")))
}

fn num(v: &str) -> std::result::Result<f64, String> {
    v.parse::<f64>().map_err(|_| format!("malformed number {v:?}"))
}

fn int(v: &str) -> std::result::Result<usize, String> {
    v.parse::<usize>().map_err(|_| format!("malformed integer {v:?}"))
}

fn auto(v: &str) -> std::result::Result<Option<f64>, String> {
    if v == "auto" {
        Ok(None)
    } else {
        num(v).map(Some)
    }
}

fn list(v: &str) -> std::result::Result<Vec<f64>, String> {
    v.split(',').map(|x| num(x.trim())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::Sign;

    #[test]
    fn minimal_evolve_fills_defaults() {
        let c = JobConfig::parse(
            Command::Evolve,
            "alpha = 0\np = 3\nsign = defocusing\ndt = 1e-3\nt_end = 1\n",
        )
        .unwrap();
        assert_eq!(c.sim.n_points, 4096);
        assert_eq!(c.sim.r_max, 40.0);
        assert_eq!(c.sim.lambda_ref, None);
        assert_eq!(c.sim.sign, Sign::Defocusing);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "alpha = 0\n# note\np = 0.5\nsign = focusing\ndt = 1e-3\nt_end = 1\n";
        match JobConfig::parse(Command::Evolve, text) {
            Err(Error::Config { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("p > 1"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        match JobConfig::parse(Command::Spectrum, "alpha = 0\nbogus = 1\n") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
