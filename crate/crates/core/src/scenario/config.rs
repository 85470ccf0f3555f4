// SPDX-License-Identifier: Apache-2.0

//! Sectioned key-value configuration.
//!
//! ```ini
//! [scenario]
//! name = fig2
//!
//! [system]
//! n_th = 150
//!
//! [initial]
//! b.n = 3
//!
//! [time]
//! t_max = 60
//! n_points = 3001
//!
//! [output]
//! dir = out/fig2
//! ```
//!
//! Every key can also be given as `section.key=value` on the command line,
//! which takes precedence over the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ini::Ini;
use serde::Serialize;

use super::{ScenarioError, ScenarioKind};
use crate::model::{DriveCase, SystemSpec};

/// Raw `section -> key -> value` text, before interpretation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let ini = Ini::load_from_str(text).map_err(|e| invalid("config", e.to_string()))?;
        let mut out = RawConfig::default();
        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let Some(section) = section else {
                    return Err(invalid(key, "key outside of any [section]"));
                };
                out.insert(section, key, value);
            }
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("--config", format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn insert(&mut self, section: &str, key: &str, value: &str) {
        self.sections
            .entry(section.trim().to_ascii_lowercase())
            .or_default()
            .insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
    }

    /// Applies one `section.key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ScenarioError> {
        let (path, value) = assignment
            .split_once('=')
            .ok_or_else(|| invalid(assignment, "expected section.key=value"))?;
        let (section, key) = path
            .split_once('.')
            .filter(|(s, k)| !s.trim().is_empty() && !k.trim().is_empty())
            .ok_or_else(|| invalid(path, "expected section.key"))?;
        self.insert(section, key, value);
        Ok(())
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections.get(section)?.get(key).map(String::as_str)
    }
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ScenarioError {
    ScenarioError::InvalidConfig {
        field: field.into(),
        message: message.into(),
    }
}

/// Initial single-mode state: thermal occupation `n` displaced by `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeInit {
    pub n: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
}

impl ModeInit {
    pub const VACUUM: ModeInit = ModeInit {
        n: 0.0,
        alpha_re: 0.0,
        alpha_im: 0.0,
    };

    pub fn thermal(n: f64) -> Self {
        ModeInit { n, ..Self::VACUUM }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeGrid {
    pub t_max: f64,
    pub n_points: usize,
}

impl TimeGrid {
    pub fn dt(&self) -> f64 {
        self.t_max / (self.n_points - 1) as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| k as f64 * self.dt())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: SweepScale,
}

impl Sweep {
    pub fn new(parameter: &str, min: f64, max: f64, count: usize) -> Self {
        Sweep {
            parameter: parameter.into(),
            min,
            max,
            count,
            scale: SweepScale::Linear,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                match self.scale {
                    SweepScale::Linear => self.min + f * (self.max - self.min),
                    SweepScale::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

/// Quantity evaluated at each point of a custom sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Largest drift real part and the Routh–Hurwitz values.
    Stability,
    /// Stationary cavity-cavity log-negativity.
    SteadyEn,
    /// Largest cavity-cavity log-negativity on the time grid.
    MaxEn,
    /// Transfer fidelity at `t0 = π/(2λ)`.
    Fidelity,
}

impl FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "stability" => Ok(Observable::Stability),
            "steady_en" => Ok(Observable::SteadyEn),
            "max_en" => Ok(Observable::MaxEn),
            "fidelity" => Ok(Observable::Fidelity),
            other => Err(format!(
                "unknown observable `{other}` (stability, steady_en, max_en, fidelity)"
            )),
        }
    }
}

/// Scenario-specific knobs from the `[scenario]` section.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioOptions {
    pub rwa: bool,
    pub alpha_re: f64,
    pub alpha_im: f64,
    /// Initial mechanical occupation.
    pub n_m: f64,
    pub n_m_values: Vec<f64>,
    pub n_th_values: Vec<f64>,
    pub q_max: u64,
    pub observable: Observable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub spec: SystemSpec,
    /// Per mode, ordered `(a1, b, a2)`.
    pub initial: [ModeInit; 3],
    pub time: TimeGrid,
    pub sweep: Option<Sweep>,
    pub options: ScenarioOptions,
    pub output_dir: PathBuf,
}

const SYSTEM_KEYS: &[&str] = &[
    "omega_m",
    "g1",
    "g2",
    "g",
    "kappa1",
    "kappa2",
    "kappa",
    "gamma_m",
    "delta1",
    "delta2",
    "delta",
    "n_th",
    "drive_case",
];

/// Keys a sweep may vary.
pub const SWEEP_PARAMETERS: &[&str] = &[
    "omega_m", "g1", "g2", "g", "kappa1", "kappa2", "kappa", "gamma_m", "delta1", "delta2",
    "delta", "n_th",
];

/// Sets one named parameter; `g`, `kappa` and `delta` set both cavities.
pub fn apply_parameter(spec: &mut SystemSpec, name: &str, value: f64) -> bool {
    match name {
        "omega_m" => spec.omega_m = value,
        "g1" => spec.g1 = value,
        "g2" => spec.g2 = value,
        "g" => (spec.g1, spec.g2) = (value, value),
        "kappa1" => spec.kappa1 = value,
        "kappa2" => spec.kappa2 = value,
        "kappa" => (spec.kappa1, spec.kappa2) = (value, value),
        "gamma_m" => spec.gamma_m = value,
        "delta1" => spec.delta1 = value,
        "delta2" => spec.delta2 = value,
        "delta" => (spec.delta1, spec.delta2) = (value, value),
        "n_th" => spec.n_th = value,
        _ => return false,
    }
    true
}

/// What each scenario reads beyond `[scenario] name` and `[output] dir`.
struct Accepts {
    system: &'static [&'static str],
    options: &'static [&'static str],
    initial: bool,
    time: bool,
    sweep: &'static [&'static str],
}

const RATES: &[&str] = &["omega_m", "kappa1", "kappa2", "kappa", "gamma_m", "n_th"];
const RATES_AND_G: &[&str] = &[
    "omega_m", "kappa1", "kappa2", "kappa", "gamma_m", "n_th", "g",
];
const RATES_AND_G_NO_BATH: &[&str] = &["omega_m", "kappa1", "kappa2", "kappa", "gamma_m", "g"];
const RATES_NO_BATH: &[&str] = &["omega_m", "kappa1", "kappa2", "kappa", "gamma_m"];

fn accepts(kind: ScenarioKind) -> Accepts {
    use ScenarioKind::*;
    match kind {
        Fig2 => Accepts {
            system: SYSTEM_KEYS,
            options: &["rwa"],
            initial: true,
            time: true,
            sweep: &[],
        },
        Fig3a => Accepts {
            system: RATES_AND_G,
            options: &["rwa", "alpha_re", "alpha_im", "n_m_values"],
            initial: false,
            time: false,
            sweep: &["delta"],
        },
        Fig3b => Accepts {
            system: RATES_AND_G_NO_BATH,
            options: &["rwa", "alpha_re", "alpha_im", "n_m", "n_th_values", "q_max"],
            initial: false,
            time: false,
            sweep: &[],
        },
        Fig3cLd => Accepts {
            system: RATES_AND_G_NO_BATH,
            options: &["rwa", "alpha_re", "alpha_im", "n_m", "q_max"],
            initial: false,
            time: false,
            sweep: &["n_th"],
        },
        Fig3cDs => Accepts {
            system: RATES_AND_G_NO_BATH,
            options: &["rwa", "alpha_re", "alpha_im", "n_m"],
            initial: false,
            time: false,
            sweep: &["n_th"],
        },
        Fig4a => Accepts {
            system: RATES,
            options: &["rwa", "n_m", "n_m_values"],
            initial: false,
            time: true,
            sweep: &[],
        },
        Fig4b => Accepts {
            system: RATES_NO_BATH,
            options: &["rwa", "n_m"],
            initial: false,
            time: true,
            sweep: &["n_th"],
        },
        Fig4c => Accepts {
            system: RATES_NO_BATH,
            options: &["rwa"],
            initial: false,
            time: false,
            sweep: &["n_th"],
        },
        CustomSweep => Accepts {
            system: SYSTEM_KEYS,
            options: &["rwa", "alpha_re", "alpha_im", "n_m", "observable"],
            initial: true,
            time: true,
            sweep: SWEEP_PARAMETERS,
        },
    }
}

impl ScenarioConfig {
    /// Figure-caption defaults for `kind`.
    pub fn defaults(kind: ScenarioKind) -> Self {
        use ScenarioKind::*;
        let mut spec = SystemSpec::default();
        let mut initial = [ModeInit::VACUUM; 3];
        let mut time = TimeGrid {
            t_max: 100.0,
            n_points: 5001,
        };
        let mut sweep = None;
        let mut options = ScenarioOptions {
            rwa: true,
            alpha_re: 1.0,
            alpha_im: 0.0,
            n_m: 20.0,
            n_m_values: vec![],
            n_th_values: vec![],
            q_max: 400,
            observable: Observable::Stability,
        };
        let fig4_rates = |spec: &mut SystemSpec| {
            spec.drive_case = DriveCase::RedBlue;
            spec.gamma_m = 2e-3;
        };
        match kind {
            Fig2 => {
                initial[0] = ModeInit::thermal(1.0);
                initial[1] = ModeInit::thermal(3.0);
            }
            Fig3a => {
                spec.n_th = 200.0;
                sweep = Some(Sweep::new("delta", 2.0, 30.0, 281));
                options.n_m_values = vec![0.0, 20.0, 40.0, 60.0, 80.0, 100.0];
            }
            Fig3b => {
                options.n_th_values = vec![0.0, 150.0, 300.0];
                options.q_max = 100;
            }
            Fig3cLd | Fig3cDs => {
                sweep = Some(Sweep::new("n_th", 0.0, 1000.0, 21));
            }
            Fig4a => {
                fig4_rates(&mut spec);
                spec.delta1 = 5.0;
                spec.delta2 = 5.0;
                spec.n_th = 1e3;
                options.n_m = 50.0;
                options.n_m_values = vec![
                    0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0,
                ];
                time = TimeGrid {
                    t_max: 100.0,
                    n_points: 10001,
                };
            }
            Fig4b => {
                fig4_rates(&mut spec);
                options.n_m = 1e3;
                sweep = Some(Sweep::new("n_th", 0.0, 2000.0, 21));
            }
            Fig4c => {
                fig4_rates(&mut spec);
                sweep = Some(Sweep::new("n_th", 0.0, 2000.0, 21));
            }
            CustomSweep => {
                sweep = Some(Sweep::new("delta", 2.0, 20.0, 10));
            }
        }
        ScenarioConfig {
            scenario: kind,
            spec,
            initial,
            time,
            sweep,
            options,
            output_dir: PathBuf::from(format!("out/{}", kind.name())),
        }
    }

    /// Interprets `raw` on top of the defaults of the named scenario.
    /// `scenario` (from the command line) wins over `[scenario] name`.
    pub fn resolve(raw: &RawConfig, scenario: Option<&str>) -> Result<Self, ScenarioError> {
        let name = scenario
            .or_else(|| raw.get("scenario", "name"))
            .ok_or_else(|| invalid("scenario.name", "no scenario given"))?;
        let kind: ScenarioKind = name
            .parse()
            .map_err(|e: String| invalid("scenario.name", e))?;
        let mut cfg = Self::defaults(kind);
        let rules = accepts(kind);

        for (section, entries) in &raw.sections {
            for (key, value) in entries {
                let field = format!("{section}.{key}");
                match section.as_str() {
                    "scenario" if key == "name" => {}
                    "scenario" if rules.options.contains(&key.as_str()) => {
                        cfg.set_option(&field, key, value)?
                    }
                    "system" if rules.system.contains(&key.as_str()) => {
                        cfg.set_system(&field, key, value)?
                    }
                    "initial" if rules.initial => cfg.set_initial(&field, key, value)?,
                    "time" if rules.time => cfg.set_time(&field, key, value)?,
                    "sweep" if !rules.sweep.is_empty() => cfg.set_sweep(&field, key, value)?,
                    "output" if key == "dir" => cfg.output_dir = PathBuf::from(value),
                    "scenario" | "system" | "initial" | "time" | "sweep" | "output" => {
                        return Err(invalid(
                            field,
                            format!("not used by scenario {}", kind.name()),
                        ));
                    }
                    _ => return Err(invalid(field, format!("unknown section [{section}]"))),
                }
            }
        }
        cfg.check(&rules)?;
        Ok(cfg)
    }

    fn set_option(&mut self, field: &str, key: &str, value: &str) -> Result<(), ScenarioError> {
        let o = &mut self.options;
        match key {
            "rwa" => o.rwa = parse_bool(field, value)?,
            "alpha_re" => o.alpha_re = parse_f64(field, value)?,
            "alpha_im" => o.alpha_im = parse_f64(field, value)?,
            "n_m" => o.n_m = non_negative(field, parse_f64(field, value)?)?,
            "n_m_values" => o.n_m_values = parse_list(field, value)?,
            "n_th_values" => o.n_th_values = parse_list(field, value)?,
            "q_max" => {
                o.q_max =
                    value.parse().ok().filter(|&q| q >= 1).ok_or_else(|| {
                        invalid(field, format!("`{value}` is not an integer >= 1"))
                    })?
            }
            "observable" => o.observable = value.parse().map_err(|e: String| invalid(field, e))?,
            _ => unreachable!("option list and setter disagree on `{key}`"),
        }
        Ok(())
    }

    fn set_system(&mut self, field: &str, key: &str, value: &str) -> Result<(), ScenarioError> {
        if key == "drive_case" {
            self.spec.drive_case =
                DriveCase::from_str(value).map_err(|e| invalid(field, e.to_string()))?;
            return Ok(());
        }
        let v = parse_f64(field, value)?;
        apply_parameter(&mut self.spec, key, v);
        Ok(())
    }

    fn set_initial(&mut self, field: &str, key: &str, value: &str) -> Result<(), ScenarioError> {
        let (mode, what) = key
            .split_once('.')
            .ok_or_else(|| invalid(field, "expected <mode>.<n|alpha_re|alpha_im>"))?;
        let idx = crate::model::MODE_LABELS
            .iter()
            .position(|l| *l == mode)
            .ok_or_else(|| invalid(field, format!("unknown mode `{mode}` (a1, b, a2)")))?;
        let v = parse_f64(field, value)?;
        let m = &mut self.initial[idx];
        match what {
            "n" => m.n = non_negative(field, v)?,
            "alpha_re" => m.alpha_re = v,
            "alpha_im" => m.alpha_im = v,
            _ => return Err(invalid(field, format!("unknown mode property `{what}`"))),
        }
        Ok(())
    }

    fn set_time(&mut self, field: &str, key: &str, value: &str) -> Result<(), ScenarioError> {
        match key {
            "t_max" => self.time.t_max = parse_f64(field, value)?,
            "n_points" => {
                self.time.n_points = value
                    .parse()
                    .map_err(|_| invalid(field, format!("`{value}` is not a count")))?
            }
            _ => return Err(invalid(field, "unknown key (t_max, n_points)")),
        }
        Ok(())
    }

    fn set_sweep(&mut self, field: &str, key: &str, value: &str) -> Result<(), ScenarioError> {
        let sweep = self
            .sweep
            .get_or_insert_with(|| Sweep::new("", 0.0, 1.0, 2));
        match key {
            "parameter" => sweep.parameter = value.to_ascii_lowercase(),
            "min" => sweep.min = parse_f64(field, value)?,
            "max" => sweep.max = parse_f64(field, value)?,
            "count" => {
                sweep.count = value
                    .parse()
                    .map_err(|_| invalid(field, format!("`{value}` is not a count")))?
            }
            "scale" => {
                sweep.scale = match value.to_ascii_lowercase().as_str() {
                    "linear" | "lin" => SweepScale::Linear,
                    "log" => SweepScale::Log,
                    other => {
                        return Err(invalid(
                            field,
                            format!("unknown scale `{other}` (linear, log)"),
                        ))
                    }
                }
            }
            _ => {
                return Err(invalid(
                    field,
                    "unknown key (parameter, min, max, count, scale)",
                ))
            }
        }
        Ok(())
    }

    fn check(&self, rules: &Accepts) -> Result<(), ScenarioError> {
        self.spec
            .validate()
            .map_err(|e| invalid("system", e.to_string()))?;
        if !(self.time.t_max > 0.0 && self.time.t_max.is_finite()) {
            return Err(invalid(
                "time.t_max",
                format!("{} must be > 0", self.time.t_max),
            ));
        }
        if self.time.n_points < 2 {
            return Err(invalid("time.n_points", "need at least 2 points"));
        }
        if let Some(s) = &self.sweep {
            if !rules.sweep.contains(&s.parameter.as_str()) {
                return Err(invalid(
                    "sweep.parameter",
                    format!(
                        "`{}` cannot be swept here (allowed: {})",
                        s.parameter,
                        rules.sweep.join(", ")
                    ),
                ));
            }
            if s.count < 2 {
                return Err(invalid("sweep.count", "need at least 2 points"));
            }
            if !(s.min.is_finite() && s.max.is_finite()) {
                return Err(invalid("sweep", "min and max must be finite"));
            }
            if s.scale == SweepScale::Log && !(s.min > 0.0 && s.max > 0.0) {
                return Err(invalid("sweep.scale", "log sweeps need min, max > 0"));
            }
            for v in s.values() {
                let mut spec = self.spec;
                apply_parameter(&mut spec, &s.parameter, v);
                spec.validate()
                    .map_err(|e| invalid("sweep", format!("at {} = {v}: {e}", s.parameter)))?;
            }
        }
        for (field, values) in [
            ("scenario.n_m_values", &self.options.n_m_values),
            ("scenario.n_th_values", &self.options.n_th_values),
        ] {
            if values.iter().any(|v| *v < 0.0) {
                return Err(invalid(field, "occupations must be >= 0"));
            }
        }
        let o = &self.options;
        if !(o.alpha_re.is_finite() && o.alpha_im.is_finite()) {
            return Err(invalid("scenario.alpha", "amplitude must be finite"));
        }
        Ok(())
    }
}

fn parse_f64(field: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| invalid(field, format!("`{value}` is not a finite number")))
}

fn non_negative(field: &str, v: f64) -> Result<f64, ScenarioError> {
    if v < 0.0 {
        return Err(invalid(field, format!("{v} must be >= 0")));
    }
    Ok(v)
}

fn parse_bool(field: &str, value: &str) -> Result<bool, ScenarioError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(invalid(field, format!("`{value}` is not a boolean"))),
    }
}

fn parse_list(field: &str, value: &str) -> Result<Vec<f64>, ScenarioError> {
    let out: Vec<f64> = value
        .split(',')
        .map(|v| parse_f64(field, v.trim()))
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(invalid(field, "empty list"));
    }
    Ok(out)
}
