//! Flat `key = value` run configuration.
//!
//! ```text
//! # two linked circles
//! curve.1.preset = linked-circles-neg:1
//! curve.2.preset = linked-circles-neg:2
//! curve.1.nodes = 200
//! flow.1.a = 1.0
//! biot.delta = 0.1
//! step.tolerance = 1e-3
//! sim.t_end = 0.146
//! sim.dt_out = 0.031
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::forces::BiotSavartParams;
use crate::integrator::StepControl;
use crate::scheme::FlowParams;

pub const DEFAULT_NODES: usize = 200;

/// Valid keys; `<i>` is a 1-based curve index.
pub const VALID_KEYS: &[&str] = &[
    "curve.<i>.preset",
    "curve.<i>.file",
    "curve.<i>.nodes",
    "curve.<i>.uniformize",
    "flow.<i>.a",
    "flow.<i>.b",
    "biot.delta",
    "biot.epsilon",
    "step.tolerance",
    "step.dt_init",
    "step.dt_min",
    "step.dt_max",
    "step.safety",
    "sim.t_end",
    "sim.dt_out",
    "sim.redistribution",
    "sim.output",
];

#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Preset(String),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct CurveSpec {
    pub source: CurveSource,
    /// Node count; `None` keeps a file curve's own nodes.
    pub nodes: Option<usize>,
    pub uniformize: bool,
    pub flow: FlowParams,
}

/// Fully resolved simulation settings.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub curves: Vec<CurveSpec>,
    pub biot: BiotSavartParams,
    pub step: StepControl,
    pub redistribution: bool,
    pub t_end: f64,
    pub dt_out: f64,
    pub output: Option<PathBuf>,
}

impl SimulationConfig {
    /// Config with the given curves and all other settings at their defaults.
    pub fn with_curves(curves: Vec<CurveSpec>, t_end: f64, dt_out: f64) -> Self {
        let max_nodes = curves.iter().map(|c| c.nodes.unwrap_or(DEFAULT_NODES)).max().unwrap_or(DEFAULT_NODES);
        SimulationConfig {
            curves,
            biot: BiotSavartParams::default(),
            step: StepControl::for_resolution(max_nodes),
            redistribution: true,
            t_end,
            dt_out,
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.curves.is_empty() {
            return Err(Error::InvalidParameter("at least one curve is required".into()));
        }
        for (i, c) in self.curves.iter().enumerate() {
            c.flow
                .validate()
                .map_err(|e| Error::InvalidParameter(format!("curve {}: {e}", i + 1)))?;
            if matches!(c.nodes, Some(m) if m < 3) {
                return Err(Error::InvalidParameter(format!("curve {}: nodes must be >= 3", i + 1)));
            }
            if let CurveSource::Preset(name) = &c.source {
                crate::curves::preset(name)?;
            }
        }
        self.biot.validate()?;
        self.step.validate()?;
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.dt_out > 0.0 && self.dt_out.is_finite()) {
            return Err(Error::InvalidParameter(format!("dt_out must be positive, got {}", self.dt_out)));
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RawConfig::parse(&text)?.resolve()
    }

    /// Resolved configuration as `key = value` lines, in a form [`RawConfig::parse`] accepts.
    pub fn to_manifest(&self) -> String {
        let mut out = String::new();
        for (idx, c) in self.curves.iter().enumerate() {
            let i = idx + 1;
            match &c.source {
                CurveSource::Preset(p) => writeln!(out, "curve.{i}.preset = {p}"),
                CurveSource::File(f) => writeln!(out, "curve.{i}.file = {}", f.display()),
            }
            .unwrap();
            if let Some(m) = c.nodes {
                writeln!(out, "curve.{i}.nodes = {m}").unwrap();
            }
            writeln!(out, "curve.{i}.uniformize = {}", c.uniformize).unwrap();
            match (c.flow.a.as_constant(), c.flow.b.as_constant()) {
                (Some(a), Some(b)) => {
                    writeln!(out, "flow.{i}.a = {a:?}").unwrap();
                    writeln!(out, "flow.{i}.b = {b:?}").unwrap();
                }
                _ => writeln!(out, "# flow.{i}: position-dependent coefficients").unwrap(),
            }
        }
        writeln!(out, "biot.delta = {:?}", self.biot.delta).unwrap();
        writeln!(out, "biot.epsilon = {:?}", self.biot.epsilon).unwrap();
        writeln!(out, "step.tolerance = {:?}", self.step.tolerance).unwrap();
        writeln!(out, "step.dt_init = {:?}", self.step.initial_dt).unwrap();
        writeln!(out, "step.dt_min = {:?}", self.step.dt_min).unwrap();
        writeln!(out, "step.dt_max = {:?}", self.step.dt_max).unwrap();
        writeln!(out, "step.safety = {:?}", self.step.safety_factor).unwrap();
        writeln!(out, "sim.t_end = {:?}", self.t_end).unwrap();
        writeln!(out, "sim.dt_out = {:?}", self.dt_out).unwrap();
        writeln!(out, "sim.redistribution = {}", if self.redistribution { "on" } else { "off" }).unwrap();
        if let Some(o) = &self.output {
            writeln!(out, "sim.output = {}", o.display()).unwrap();
        }
        out
    }
}

/// Unresolved key/value pairs with their source line (`None` for overrides).
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

fn key_error(line: Option<usize>, key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        message: message.into(),
    }
}

/// Checks a key against [`VALID_KEYS`], returning the curve index if any.
fn classify_key(key: &str) -> std::result::Result<Option<usize>, String> {
    let parts: Vec<&str> = key.split('.').collect();
    let pattern = match parts.as_slice() {
        [section @ ("curve" | "flow"), idx, field] => {
            let i: usize = idx
                .parse()
                .ok()
                .filter(|&i| i >= 1)
                .ok_or_else(|| format!("curve index `{idx}` must be a positive integer"))?;
            let pattern = format!("{section}.<i>.{field}");
            if VALID_KEYS.contains(&pattern.as_str()) {
                return Ok(Some(i));
            }
            pattern
        }
        _ => key.to_string(),
    };
    if VALID_KEYS.contains(&pattern.as_str()) {
        Ok(None)
    } else {
        Err(format!("unknown key; valid keys are: {}", VALID_KEYS.join(", ")))
    }
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (n, line) in text.lines().enumerate() {
            let lineno = n + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| key_error(Some(lineno), content, "expected `key = value`"))?;
            raw.insert(key.trim(), value.trim(), Some(lineno))?;
        }
        Ok(raw)
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| key_error(None, assignment, "override must be `key=value`"))?;
        self.insert(key.trim(), value.trim(), None)
    }

    fn insert(&mut self, key: &str, value: &str, line: Option<usize>) -> Result<()> {
        classify_key(key).map_err(|m| key_error(line, key, m))?;
        if value.is_empty() {
            return Err(key_error(line, key, "empty value"));
        }
        self.entries.insert(key.to_string(), (value.to_string(), line));
        Ok(())
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => v
                .parse()
                .map(Some)
                .map_err(|_| key_error(*line, key, format!("cannot parse value `{v}`"))),
        }
    }

    fn get_bool(&self, key: &str) -> Result<Option<bool>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some((v, line)) => match v.as_str() {
                "on" | "true" | "yes" | "1" => Ok(Some(true)),
                "off" | "false" | "no" | "0" => Ok(Some(false)),
                _ => Err(key_error(*line, key, format!("expected on/off, got `{v}`"))),
            },
        }
    }

    fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).and_then(|(_, l)| *l)
    }

    pub fn resolve(&self) -> Result<SimulationConfig> {
        let mut count = 0;
        for key in self.entries.keys() {
            if let Ok(Some(i)) = classify_key(key) {
                count = count.max(i);
            }
        }
        if count == 0 {
            return Err(key_error(None, "curve.1.preset", "no curves configured"));
        }

        let mut curves = Vec::with_capacity(count);
        for i in 1..=count {
            let preset_key = format!("curve.{i}.preset");
            let file_key = format!("curve.{i}.file");
            let source = match (self.get::<String>(&preset_key)?, self.get::<String>(&file_key)?) {
                (Some(p), None) => {
                    crate::curves::preset(&p)
                        .map_err(|e| key_error(self.line_of(&preset_key), &preset_key, e.to_string()))?;
                    CurveSource::Preset(p)
                }
                (None, Some(f)) => CurveSource::File(PathBuf::from(f)),
                (Some(_), Some(_)) => {
                    return Err(key_error(self.line_of(&file_key), &file_key, "curve has both a preset and a file"))
                }
                (None, None) => {
                    return Err(key_error(None, &preset_key, format!("curve {i} needs a preset or a file")))
                }
            };
            let nodes_key = format!("curve.{i}.nodes");
            let nodes = self.get::<usize>(&nodes_key)?;
            if matches!(nodes, Some(m) if m < 3) {
                return Err(key_error(self.line_of(&nodes_key), &nodes_key, "at least 3 nodes are needed"));
            }
            let nodes = match source {
                CurveSource::Preset(_) => Some(nodes.unwrap_or(DEFAULT_NODES)),
                CurveSource::File(_) => nodes,
            };
            let uniformize = self.get_bool(&format!("curve.{i}.uniformize"))?.unwrap_or(true);
            let a_key = format!("flow.{i}.a");
            let a = self.get::<f64>(&a_key)?.unwrap_or(1.0);
            if !(a >= 0.0 && a.is_finite()) {
                return Err(key_error(self.line_of(&a_key), &a_key, "a must be finite and >= 0"));
            }
            let b = self.get::<f64>(&format!("flow.{i}.b"))?.unwrap_or(0.0);
            curves.push(CurveSpec {
                source,
                nodes,
                uniformize,
                flow: FlowParams::constant(a, b),
            });
        }

        let biot = BiotSavartParams {
            delta: self.get("biot.delta")?.unwrap_or(0.1),
            epsilon: self.get("biot.epsilon")?.unwrap_or(1e-3),
        };
        biot.validate()
            .map_err(|e| key_error(self.line_of("biot.epsilon").or(self.line_of("biot.delta")), "biot", e.to_string()))?;

        let max_nodes = curves.iter().map(|c| c.nodes.unwrap_or(DEFAULT_NODES)).max().unwrap_or(DEFAULT_NODES);
        let defaults = StepControl::for_resolution(max_nodes);
        let step = StepControl {
            tolerance: self.get("step.tolerance")?.unwrap_or(defaults.tolerance),
            initial_dt: self.get("step.dt_init")?.unwrap_or(defaults.initial_dt),
            dt_min: self.get("step.dt_min")?.unwrap_or(defaults.dt_min),
            dt_max: self.get("step.dt_max")?.unwrap_or(defaults.dt_max),
            safety_factor: self.get("step.safety")?.unwrap_or(defaults.safety_factor),
        };
        step.validate().map_err(|e| key_error(None, "step", e.to_string()))?;

        let t_end: f64 = self
            .get("sim.t_end")?
            .ok_or_else(|| key_error(None, "sim.t_end", "missing end time"))?;
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(key_error(self.line_of("sim.t_end"), "sim.t_end", "must be positive"));
        }
        let dt_out: f64 = self.get("sim.dt_out")?.unwrap_or(t_end);
        if !(dt_out > 0.0 && dt_out.is_finite()) {
            return Err(key_error(self.line_of("sim.dt_out"), "sim.dt_out", "must be positive"));
        }

        Ok(SimulationConfig {
            curves,
            biot,
            step,
            redistribution: self.get_bool("sim.redistribution")?.unwrap_or(true),
            t_end,
            dt_out,
            output: self.get::<String>("sim.output")?.map(PathBuf::from),
        })
    }
}
