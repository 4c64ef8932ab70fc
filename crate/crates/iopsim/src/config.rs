//! Run configuration: which scenario, its parameters, seed, `ħ` and
//! tolerance overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use iopsim_core::dynamics::DEFAULT_HBAR;
use iopsim_core::scenarios::{
    self, CatParams, ScenarioConfig, ScenarioReport, SternGerlachParams, TwoSlitParams,
};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::error::CliError;

pub const SCENARIOS: [&str; 4] = ["stern-gerlach", "cat", "spin-one", "two-slit"];

fn default_hbar() -> f64 {
    DEFAULT_HBAR
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    #[serde(default)]
    pub params: BTreeMap<String, Json>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    /// Overrides keyed by tolerance name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// A scenario with fully parsed parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioSpec {
    SternGerlach(SternGerlachParams),
    Cat(CatParams),
    SpinOne,
    TwoSlit(TwoSlitParams),
}

impl ScenarioSpec {
    pub fn run(&self, cfg: &ScenarioConfig) -> Result<ScenarioReport, CliError> {
        Ok(match self {
            ScenarioSpec::SternGerlach(p) => scenarios::stern_gerlach(*p, cfg)?,
            ScenarioSpec::Cat(p) => scenarios::cat(*p, cfg)?,
            ScenarioSpec::SpinOne => scenarios::spin_one_example(cfg)?,
            ScenarioSpec::TwoSlit(p) => scenarios::two_slit(p, cfg)?,
        })
    }
}

impl RunConfig {
    pub fn new(scenario: &str) -> Self {
        Self {
            scenario: scenario.to_string(),
            params: BTreeMap::new(),
            seed: 0,
            hbar: DEFAULT_HBAR,
            tolerances: BTreeMap::new(),
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("run config: {e}")))
    }

    pub fn scenario_config(&self) -> Result<ScenarioConfig, CliError> {
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(CliError::BadParameter(format!("hbar must be positive, got {}", self.hbar)));
        }
        let mut cfg = ScenarioConfig {
            hbar: self.hbar,
            seed: self.seed,
            ..ScenarioConfig::default()
        };
        for (name, value) in &self.tolerances {
            cfg.tolerances
                .set(name, *value)
                .map_err(|e| CliError::BadParameter(e.to_string()))?;
        }
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<ScenarioSpec, CliError> {
        let mut p = Params::new(&self.params);
        let spec = match self.scenario.as_str() {
            "stern-gerlach" => {
                let mut s = SternGerlachParams::default();
                p.real("p_up", &mut s.p_up_prior)?;
                ScenarioSpec::SternGerlach(s)
            }
            "cat" => {
                let mut s = CatParams::default();
                p.real("p_plus", &mut s.p_plus)?;
                p.count("steps", &mut s.steps)?;
                p.real("dt", &mut s.dt)?;
                ScenarioSpec::Cat(s)
            }
            "spin-one" => ScenarioSpec::SpinOne,
            "two-slit" => {
                let mut s = TwoSlitParams::default();
                p.count("grid", &mut s.grid_n)?;
                p.real("p_pass", &mut s.p_pass)?;
                p.count("steps", &mut s.steps)?;
                p.real("dt", &mut s.dt)?;
                p.real("width", &mut s.packet_width)?;
                p.slits("slits", &mut s.slits)?;
                ScenarioSpec::TwoSlit(s)
            }
            other => return Err(CliError::UnknownScenario(other.to_string())),
        };
        p.finish(&self.scenario)?;
        Ok(spec)
    }

    pub fn run(&self) -> Result<ScenarioReport, CliError> {
        let cfg = self.scenario_config()?;
        self.spec()?.run(&cfg)
    }
}

/// Consumes parameters by key; anything left over is rejected.
struct Params<'a> {
    map: &'a BTreeMap<String, Json>,
    used: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, Json>) -> Self {
        Self { map, used: Vec::new() }
    }

    fn take(&mut self, key: &'static str) -> Option<&'a Json> {
        self.used.push(key);
        self.map.get(key)
    }

    fn real(&mut self, key: &'static str, slot: &mut f64) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *slot = v
                .as_f64()
                .ok_or_else(|| CliError::BadParameter(format!("`{key}` must be a number, got {v}")))?;
        }
        Ok(())
    }

    fn count(&mut self, key: &'static str, slot: &mut usize) -> Result<(), CliError> {
        if let Some(v) = self.take(key) {
            *slot = v
                .as_u64()
                .and_then(|n| usize::try_from(n).ok())
                .ok_or_else(|| CliError::BadParameter(format!("`{key}` must be a non-negative integer, got {v}")))?;
        }
        Ok(())
    }

    fn slits(&mut self, key: &'static str, slot: &mut Vec<(usize, usize)>) -> Result<(), CliError> {
        match self.take(key) {
            None => Ok(()),
            Some(Json::String(s)) => {
                *slot = parse_slits(s)?;
                Ok(())
            }
            Some(Json::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for item in items {
                    let pair = item
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
                        .ok_or_else(|| CliError::BadParameter(format!("slit must be [start, end], got {item}")))?;
                    out.push(pair);
                }
                *slot = out;
                Ok(())
            }
            Some(v) => Err(CliError::BadParameter(format!(
                "`{key}` must be \"a:b,c:d\" or [[a, b], ...], got {v}"
            ))),
        }
    }

    fn finish(self, scenario: &str) -> Result<(), CliError> {
        for key in self.map.keys() {
            if !self.used.contains(&key.as_str()) {
                let known = if self.used.is_empty() {
                    String::from("none")
                } else {
                    self.used.join(", ")
                };
                return Err(CliError::BadParameter(format!(
                    "unknown parameter `{key}` for scenario `{scenario}` (known: {known})"
                )));
            }
        }
        Ok(())
    }
}

/// Parses `"a:b,c:d"` into half-open ranges.
pub fn parse_slits(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    text.split(',')
        .map(|part| {
            let (a, b) = part
                .trim()
                .split_once(':')
                .ok_or_else(|| CliError::BadParameter(format!("slit `{part}` is not start:end")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::BadParameter(format!("slit `{part}` is not start:end")))
            };
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}
