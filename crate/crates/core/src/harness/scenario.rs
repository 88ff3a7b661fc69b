use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::control::{build_controller, ControllerSpec, PiGains};
use crate::error::{Error, Result};
use crate::mechanics::Pose2;
use crate::modes::{ContactMode, ModeGeometry};
use crate::world::{Episode, EpisodeStage, Integrator, ObjectParams, SimConfig};

pub const SCENARIO_SCHEMA: &str = "macro-scenario/1";

fn default_eps_pos() -> f64 {
    0.005
}
fn default_eps_ang() -> f64 {
    1f64.to_radians()
}

/// Goal tolerance on the object pose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerance {
    /// Position tolerance (m).
    #[serde(default = "default_eps_pos")]
    pub eps_pos: f64,
    /// Heading tolerance (rad).
    #[serde(default = "default_eps_ang")]
    pub eps_ang: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { eps_pos: default_eps_pos(), eps_ang: default_eps_ang() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub name: String,
    pub mode: ModeGeometry,
    pub controller: ControllerSpec,
    pub goal: Pose2,
    #[serde(default)]
    pub tolerance: Tolerance,
}

/// Simulator settings; the seed lives at the scenario top level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "SimSection::default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default)]
    pub noise_std: f64,
    #[serde(default = "SimSection::default_max_steps")]
    pub max_steps: u64,
    #[serde(default)]
    pub measurement_bias: f64,
    #[serde(default = "SimSection::default_log_stride")]
    pub log_stride: u64,
}

impl SimSection {
    fn default_dt() -> f64 {
        SimConfig::default().dt
    }
    fn default_max_steps() -> u64 {
        SimConfig::default().max_steps
    }
    fn default_log_stride() -> u64 {
        SimConfig::default().log_stride
    }
}

impl Default for SimSection {
    fn default() -> Self {
        let c = SimConfig::default();
        Self {
            dt: c.dt,
            integrator: c.integrator,
            noise_std: c.noise_std,
            max_steps: c.max_steps,
            measurement_bias: c.measurement_bias,
            log_stride: c.log_stride,
        }
    }
}

/// Declarative description of one episode.
///
/// A single-stage scenario gives `mode`, `controller`, `goal` and optionally
/// `tolerance` at the top level; a multi-stage one lists `stages` instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub object: ObjectParams,
    pub start: Pose2,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub controller: Option<ControllerSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub goal: Option<Pose2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Tolerance>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageSpec>,
    #[serde(default)]
    pub sim: SimSection,
    /// Normal-force regulation; commands are realized exactly when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pi: Option<PiGains>,
    #[serde(default)]
    pub seed: u64,
}

fn invariant(e: Error) -> Error {
    match e {
        Error::InvalidParameter(m) => Error::Invariant(m),
        other => other,
    }
}

impl Scenario {
    /// The stages in execution order, whichever form the file used.
    pub fn stage_specs(&self) -> Result<Vec<StageSpec>> {
        let single = [self.mode.is_some(), self.controller.is_some(), self.goal.is_some()];
        match (self.stages.is_empty(), single) {
            (true, [true, true, true]) => Ok(vec![StageSpec {
                name: self.name.clone(),
                mode: self.mode.expect("checked"),
                controller: self.controller.expect("checked"),
                goal: self.goal.expect("checked"),
                tolerance: self.tolerance.unwrap_or_default(),
            }]),
            (false, [false, false, false]) if self.tolerance.is_none() => Ok(self.stages.clone()),
            (true, _) => Err(Error::Schema {
                path: "$".into(),
                message: "single-stage scenarios need mode, controller and goal".into(),
            }),
            (false, _) => Err(Error::Schema {
                path: "stages".into(),
                message: "stages excludes top-level mode, controller, goal and tolerance".into(),
            }),
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            dt: self.sim.dt,
            integrator: self.sim.integrator,
            noise_std: self.sim.noise_std,
            seed: self.seed,
            max_steps: self.sim.max_steps,
            measurement_bias: self.sim.measurement_bias,
            log_stride: self.sim.log_stride,
        }
    }

    /// Checks every physical and structural invariant.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCENARIO_SCHEMA {
            return Err(Error::Schema {
                path: "schema".into(),
                message: format!("expected \"{SCENARIO_SCHEMA}\", got \"{}\"", self.schema),
            });
        }
        self.object.validate().map_err(invariant)?;
        self.sim_config().validate().map_err(invariant)?;
        if let Some(pi) = &self.pi {
            pi.validate().map_err(invariant)?;
        }
        for stage in self.stage_specs()? {
            for (name, v) in [("eps_pos", stage.tolerance.eps_pos), ("eps_ang", stage.tolerance.eps_ang)] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Invariant(format!("{name} > 0 (got {v})")));
                }
            }
            let mode = ContactMode::new(stage.mode).map_err(invariant)?;
            build_controller(&stage.controller, &mode, &self.object).map_err(invariant)?;
        }
        Ok(())
    }

    /// Builds the runnable episode.
    pub fn episode(&self) -> Result<Episode> {
        self.validate()?;
        let stages = self
            .stage_specs()?
            .into_iter()
            .map(|s| {
                let mode = ContactMode::new(s.mode)?;
                let controller = build_controller(&s.controller, &mode, &self.object)?;
                Ok(EpisodeStage {
                    name: s.name,
                    mode,
                    goal: s.goal,
                    eps_pos: s.tolerance.eps_pos,
                    eps_ang: s.tolerance.eps_ang,
                    controller,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Episode { name: self.name.clone(), object: self.object, start: self.start, stages, pi: self.pi })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

fn schema_error(e: serde_path_to_error::Error<serde_json::Error>) -> Error {
    let path = e.path().to_string();
    Error::Schema { path, message: e.into_inner().to_string() }
}

/// Parses a JSON value against the strict schema, then validates it.
pub fn scenario_from_value(value: Value) -> Result<Scenario> {
    let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(schema_error)?;
    scenario.validate()?;
    Ok(scenario)
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema { path: "$".into(), message: e.to_string() })?;
    scenario_from_value(value)
}

/// Applies `key=value` with a dotted key (`object.c`, `stages.0.goal.1`).
/// The value is read as JSON when it parses, else as a string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::InvalidParameter(format!("override '{assignment}' is not key=value")))?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        node = match node {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("'{part}' in '{key}' is not an array index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| Error::InvalidParameter(format!("index {idx} out of range ({len}) in '{key}'")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(Error::InvalidParameter(format!("'{key}' descends into a scalar"))),
        };
    }
    Err(Error::InvalidParameter("empty override key".into()))
}

/// Parses text, applies overrides in order, then validates.
pub fn load_scenario(text: &str, overrides: &[String]) -> Result<Scenario> {
    let mut value: Value =
        serde_json::from_str(text).map_err(|e| Error::Schema { path: "$".into(), message: e.to_string() })?;
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    scenario_from_value(value)
}
