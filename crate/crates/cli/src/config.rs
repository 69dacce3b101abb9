//! TOML scenario files.
//!
//! Every field is optional and falls back to the reference deployment:
//!
//! ```toml
//! seed = 1
//!
//! [area]
//! radius = 5.0          # R, m
//! device_count = 64     # N
//! burial_depth = 0.35   # d_u, m
//! pb_height = 1.5       # m
//!
//! [beacons]
//! pb_count = 1          # M
//! antennas = 4          # Q
//! scheme = "RAB"        # SA | AA_IS | AA_SS_I | AA_SS_II | RAB
//! placement = "effc"    # center | effc | kmeans | fixed
//! orientation = "random"
//!
//! [power]
//! system = "ideal"      # ideal | practical
//! budget = "10 W"       # P_budget
//! amp_efficiency = 0.38 # eta
//! circuit = "100 mW"    # P_c
//! rf_chain = "60 mW"    # P_rf
//!
//! [harvest]
//! eh_threshold = "-22 dBm"
//! ```
//!
//! Power fields take plain numbers in watts or strings with a `dBm`, `W`,
//! `mW` or `uW` suffix. The threshold takes plain numbers in dBm.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};
use wpusn_core::engine::{
    Aggregate, FadingSpec, PlacementMethod, PlacementSpec, RabFading, Scenario, SoilSpec,
    SweepAxis, Trials,
};
use wpusn_core::placement::OrientationPolicy;
use wpusn_core::power::{MotorParams, PowerBudget, PowerSystem};
use wpusn_core::schemes::SchemeKind;
use wpusn_core::soil::RfParams;
use wpusn_core::units::{dbm_to_watts, watts_to_dbm};
use wpusn_core::Point;

use crate::error::{CliError, CliResult};

/// Parses `"10 W"`, `"-22 dBm"`, `"60mW"` or `"3.5 uW"` into watts.
pub fn parse_power(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let split = t
        .find(|c: char| c.is_ascii_alphabetic() || c == 'µ')
        .ok_or_else(|| format!("`{text}` has no unit suffix (dBm, W, mW, uW)"))?;
    let (num, unit) = t.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` is not a number with a unit"))?;
    let watts = match unit.trim() {
        "dBm" | "dbm" => dbm_to_watts(value),
        "W" => value,
        "mW" => value * 1e-3,
        "uW" | "µW" => value * 1e-6,
        other => return Err(format!("unknown power unit `{other}` in `{text}`")),
    };
    if watts.is_finite() {
        Ok(watts)
    } else {
        Err(format!("`{text}` is not finite"))
    }
}

enum Unit {
    Watts,
    Dbm,
}

struct QuantityVisitor(Unit);

impl<'de> Visitor<'de> for QuantityVisitor {
    type Value = f64;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a string with a dBm, W, mW or uW suffix")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        let watts = parse_power(v).map_err(E::custom)?;
        Ok(match self.0 {
            Unit::Watts => watts,
            Unit::Dbm => watts_to_dbm(watts),
        })
    }
}

/// Power in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Watts(pub f64);

impl<'de> Deserialize<'de> for Watts {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(QuantityVisitor(Unit::Watts)).map(Watts)
    }
}

/// Power level in dBm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Dbm(pub f64);

impl<'de> Deserialize<'de> for Dbm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(QuantityVisitor(Unit::Dbm)).map(Dbm)
    }
}

fn scheme_names<S: Serializer>(v: &[SchemeKind], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|k| k.name()))
}

fn parse_scheme<'de, D: Deserializer<'de>>(d: D) -> Result<SchemeKind, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(de::Error::custom)
}

fn parse_schemes<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<SchemeKind>, D::Error> {
    let v = Vec::<String>::deserialize(d)?;
    v.iter()
        .map(|s| s.parse().map_err(de::Error::custom))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Area {
    pub radius: f64,
    pub device_count: usize,
    pub burial_depth: f64,
    pub pb_height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Beacons {
    pub pb_count: usize,
    pub antennas: usize,
    #[serde(deserialize_with = "parse_scheme")]
    pub scheme: SchemeKind,
    pub placement: PlacementMethod,
    pub orientation: OrientationPolicy,
    pub effc_step: Option<f64>,
    pub kmeans_restarts: usize,
    pub kmeans_max_iterations: usize,
    /// Used by `placement = "fixed"`.
    pub positions: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Rf {
    pub frequency: f64,
    /// Air path-loss exponent tau.
    pub path_loss_exponent: f64,
    pub rician_k: Option<f64>,
    pub rician_k_db: Option<f64>,
    /// Rows of `[re, im]` pairs.
    pub covariance: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Soil {
    pub vwc: f64,
    pub clay: f64,
    pub mu_r: f64,
    /// Both permittivity parts bypass the dielectric model.
    pub eps_real: Option<f64>,
    pub eps_imag: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Power {
    pub system: PowerSystem,
    pub budget: Watts,
    pub amp_efficiency: f64,
    pub circuit: Watts,
    pub rf_chain: Watts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Motor {
    pub pulse_min: f64,
    pub pulse_max: f64,
    /// PWM period T_f, s.
    pub duty_cycle: f64,
    pub supply_voltage: f64,
    pub working_current: f64,
    pub block: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Harvest {
    pub eh_threshold: Dbm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrialsConfig {
    pub deployments: usize,
    pub fading_draws: usize,
    pub heatmap_draws: usize,
    pub aggregate: Aggregate,
    pub rab_fading: RabFading,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HeatmapConfig {
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Threshold values are dBm.
    pub values: Vec<f64>,
    #[serde(serialize_with = "scheme_names", deserialize_with = "parse_schemes")]
    pub schemes: Vec<SchemeKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub area: Area,
    pub beacons: Beacons,
    pub rf: Rf,
    pub soil: Soil,
    pub power: Power,
    pub motor: Motor,
    pub harvest: Harvest,
    pub trials: TrialsConfig,
    pub heatmap: HeatmapConfig,
    pub sweep: SweepConfig,
}

impl Default for Config {
    fn default() -> Self {
        let s = Scenario::default();
        Config {
            seed: s.seed,
            area: Area {
                radius: s.radius,
                device_count: s.device_count,
                burial_depth: s.burial_depth,
                pb_height: s.pb_height,
            },
            beacons: Beacons {
                pb_count: s.pb_count,
                antennas: s.antennas_per_pb,
                scheme: s.scheme,
                placement: s.placement.method,
                orientation: s.placement.orientation,
                effc_step: s.placement.effc_step,
                kmeans_restarts: s.placement.kmeans_restarts,
                kmeans_max_iterations: s.placement.kmeans_max_iterations,
                positions: s.placement.positions,
            },
            rf: Rf {
                frequency: s.rf.frequency,
                path_loss_exponent: s.rf.path_loss_exponent,
                rician_k: None,
                rician_k_db: None,
                covariance: None,
            },
            soil: Soil {
                vwc: s.soil.vwc,
                clay: s.soil.clay,
                mu_r: s.soil.mu_r,
                eps_real: None,
                eps_imag: None,
            },
            power: Power {
                system: s.power_system,
                budget: Watts(s.budget.budget),
                amp_efficiency: s.budget.amp_efficiency,
                circuit: Watts(s.budget.circuit),
                rf_chain: Watts(s.budget.rf_chain),
            },
            motor: Motor {
                pulse_min: s.motor.pulse_min,
                pulse_max: s.motor.pulse_max,
                duty_cycle: s.motor.duty_cycle,
                supply_voltage: s.motor.supply_voltage,
                working_current: s.motor.working_current,
                block: s.motor.block,
            },
            harvest: Harvest {
                eh_threshold: Dbm(-22.0),
            },
            trials: TrialsConfig {
                deployments: s.trials.deployments,
                fading_draws: s.trials.fading_draws,
                heatmap_draws: s.heatmap_draws,
                aggregate: s.aggregate,
                rab_fading: s.rab_fading,
            },
            heatmap: HeatmapConfig { resolution: 64 },
            sweep: SweepConfig {
                axis: SweepAxis::TotalAntennas,
                values: Vec::new(),
                schemes: SchemeKind::CSI_FREE.to_vec(),
            },
        }
    }
}

macro_rules! section_default {
    ($($t:ty => $field:ident),* $(,)?) => {
        $(impl Default for $t {
            fn default() -> Self {
                Config::default().$field
            }
        })*
    };
}

section_default!(
    Area => area,
    Beacons => beacons,
    Rf => rf,
    Soil => soil,
    Power => power,
    Motor => motor,
    Harvest => harvest,
    TrialsConfig => trials,
    HeatmapConfig => heatmap,
    SweepConfig => sweep,
);

impl Config {
    /// Engine scenario. Only the dBm threshold is converted here.
    pub fn scenario(&self) -> CliResult<Scenario> {
        let rician_k = match (self.rf.rician_k, self.rf.rician_k_db) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "set either rf.rician_k or rf.rician_k_db, not both".into(),
                ))
            }
            (Some(k), None) => k,
            (None, Some(db)) => wpusn_core::units::db_to_linear(db),
            (None, None) => FadingSpec::default().rician_k,
        };
        let permittivity = match (self.soil.eps_real, self.soil.eps_imag) {
            (Some(re), Some(im)) => Some([re, im]),
            (None, None) => None,
            _ => {
                return Err(CliError::Config(
                    "soil.eps_real and soil.eps_imag must be given together".into(),
                ))
            }
        };
        Ok(Scenario {
            radius: self.area.radius,
            device_count: self.area.device_count,
            burial_depth: self.area.burial_depth,
            pb_height: self.area.pb_height,
            pb_count: self.beacons.pb_count,
            antennas_per_pb: self.beacons.antennas,
            scheme: self.beacons.scheme,
            placement: PlacementSpec {
                method: self.beacons.placement,
                orientation: self.beacons.orientation,
                effc_step: self.beacons.effc_step,
                kmeans_restarts: self.beacons.kmeans_restarts,
                kmeans_max_iterations: self.beacons.kmeans_max_iterations,
                positions: self.beacons.positions.clone(),
            },
            soil: SoilSpec {
                vwc: self.soil.vwc,
                clay: self.soil.clay,
                mu_r: self.soil.mu_r,
                permittivity,
            },
            rf: RfParams {
                frequency: self.rf.frequency,
                path_loss_exponent: self.rf.path_loss_exponent,
            },
            fading: FadingSpec {
                rician_k,
                covariance: self.rf.covariance.clone(),
            },
            power_system: self.power.system,
            budget: PowerBudget {
                budget: self.power.budget.0,
                amp_efficiency: self.power.amp_efficiency,
                circuit: self.power.circuit.0,
                rf_chain: self.power.rf_chain.0,
            },
            motor: MotorParams {
                pulse_min: self.motor.pulse_min,
                pulse_max: self.motor.pulse_max,
                duty_cycle: self.motor.duty_cycle,
                supply_voltage: self.motor.supply_voltage,
                working_current: self.motor.working_current,
                block: self.motor.block,
            },
            eh_threshold: dbm_to_watts(self.harvest.eh_threshold.0),
            trials: Trials {
                deployments: self.trials.deployments,
                fading_draws: self.trials.fading_draws,
            },
            aggregate: self.trials.aggregate,
            rab_fading: self.trials.rab_fading,
            heatmap_draws: self.trials.heatmap_draws,
            seed: self.seed,
        })
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        format!("{:x}", Sha256::digest(bytes))
    }
}

/// Dotted paths of every leaf field, e.g. `soil.vwc`.
pub fn known_keys() -> Vec<String> {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<String>) {
        match v {
            serde_json::Value::Object(map) => {
                for (k, child) in map {
                    let path = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&path, child, out);
                }
            }
            _ => out.push(prefix.to_string()),
        }
    }
    let mut out = Vec::new();
    walk(
        "",
        &serde_json::to_value(Config::default()).expect("config serializes"),
        &mut out,
    );
    out
}

/// Full dotted path for `key`, which may be a dotted path or a bare field
/// name that occurs in exactly one section.
pub fn resolve_key(key: &str) -> CliResult<String> {
    let keys = known_keys();
    if keys.iter().any(|k| k == key) {
        return Ok(key.to_string());
    }
    if key.contains('.') {
        return Err(CliError::Config(format!("unknown key `{key}`")));
    }
    let hits: Vec<&String> = keys
        .iter()
        .filter(|k| k.rsplit('.').next() == Some(key))
        .collect();
    match hits.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(CliError::Config(format!("unknown key `{key}`"))),
        many => Err(CliError::Config(format!(
            "key `{key}` is ambiguous: {}",
            many.iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn parse_override_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Applies one `KEY=VALUE` override to a parsed TOML document.
pub fn apply_override(doc: &mut toml::Table, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override `{assignment}` is not KEY=VALUE")))?;
    let path = resolve_key(key.trim())?;
    let value = parse_override_value(raw.trim());
    let mut parts: Vec<&str> = path.split('.').collect();
    let leaf = parts.pop().expect("nonempty path");
    let mut table = doc;
    for part in parts {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("`{part}` is not a section")))?;
    }
    table.insert(leaf.to_string(), value);
    Ok(())
}

/// Parses a config document with overrides applied on top.
pub fn parse_str(text: &str, overrides: &[String]) -> CliResult<Config> {
    let mut doc: toml::Table = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    Config::deserialize(toml::Value::Table(doc)).map_err(|e| CliError::Config(e.to_string()))
}

/// Reads `path` (or an empty document when `None`), applies overrides and
/// validates the resulting scenario.
pub fn parse_config(path: Option<&Path>, overrides: &[String]) -> CliResult<(Config, Scenario)> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?,
        None => String::new(),
    };
    let config = parse_str(&text, overrides)?;
    let scenario = config.scenario()?;
    scenario.prepare()?;
    Ok((config, scenario))
}
