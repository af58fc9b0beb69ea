//! JSON run configuration.
//!
//! A config file and the command-line flags are both parsed into a
//! [`ConfigFile`] patch. Patches are layered (defaults, then file, then
//! flags) and resolved into concrete [`Settings`]. The resolved settings
//! are written back out as a fully populated `ConfigFile` in the metadata
//! block of every CSV, so any output can be replayed with `--config`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use uavcov::{AreaShape, EnvironmentProfile, FormulationMode, RadioConfig, SweepAxis};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SweepPlos,
    SweepPnlos,
    SweepPathloss,
    SweepCoverage,
    OptimizeAltitude,
    CoverageRadius,
    Scenario,
    ShowEnvs,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::SweepPlos => "sweep-plos",
            Command::SweepPnlos => "sweep-pnlos",
            Command::SweepPathloss => "sweep-pathloss",
            Command::SweepCoverage => "sweep-coverage",
            Command::OptimizeAltitude => "optimize-altitude",
            Command::CoverageRadius => "coverage-radius",
            Command::Scenario => "scenario",
            Command::ShowEnvs => "show-envs",
        }
    }

    pub fn is_sweep(&self) -> bool {
        matches!(
            self,
            Command::SweepPlos
                | Command::SweepPnlos
                | Command::SweepPathloss
                | Command::SweepCoverage
        )
    }

    fn default_axis(&self) -> SweepAxis {
        match self {
            Command::SweepPlos | Command::SweepPnlos => SweepAxis::ElevationAngleDeg,
            _ => SweepAxis::UserDistanceM,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Square,
    Disk,
}

impl FromStr for ShapeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "square" => Ok(ShapeKind::Square),
            "disk" => Ok(ShapeKind::Disk),
            other => Err(format!("unknown shape `{other}` (expected square or disk)")),
        }
    }
}

/// An environment given by built-in name or spelled out in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EnvEntry {
    Named(String),
    Custom(EnvironmentProfile),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_c_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_tx_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_min_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_density_dbm_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShadowingPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_los_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_nlos_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<SweepAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_samples: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizerPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_edge_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_min_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioPatch {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area_side_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_users: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uav_x_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uav_y_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_power_w: Option<f64>,
}

/// On-disk configuration document. Every key is optional; unknown keys are
/// rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<FormulationMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radio: Option<RadioPatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment: Option<EnvEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environments: Option<Vec<EnvEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shadowing: Option<ShadowingPatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryPatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepPatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub optimizer: Option<OptimizerPatch>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioPatch>,
}

/// Prefix of the metadata line that carries the resolved configuration.
pub const CONFIG_LINE_PREFIX: &str = "# config: ";

impl ConfigFile {
    /// Parses either a JSON document or a CSV produced by this tool, whose
    /// `# config: ` comment line holds the JSON.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let json = if text.trim_start().starts_with('#') {
            text.lines()
                .find_map(|l| l.strip_prefix(CONFIG_LINE_PREFIX))
                .ok_or_else(|| {
                    CliError::Invalid("config: CSV input has no `# config:` metadata line".into())
                })?
        } else {
            text
        };
        serde_json::from_str(json).map_err(|e| CliError::Invalid(format!("config: {e}")))
    }

    /// Field-wise overlay: values present in `top` win.
    pub fn overlay(self, top: ConfigFile) -> ConfigFile {
        let (environment, environments) = if top.environment.is_some() || top.environments.is_some()
        {
            (top.environment, top.environments)
        } else {
            (self.environment, self.environments)
        };
        ConfigFile {
            version: top.version.or(self.version),
            command: top.command.or(self.command),
            mode: top.mode.or(self.mode),
            seed: top.seed.or(self.seed),
            radio: merge(self.radio, top.radio, |a, b| RadioPatch {
                f_c_hz: b.f_c_hz.or(a.f_c_hz),
                p_tx_dbm: b.p_tx_dbm.or(a.p_tx_dbm),
                g_db: b.g_db.or(a.g_db),
                p_min_dbm: b.p_min_dbm.or(a.p_min_dbm),
                noise_density_dbm_hz: b.noise_density_dbm_hz.or(a.noise_density_dbm_hz),
                bandwidth_hz: b.bandwidth_hz.or(a.bandwidth_hz),
            }),
            environment,
            environments,
            shadowing: merge(self.shadowing, top.shadowing, |a, b| ShadowingPatch {
                sigma_los_db: b.sigma_los_db.or(a.sigma_los_db),
                sigma_nlos_db: b.sigma_nlos_db.or(a.sigma_nlos_db),
            }),
            geometry: merge(self.geometry, top.geometry, |a, b| GeometryPatch {
                r0_m: b.r0_m.or(a.r0_m),
                h_m: b.h_m.or(a.h_m),
            }),
            sweep: merge(self.sweep, top.sweep, |a, b| SweepPatch {
                axis: b.axis.or(a.axis),
                start: b.start.or(a.start),
                stop: b.stop.or(a.stop),
                step: b.step.or(a.step),
                mc_samples: b.mc_samples.or(a.mc_samples),
            }),
            optimizer: merge(self.optimizer, top.optimizer, |a, b| OptimizerPatch {
                r_edge_m: b.r_edge_m.or(a.r_edge_m),
                h_min_m: b.h_min_m.or(a.h_min_m),
                h_max_m: b.h_max_m.or(a.h_max_m),
                steps: b.steps.or(a.steps),
                target: b.target.or(a.target),
                r_max_m: b.r_max_m.or(a.r_max_m),
                resolution_m: b.resolution_m.or(a.resolution_m),
            }),
            scenario: merge(self.scenario, top.scenario, |a, b| ScenarioPatch {
                shape: b.shape.or(a.shape),
                area_side_m: b.area_side_m.or(a.area_side_m),
                radius_m: b.radius_m.or(a.radius_m),
                n_users: b.n_users.or(a.n_users),
                uav_x_m: b.uav_x_m.or(a.uav_x_m),
                uav_y_m: b.uav_y_m.or(a.uav_y_m),
                n_draws: b.n_draws.or(a.n_draws),
                total_power_w: b.total_power_w.or(a.total_power_w),
            }),
        }
    }
}

fn merge<T>(base: Option<T>, top: Option<T>, f: impl FnOnce(T, T) -> T) -> Option<T> {
    match (base, top) {
        (Some(a), Some(b)) => Some(f(a, b)),
        (a, b) => b.or(a),
    }
}

/// Where a patch came from; decides how offending values are named.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Flags,
    File,
}

struct Checker {
    source: Source,
}

impl Checker {
    fn name(&self, flag: &str, key: &str) -> String {
        match self.source {
            Source::Flags => flag.to_string(),
            Source::File => key.to_string(),
        }
    }

    fn check<T: Copy + fmt::Display>(
        &self,
        value: Option<T>,
        flag: &str,
        key: &str,
        ok: impl Fn(T) -> bool,
        rule: &str,
    ) -> Result<(), CliError> {
        match value {
            Some(v) if !ok(v) => Err(CliError::Invalid(format!(
                "{}: {rule}, got {v}",
                self.name(flag, key)
            ))),
            _ => Ok(()),
        }
    }
}

fn finite(v: f64) -> bool {
    v.is_finite()
}

fn positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

fn non_negative(v: f64) -> bool {
    v.is_finite() && v >= 0.0
}

/// Range checks on individual values, reported by flag or config key.
pub fn validate_patch(patch: &ConfigFile, source: Source) -> Result<(), CliError> {
    let c = Checker { source };
    if let Some(r) = &patch.radio {
        c.check(r.f_c_hz, "--fc", "radio.f_c_hz", positive, "must be > 0")?;
        c.check(
            r.p_tx_dbm,
            "--p-tx",
            "radio.p_tx_dbm",
            finite,
            "must be finite",
        )?;
        c.check(r.g_db, "--gain", "radio.g_db", finite, "must be finite")?;
        c.check(
            r.p_min_dbm,
            "--p-min",
            "radio.p_min_dbm",
            finite,
            "must be finite",
        )?;
        c.check(
            r.noise_density_dbm_hz,
            "--noise-density",
            "radio.noise_density_dbm_hz",
            finite,
            "must be finite",
        )?;
        c.check(
            r.bandwidth_hz,
            "--bandwidth",
            "radio.bandwidth_hz",
            positive,
            "must be > 0",
        )?;
    }
    if let Some(s) = &patch.shadowing {
        c.check(
            s.sigma_los_db,
            "--sigma-los",
            "shadowing.sigma_los_db",
            positive,
            "must be > 0",
        )?;
        c.check(
            s.sigma_nlos_db,
            "--sigma-nlos",
            "shadowing.sigma_nlos_db",
            positive,
            "must be > 0",
        )?;
    }
    if let Some(g) = &patch.geometry {
        c.check(
            g.r0_m,
            "--r0",
            "geometry.r0_m",
            non_negative,
            "must be >= 0",
        )?;
        c.check(g.h_m, "--h", "geometry.h_m", positive, "must be > 0")?;
    }
    if let Some(s) = &patch.sweep {
        c.check(s.start, "--start", "sweep.start", finite, "must be finite")?;
        c.check(s.stop, "--stop", "sweep.stop", finite, "must be finite")?;
        c.check(s.step, "--step", "sweep.step", positive, "must be > 0")?;
    }
    if let Some(o) = &patch.optimizer {
        c.check(
            o.r_edge_m,
            "--r-edge",
            "optimizer.r_edge_m",
            non_negative,
            "must be >= 0",
        )?;
        c.check(
            o.h_min_m,
            "--h-min",
            "optimizer.h_min_m",
            positive,
            "must be > 0",
        )?;
        c.check(
            o.h_max_m,
            "--h-max",
            "optimizer.h_max_m",
            positive,
            "must be > 0",
        )?;
        c.check(
            o.steps,
            "--steps",
            "optimizer.steps",
            |n| n >= 2,
            "must be >= 2",
        )?;
        c.check(
            o.target,
            "--target",
            "optimizer.target",
            |t| t > 0.0 && t < 1.0,
            "must lie in (0, 1)",
        )?;
        c.check(
            o.r_max_m,
            "--r-max",
            "optimizer.r_max_m",
            non_negative,
            "must be >= 0",
        )?;
        c.check(
            o.resolution_m,
            "--resolution",
            "optimizer.resolution_m",
            positive,
            "must be > 0",
        )?;
    }
    if let Some(s) = &patch.scenario {
        c.check(
            s.area_side_m,
            "--area-side",
            "scenario.area_side_m",
            positive,
            "must be > 0",
        )?;
        c.check(
            s.radius_m,
            "--radius",
            "scenario.radius_m",
            positive,
            "must be > 0",
        )?;
        c.check(
            s.n_users,
            "--n-users",
            "scenario.n_users",
            |n| n >= 1,
            "must be >= 1",
        )?;
        c.check(
            s.uav_x_m,
            "--uav-x",
            "scenario.uav_x_m",
            finite,
            "must be finite",
        )?;
        c.check(
            s.uav_y_m,
            "--uav-y",
            "scenario.uav_y_m",
            finite,
            "must be finite",
        )?;
        c.check(
            s.n_draws,
            "--n-draws",
            "scenario.n_draws",
            |n| n >= 1,
            "must be >= 1",
        )?;
        c.check(
            s.total_power_w,
            "--total-power",
            "scenario.total_power_w",
            positive,
            "must be > 0",
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    pub mc_samples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSettings {
    pub r_edge_m: f64,
    pub h_min_m: f64,
    pub h_max_m: f64,
    pub steps: usize,
    pub target: f64,
    pub r_max_m: f64,
    pub resolution_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSettings {
    pub area: AreaShape,
    pub n_users: usize,
    pub uav_x_m: f64,
    pub uav_y_m: f64,
    pub n_draws: usize,
    pub total_power_w: f64,
}

/// Fully resolved configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: Command,
    pub mode: FormulationMode,
    pub seed: u64,
    pub radio: RadioConfig,
    pub environments: Vec<EnvironmentProfile>,
    pub r0_m: f64,
    pub h_m: f64,
    pub sweep: SweepSettings,
    pub optimizer: OptimizerSettings,
    pub scenario: ScenarioSettings,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_H_M: f64 = 100.0;
pub const DEFAULT_R0_M: f64 = 500.0;

/// Default grid for each sweep axis: (start, stop, step).
pub fn default_range(axis: SweepAxis) -> (f64, f64, f64) {
    match axis {
        SweepAxis::ElevationAngleDeg => (0.5, 90.0, 0.5),
        SweepAxis::UserDistanceM => (15.0, 500.0, 5.0),
        SweepAxis::AltitudeM => (50.0, 2000.0, 1.0),
    }
}

fn resolve_env(entry: &EnvEntry) -> Result<EnvironmentProfile, CliError> {
    match entry {
        EnvEntry::Named(name) => EnvironmentProfile::by_name(name).ok_or_else(|| {
            CliError::Invalid(format!(
                "unknown environment `{name}` (built-ins: suburban, urban, dense-urban, high-rise-urban)"
            ))
        }),
        EnvEntry::Custom(env) => {
            env.validate().map_err(|e| CliError::Invalid(e.to_string()))?;
            Ok(env.clone())
        }
    }
}

/// Expands `all` and comma-separated lists of names into entries.
pub fn parse_env_list(spec: &str) -> Vec<EnvEntry> {
    if spec.trim().eq_ignore_ascii_case("all") {
        return EnvironmentProfile::builtins()
            .into_iter()
            .map(|e| EnvEntry::Named(e.name))
            .collect();
    }
    spec.split(',')
        .map(|s| EnvEntry::Named(s.trim().to_string()))
        .collect()
}

impl Settings {
    pub fn resolve(command: Command, patch: &ConfigFile) -> Result<Settings, CliError> {
        if let Some(file_cmd) = patch.command {
            if file_cmd != command {
                return Err(CliError::Invalid(format!(
                    "config was written for `{file_cmd}`, not `{command}`"
                )));
            }
        }
        if patch.environment.is_some() && patch.environments.is_some() {
            return Err(CliError::Invalid(
                "config: give either `environment` or `environments`, not both".into(),
            ));
        }

        let d = RadioConfig::default();
        let r = patch.radio.clone().unwrap_or_default();
        let radio = RadioConfig {
            f_c_hz: r.f_c_hz.unwrap_or(d.f_c_hz),
            p_tx_dbm: r.p_tx_dbm.unwrap_or(d.p_tx_dbm),
            g_db: r.g_db.unwrap_or(d.g_db),
            p_min_dbm: r.p_min_dbm.unwrap_or(d.p_min_dbm),
            noise_density_dbm_hz: r.noise_density_dbm_hz.unwrap_or(d.noise_density_dbm_hz),
            bandwidth_hz: r.bandwidth_hz.unwrap_or(d.bandwidth_hz),
        };

        let entries: Vec<EnvEntry> = match (&patch.environment, &patch.environments) {
            (Some(one), None) => vec![one.clone()],
            (None, Some(list)) => list.clone(),
            _ => match command {
                Command::Scenario => vec![EnvEntry::Named("urban".into())],
                _ => parse_env_list("all"),
            },
        };
        if entries.is_empty() {
            return Err(CliError::Invalid(
                "at least one environment is required".into(),
            ));
        }
        let mut environments = entries
            .iter()
            .map(resolve_env)
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(s) = &patch.shadowing {
            for env in &mut environments {
                if let Some(v) = s.sigma_los_db {
                    env.sigma_los = v;
                }
                if let Some(v) = s.sigma_nlos_db {
                    env.sigma_nlos = v;
                }
                env.validate()
                    .map_err(|e| CliError::Invalid(e.to_string()))?;
            }
        }
        if command == Command::Scenario && environments.len() != 1 {
            return Err(CliError::Invalid(format!(
                "scenario needs exactly one environment, got {}",
                environments.len()
            )));
        }

        let g = patch.geometry.clone().unwrap_or_default();
        let s = patch.sweep.clone().unwrap_or_default();
        let axis = s.axis.unwrap_or_else(|| command.default_axis());
        let (start, stop, step) = default_range(axis);
        let sweep = SweepSettings {
            axis,
            start: s.start.unwrap_or(start),
            stop: s.stop.unwrap_or(stop),
            step: s.step.unwrap_or(step),
            mc_samples: s.mc_samples.unwrap_or(0),
        };
        if sweep.start > sweep.stop {
            return Err(CliError::Invalid(format!(
                "--start/--stop (sweep.start/sweep.stop): start {} exceeds stop {}",
                sweep.start, sweep.stop
            )));
        }

        let o = patch.optimizer.clone().unwrap_or_default();
        let optimizer = OptimizerSettings {
            r_edge_m: o.r_edge_m.unwrap_or(DEFAULT_R0_M),
            h_min_m: o.h_min_m.unwrap_or(50.0),
            h_max_m: o.h_max_m.unwrap_or(2000.0),
            steps: o.steps.unwrap_or(1951),
            target: o.target.unwrap_or(0.9),
            r_max_m: o.r_max_m.unwrap_or(1000.0),
            resolution_m: o.resolution_m.unwrap_or(1.0),
        };
        if optimizer.h_min_m >= optimizer.h_max_m {
            return Err(CliError::Invalid(format!(
                "--h-min/--h-max (optimizer.h_min_m/optimizer.h_max_m): need h_min < h_max, got {} and {}",
                optimizer.h_min_m, optimizer.h_max_m
            )));
        }

        let sc = patch.scenario.clone().unwrap_or_default();
        let area = match sc.shape.unwrap_or(ShapeKind::Square) {
            ShapeKind::Square => AreaShape::Square {
                side_m: sc.area_side_m.unwrap_or(1000.0),
            },
            ShapeKind::Disk => AreaShape::Disk {
                radius_m: sc.radius_m.unwrap_or(500.0),
            },
        };
        let center = area.center();
        let scenario = ScenarioSettings {
            area,
            n_users: sc.n_users.unwrap_or(100),
            uav_x_m: sc.uav_x_m.unwrap_or(center.x),
            uav_y_m: sc.uav_y_m.unwrap_or(center.y),
            n_draws: sc.n_draws.unwrap_or(100),
            total_power_w: sc.total_power_w.unwrap_or_else(|| radio.p_tx_watts()),
        };

        Ok(Settings {
            command,
            mode: patch.mode.unwrap_or_default(),
            seed: patch.seed.unwrap_or(DEFAULT_SEED),
            radio,
            environments,
            r0_m: g.r0_m.unwrap_or(DEFAULT_R0_M),
            h_m: g.h_m.unwrap_or(DEFAULT_H_M),
            sweep,
            optimizer,
            scenario,
        })
    }

    /// The settings as a complete config document, tagged with the tool
    /// version and command.
    pub fn to_config(&self) -> ConfigFile {
        let (shape, area_side_m, radius_m) = match self.scenario.area {
            AreaShape::Square { side_m } => (ShapeKind::Square, Some(side_m), None),
            AreaShape::Disk { radius_m } => (ShapeKind::Disk, None, Some(radius_m)),
        };
        ConfigFile {
            version: Some(TOOL_VERSION.to_string()),
            command: Some(self.command),
            mode: Some(self.mode),
            seed: Some(self.seed),
            radio: Some(RadioPatch {
                f_c_hz: Some(self.radio.f_c_hz),
                p_tx_dbm: Some(self.radio.p_tx_dbm),
                g_db: Some(self.radio.g_db),
                p_min_dbm: Some(self.radio.p_min_dbm),
                noise_density_dbm_hz: Some(self.radio.noise_density_dbm_hz),
                bandwidth_hz: Some(self.radio.bandwidth_hz),
            }),
            environment: None,
            environments: Some(
                self.environments
                    .iter()
                    .cloned()
                    .map(EnvEntry::Custom)
                    .collect(),
            ),
            shadowing: None,
            geometry: Some(GeometryPatch {
                r0_m: Some(self.r0_m),
                h_m: Some(self.h_m),
            }),
            sweep: Some(SweepPatch {
                axis: Some(self.sweep.axis),
                start: Some(self.sweep.start),
                stop: Some(self.sweep.stop),
                step: Some(self.sweep.step),
                mc_samples: Some(self.sweep.mc_samples),
            }),
            optimizer: Some(OptimizerPatch {
                r_edge_m: Some(self.optimizer.r_edge_m),
                h_min_m: Some(self.optimizer.h_min_m),
                h_max_m: Some(self.optimizer.h_max_m),
                steps: Some(self.optimizer.steps),
                target: Some(self.optimizer.target),
                r_max_m: Some(self.optimizer.r_max_m),
                resolution_m: Some(self.optimizer.resolution_m),
            }),
            scenario: Some(ScenarioPatch {
                shape: Some(shape),
                area_side_m,
                radius_m,
                n_users: Some(self.scenario.n_users),
                uav_x_m: Some(self.scenario.uav_x_m),
                uav_y_m: Some(self.scenario.uav_y_m),
                n_draws: Some(self.scenario.n_draws),
                total_power_w: Some(self.scenario.total_power_w),
            }),
        }
    }
}
