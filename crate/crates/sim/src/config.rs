//! Run configuration files.
//!
//! JSON, version 1. Unknown keys are rejected. Exactly one of `c` and
//! `rock_fluid` must be given.

use std::fs;
use std::path::{Path, PathBuf};

use collapse_core::pde_solver::{
    make_nonsymmetric, make_selfsimilar_ic, make_smoothed_block, InitialCondition, Scheme,
    SchemeConfig, StopRule,
};
use collapse_core::physmap::{reduce, RockFluidParams, STANDARD_GRAVITY};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Current config format.
pub const CONFIG_VERSION: u32 = 1;

/// Environment variable that overrides the output directory.
pub const OUT_DIR_ENV: &str = "COLLAPSE_SIM_OUT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Explicit,
    Implicit,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::Explicit => Scheme::Explicit,
            SchemeName::Implicit => Scheme::Implicit,
        }
    }
}

/// Physical parameters, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RockFluidConfig {
    pub permeability: f64,
    pub block_porosity: f64,
    pub fissure_porosity: f64,
    pub absorption_fraction: f64,
    pub density: f64,
    pub viscosity: f64,
    #[serde(default = "standard_gravity")]
    pub gravity: f64,
}

fn standard_gravity() -> f64 {
    STANDARD_GRAVITY
}

impl From<RockFluidConfig> for RockFluidParams {
    fn from(r: RockFluidConfig) -> Self {
        RockFluidParams {
            permeability: r.permeability,
            block_porosity: r.block_porosity,
            fissure_porosity: r.fissure_porosity,
            absorption_fraction: r.absorption_fraction,
            density: r.density,
            viscosity: r.viscosity,
            gravity: r.gravity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IcConfig {
    SmoothedBlock {
        height: f64,
        x_left: f64,
        x_right: f64,
        width: f64,
    },
    Nonsymmetric,
    Selfsimilar {
        #[serde(rename = "B")]
        b: f64,
        t0: f64,
        t_start: f64,
        #[serde(default)]
        x0: f64,
    },
    Custom {
        values: Vec<f64>,
        x_left: f64,
        x_right: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_halfwidth_frac: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_height_frac: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default = "default_run_id")]
    pub run_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rock_fluid: Option<RockFluidConfig>,
    pub scheme: SchemeName,
    #[serde(default, rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    pub ic: IcConfig,
    #[serde(default)]
    pub stop: StopConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub snapshot_every: u64,
    #[serde(default = "one")]
    pub record_every: u64,
}

fn default_run_id() -> String {
    "run".into()
}

fn default_output_dir() -> String {
    "out".into()
}

fn one() -> u64 {
    1
}

/// A validated configuration, ready to run.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    /// Config with every default filled in.
    pub config: RunConfig,
    pub c: f64,
    pub scheme: SchemeConfig,
    pub ic: InitialCondition,
    pub output_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    /// Validates and fills defaults. `COLLAPSE_SIM_OUT`, when set, replaces
    /// `output_dir`.
    pub fn resolve(&self) -> Result<ResolvedRun, CliError> {
        if self.version != CONFIG_VERSION {
            return Err(CliError::config(format!(
                "unsupported config version {} (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.run_id.is_empty()
            || !self
                .run_id
                .chars()
                .all(|ch| ch.is_ascii_alphanumeric() || "-_.".contains(ch))
        {
            return Err(CliError::config(format!(
                "run_id {:?} must be non-empty and use only [A-Za-z0-9._-]",
                self.run_id
            )));
        }
        let c = match (self.c, &self.rock_fluid) {
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "config gives both c and rock_fluid; they are mutually exclusive",
                ))
            }
            (None, None) => return Err(CliError::config("config needs one of c or rock_fluid")),
            (Some(c), None) => c,
            (None, Some(rf)) => reduce(&RockFluidParams::from(*rf))?.c,
        };
        if !(c.is_finite() && c > 1.0) {
            return Err(CliError::config(format!(
                "simulation needs c > 1 (got {c})"
            )));
        }

        let scheme = Scheme::from(self.scheme);
        let defaults = SchemeConfig::new(scheme);
        let stop_defaults = StopRule::default();
        let stop = StopRule {
            max_time: self.stop.max_time.unwrap_or(stop_defaults.max_time),
            min_halfwidth_frac: self
                .stop
                .min_halfwidth_frac
                .unwrap_or(stop_defaults.min_halfwidth_frac),
            min_height_frac: self
                .stop
                .min_height_frac
                .unwrap_or(stop_defaults.min_height_frac),
            max_steps: self.stop.max_steps,
        };
        let scheme_cfg = SchemeConfig {
            scheme,
            dt: self.dt.unwrap_or(defaults.dt),
            n: self.n.unwrap_or(defaults.n),
            stop,
            snapshot_every: self.snapshot_every,
            record_every: self.record_every,
        };
        scheme_cfg.validate()?;

        let ic = match &self.ic {
            IcConfig::SmoothedBlock {
                height,
                x_left,
                x_right,
                width,
            } => make_smoothed_block(*height, *x_left, *x_right, *width)?,
            IcConfig::Nonsymmetric => make_nonsymmetric(),
            IcConfig::Selfsimilar { b, t0, t_start, x0 } => {
                make_selfsimilar_ic(*b, *t0, *t_start, c, *x0)?
            }
            IcConfig::Custom {
                values,
                x_left,
                x_right,
            } => {
                let ic = InitialCondition::Custom {
                    values: values.clone(),
                    x_left: *x_left,
                    x_right: *x_right,
                };
                ic.validate()?;
                ic
            }
        };

        let output_dir = std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(&self.output_dir));

        let mut config = self.clone();
        config.n = Some(scheme_cfg.n);
        config.dt = Some(scheme_cfg.dt);
        config.stop = StopConfig {
            max_time: stop.max_time.is_finite().then_some(stop.max_time),
            min_halfwidth_frac: Some(stop.min_halfwidth_frac),
            min_height_frac: Some(stop.min_height_frac),
            max_steps: stop.max_steps,
        };
        config.output_dir = output_dir.to_string_lossy().into_owned();

        Ok(ResolvedRun {
            config,
            c,
            scheme: scheme_cfg,
            ic,
            output_dir,
        })
    }
}
