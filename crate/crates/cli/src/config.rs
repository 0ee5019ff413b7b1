//! Run configuration: one TOML document per simulation.
//!
//! ```toml
//! output_dir = "runs/case-two"
//!
//! [array]            # datasheet; every field optional
//! p_max = 115.5
//!
//! [plant]            # every field optional
//! pi_ki = 2.0
//!
//! [controller]
//! kind = "rprop-nn"  # "po" | "inc-cond" | "rprop-nn"
//! model_path = "model.json"
//! gamma = 0.479
//!
//! [scenario]
//! kind = "partial-shade"
//! g_full = 1000.0
//! g_shaded = 500.0
//! ```

use std::path::{Path, PathBuf};

use mppt_core::sim::scenario;
use mppt_core::{
    Controller, EnvProfile, IncCond, NnController, PerturbObserve, PlantConfig, PvArrayConfig, SupervisionConfig,
};
use serde::{Deserialize, Serialize};

use crate::{formats, CliError};

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "MPPT_OUTPUT_DIR";

fn default_v_step() -> f64 {
    0.05
}

fn default_gamma() -> f64 {
    SupervisionConfig::default().gamma
}

fn default_threshold() -> f64 {
    SupervisionConfig::default().threshold_frac
}

fn default_true() -> bool {
    true
}

fn stc_temperature() -> f64 {
    mppt_core::pv::STC_TEMPERATURE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControllerConfig {
    Po {
        #[serde(default = "default_v_step")]
        v_step: f64,
    },
    IncCond {
        #[serde(default = "default_v_step")]
        v_step: f64,
        /// Conductance band, S; derived from the datasheet when absent.
        #[serde(default)]
        delta: Option<f64>,
    },
    RpropNn {
        model_path: PathBuf,
        #[serde(default = "default_gamma")]
        gamma: f64,
        #[serde(default = "default_threshold")]
        threshold_frac: f64,
        #[serde(default = "default_true")]
        supervised: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioConfig {
    Constant {
        g: f64,
        #[serde(default = "stc_temperature")]
        t_k: f64,
        duration: f64,
    },
    Ramp {
        g_from: f64,
        g_to: f64,
        ramp_seconds: f64,
        #[serde(default = "stc_temperature")]
        t_k: f64,
    },
    PartialShade {
        g_full: f64,
        g_shaded: f64,
        #[serde(default = "stc_temperature")]
        t_k: f64,
        #[serde(default = "default_shade_duration")]
        duration: f64,
    },
    CaseOne,
    Profile {
        profile: EnvProfile,
    },
}

fn default_shade_duration() -> f64 {
    5.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub array: PvArrayConfig,
    #[serde(default)]
    pub plant: PlantConfig,
    pub controller: ControllerConfig,
    pub scenario: ScenarioConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// Parses `path`; a relative `model_path` is resolved against the
    /// config file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        if let ControllerConfig::RpropNn { model_path, .. } = &mut cfg.controller {
            if model_path.is_relative() {
                if let Some(dir) = path.parent() {
                    *model_path = dir.join(&*model_path);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.array.validate().map_err(|e| CliError::Config(format!("array: {e}")))?;
        self.plant.validate().map_err(|e| CliError::Config(format!("plant: {e}")))?;
        if let ControllerConfig::RpropNn { model_path, .. } = &self.controller {
            if !model_path.is_file() {
                return Err(CliError::Config(format!("model file not found: {}", model_path.display())));
            }
        }
        self.profile()?;
        Ok(())
    }

    pub fn profile(&self) -> Result<EnvProfile, CliError> {
        let profile = match &self.scenario {
            ScenarioConfig::Constant { g, t_k, duration } => scenario::scenario_constant(*g, *t_k, *duration),
            ScenarioConfig::Ramp { g_from, g_to, ramp_seconds, t_k } => {
                scenario::scenario_ramp(*g_from, *g_to, *ramp_seconds, *t_k)
            }
            ScenarioConfig::PartialShade { g_full, g_shaded, t_k, duration } => {
                scenario::scenario_partial_shade(*g_full, *g_shaded, *t_k, *duration, self.array.n_substrings)
            }
            ScenarioConfig::CaseOne => Ok(scenario::scenario_case_one()),
            ScenarioConfig::Profile { profile } => Ok(profile.clone()),
        };
        let profile = profile.map_err(|e| CliError::Config(format!("scenario: {e}")))?;
        let width = profile.breakpoints()[0].env.g.len();
        if width != 1 && width != self.array.n_substrings {
            return Err(CliError::Config(format!(
                "scenario: {width} irradiance values for {} substrings",
                self.array.n_substrings
            )));
        }
        Ok(profile)
    }

    pub fn controller(&self) -> Result<Box<dyn Controller + Send>, CliError> {
        build_controller(&self.controller, &self.array)
    }

    /// `--out` beats the environment override, which beats the file.
    pub fn resolve_output_dir(&self, flag: Option<&Path>) -> PathBuf {
        if let Some(dir) = flag {
            return dir.to_path_buf();
        }
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }
}

pub fn build_controller(cfg: &ControllerConfig, array: &PvArrayConfig) -> Result<Box<dyn Controller + Send>, CliError> {
    let bad = |e: mppt_core::ControlError| CliError::Config(format!("controller: {e}"));
    Ok(match cfg {
        ControllerConfig::Po { v_step } => Box::new(PerturbObserve::new(*v_step).map_err(bad)?),
        ControllerConfig::IncCond { v_step, delta: None } => Box::new(IncCond::for_array(array, *v_step).map_err(bad)?),
        ControllerConfig::IncCond { v_step, delta: Some(d) } => Box::new(IncCond::new(*v_step, *d).map_err(bad)?),
        ControllerConfig::RpropNn { model_path, gamma, threshold_frac, supervised } => {
            if !model_path.is_file() {
                return Err(CliError::Config(format!("model file not found: {}", model_path.display())));
            }
            let net = formats::read_model(model_path)?;
            let supervision = supervised.then(|| SupervisionConfig {
                gamma: *gamma,
                threshold_frac: *threshold_frac,
                i_sc_stc: array.i_sc_stc,
                ..SupervisionConfig::default()
            });
            Box::new(NnController::new(net, array.p_max, supervision).map_err(bad)?)
        }
    })
}
