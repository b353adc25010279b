//! Scenario files: every model parameter, the campus source and the policy,
//! in one TOML document.

use crate::engine::{EngineParams, ModelParams, Simulation};
use crate::net::{read_enrollment, BipartiteNetwork, NetError};
use crate::policy::PolicyConfig;
use crate::progression::ProgressionParams;
use crate::synthetic::{generate_synthetic_campus, SyntheticCampusParams};
use crate::testing::TestingConfig;
use crate::transmission::TransmissionParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use thiserror::Error;

/// The documented default scenario.
pub const DEFAULT_SCENARIO_TOML: &str = include_str!("../scenarios/default.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampusSource {
    #[default]
    Synthetic,
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkConfig {
    pub source: CampusSource,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enrollment: Option<PathBuf>,
    pub synthetic: SyntheticCampusParams,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig { source: CampusSource::Synthetic, seed: 2020, enrollment: None, synthetic: Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub network: NetworkConfig,
    pub transmission: TransmissionParams,
    pub progression: ProgressionParams,
    pub testing: TestingConfig,
    pub policy: PolicyConfig,
    pub engine: EngineParams,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Syntax(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

impl ConfigError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::Parse { line, .. } => Some(*line),
            _ => None,
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a TOML scenario.
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| match e.span() {
            Some(span) => ConfigError::Parse {
                line: text[..span.start.min(text.len())].matches('\n').count() + 1,
                message: e.message().to_string(),
            },
            None => ConfigError::Syntax(e.message().to_string()),
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Parses and validates a JSON scenario with the same structure.
    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| ConfigError::Parse { line: e.line(), message: e.to_string() })?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |r: Result<(), String>| r.map_err(ConfigError::Invalid);
        if self.network.source == CampusSource::File && self.network.enrollment.is_none() {
            return Err(ConfigError::Invalid("network.enrollment is required when network.source = \"file\"".into()));
        }
        check(self.network.synthetic.validate())?;
        check(self.transmission.validate())?;
        check(self.progression.validate())?;
        check(self.engine.validate())?;
        check(self.policy().validate(self.engine.horizon_days))
    }

    /// The policy with its testing section attached.
    pub fn policy(&self) -> PolicyConfig {
        PolicyConfig { testing: self.testing, ..self.policy }
    }

    /// Replaces the policy, including its testing section.
    pub fn set_policy(&mut self, policy: PolicyConfig) {
        self.testing = policy.testing;
        self.policy = PolicyConfig { testing: TestingConfig::default(), ..policy };
    }

    pub fn model_params(&self) -> ModelParams {
        ModelParams { transmission: self.transmission, progression: self.progression, engine: self.engine }
    }

    /// Stable identifier: the first 16 hex digits of a SHA-256 over the
    /// canonical JSON form.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("scenario serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Builds the campus. Relative enrollment paths resolve against
    /// `base_dir` when given.
    pub fn load_network(&self, base_dir: Option<&Path>) -> Result<BipartiteNetwork, NetError> {
        match self.network.source {
            CampusSource::Synthetic => {
                Ok(generate_synthetic_campus(&self.network.synthetic, self.network.seed)?.network)
            }
            CampusSource::File => {
                let path = self.network.enrollment.as_deref().ok_or_else(|| {
                    NetError::InvalidParams("network.enrollment is required for a file campus".into())
                })?;
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.to_path_buf(),
                };
                Ok(read_enrollment(&path)?.network)
            }
        }
    }

    pub fn simulation(&self, net: Arc<BipartiteNetwork>) -> Simulation {
        Simulation::new(net, self.policy(), self.model_params())
    }
}
