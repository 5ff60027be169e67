//! Experiment configuration: one JSON document per run.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use orbitlab::maps::MapDescription;

use crate::CliError;

/// A rational number in config files: a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Text(String),
}

impl RationalSpec {
    pub fn to_rational(&self) -> Result<BigRational, CliError> {
        match self {
            RationalSpec::Int(v) => Ok(BigRational::from(BigInt::from(*v))),
            RationalSpec::Text(s) => {
                let parse_int = |t: &str| {
                    t.trim()
                        .parse::<BigInt>()
                        .map_err(|_| CliError::config(format!("invalid rational '{}'", s)))
                };
                match s.split_once('/') {
                    None => Ok(BigRational::from(parse_int(s)?)),
                    Some((num, den)) => {
                        let den = parse_int(den)?;
                        if den.is_zero() {
                            return Err(CliError::config(format!(
                                "zero denominator in '{}'",
                                s
                            )));
                        }
                        Ok(BigRational::new(parse_int(num)?, den))
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub count: usize,
    pub coord_bound: u64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixBatchConfig {
    pub count: usize,
    pub dim: usize,
    pub entry_bound: i64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitCheckConfig {
    pub count: usize,
    pub horizon: usize,
    pub slack: f64,
}

/// All experiment parameters; each command validates the fields it needs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub map: Option<MapDescription>,
    #[serde(default)]
    pub horizon: Option<usize>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub d_max: Option<u32>,
    #[serde(default)]
    pub index: Option<usize>,
    #[serde(default)]
    pub seed_point: Option<Vec<RationalSpec>>,
    #[serde(default)]
    pub sampler: Option<SamplerConfig>,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub m_max: Option<u32>,
    #[serde(default)]
    pub matrices: Option<MatrixBatchConfig>,
    #[serde(default)]
    pub orbit_checks: Option<OrbitCheckConfig>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub term_cap: Option<usize>,
}

/// Parsed config plus the provenance recorded in every output.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub rng_seed: u64,
}

pub fn load_config(path: &Path, seed_override: Option<u64>) -> Result<LoadedConfig, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {}", path.display(), e)))?;
    let config: ExperimentConfig = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::config(format!("config {}: {}", path.display(), e)))?;
    let config_hash = hex_digest(&bytes);
    let rng_seed = seed_override.or(config.rng_seed).unwrap_or(0);
    Ok(LoadedConfig {
        config,
        config_hash,
        rng_seed,
    })
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

impl ExperimentConfig {
    pub fn require_map(&self) -> Result<&MapDescription, CliError> {
        self.map
            .as_ref()
            .ok_or_else(|| CliError::Usage("config requires a \"map\" entry".into()))
    }

    pub fn horizon_or(&self, default: usize) -> usize {
        self.horizon.unwrap_or(default)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// Term cap precedence: environment, then config, then the default.
    pub fn effective_term_cap(&self) -> usize {
        if let Ok(v) = std::env::var("ORBITLAB_TERM_CAP") {
            if let Ok(cap) = v.parse::<usize>() {
                return cap;
            }
        }
        self.term_cap.unwrap_or(orbitlab::degrees::DEFAULT_TERM_CAP)
    }
}
