//! Config files for `synth` and `figure1`. Simulation configs are
//! [`clusterwise::sim::SimulationConfig`].

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use clusterwise::sim::SyntheticPersonConfig;
use clusterwise::{Error, Result};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub schema_version: u32,
    pub master_seed: u64,
    pub population: SyntheticPersonConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Figure1Config {
    pub schema_version: u32,
    pub master_seed: u64,
    pub repetitions: usize,
    pub records_per_sample: usize,
    pub population: SyntheticPersonConfig,
}

fn check_version(found: u32, problems: &mut Vec<String>) {
    if found != CONFIG_SCHEMA_VERSION {
        problems.push(format!("schema_version: expected {CONFIG_SCHEMA_VERSION}, found {found}"));
    }
}

fn population_problems(p: &SyntheticPersonConfig, problems: &mut Vec<String>) {
    if let Err(e) = p.validate() {
        problems.push(format!("population: {e}"));
    }
}

fn finish(problems: Vec<String>) -> Result<()> {
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Schema(problems.join("; ")))
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        check_version(self.schema_version, &mut problems);
        population_problems(&self.population, &mut problems);
        finish(problems)
    }
}

impl Figure1Config {
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        check_version(self.schema_version, &mut problems);
        if self.repetitions == 0 {
            problems.push("repetitions: must be at least 1".into());
        }
        if self.records_per_sample == 0 {
            problems.push("records_per_sample: must be at least 1".into());
        }
        population_problems(&self.population, &mut problems);
        finish(problems)
    }
}

pub fn parse_toml<T: DeserializeOwned>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| Error::Schema(e.to_string().trim_end().to_owned()))
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    parse_toml(&fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synth_config_parses() {
        let cfg: SynthConfig = parse_toml(
            "schema_version = 1\nmaster_seed = 3\n[population]\npopulation_size = 50\nduplication_rate = 0.2\n",
        )
        .unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.population.population_size, 50);
    }

    #[test]
    fn invalid_fields_are_named() {
        let cfg: Figure1Config = parse_toml(
            "schema_version = 2\nmaster_seed = 3\nrepetitions = 0\nrecords_per_sample = 10\n\
             [population]\npopulation_size = 50\nduplication_rate = 1.5\n",
        )
        .unwrap();
        let msg = cfg.validate().unwrap_err().to_string();
        for field in ["schema_version", "repetitions", "duplication_rate"] {
            assert!(msg.contains(field), "{msg}");
        }
        assert!(parse_toml::<SynthConfig>("schema_version = 1\nmaster_seed = 1\nbogus = 2\n").is_err());
    }
}
