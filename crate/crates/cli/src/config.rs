//! Run configuration: a flat TOML file overlaid by command-line flags.
//!
//! Keys (all optional in the file):
//!
//! | key                | type    | default        | range                        |
//! |--------------------|---------|----------------|------------------------------|
//! | `experiment`       | string  | (subcommand)   | identities, six-state, qpt, compensation |
//! | `turn`             | string  | `frm`          | mirror, frm                  |
//! | `shots`            | integer | 10000          | ≥ 0; 0 means exact probabilities |
//! | `depolarizing_p`   | float   | 0              | [0, 1]                       |
//! | `disturbance_mode` | string  | `pockels_pair` | pockels_pair, haar           |
//! | `steps`            | integer | 100            | ≥ 1                          |
//! | `seed`             | integer | 0              | any u64                      |
//! | `output_dir`       | path    | `out`          |                              |

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use faraday_core::compensation::DisturbanceMode;
use faraday_core::elements::Turn;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Identities,
    SixState,
    Qpt,
    Compensation,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::Identities => "identities",
            Experiment::SixState => "six-state",
            Experiment::Qpt => "qpt",
            Experiment::Compensation => "compensation",
        })
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "identities" => Ok(Experiment::Identities),
            "six-state" | "six_state" => Ok(Experiment::SixState),
            "qpt" => Ok(Experiment::Qpt),
            "compensation" | "compensate" => Ok(Experiment::Compensation),
            other => Err(format!("unknown experiment `{other}`")),
        }
    }
}

/// Contents of a config file. Every key is optional; unknown keys are errors.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub turn: Option<String>,
    pub shots: Option<u64>,
    pub depolarizing_p: Option<f64>,
    pub disturbance_mode: Option<String>,
    pub steps: Option<u64>,
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("config {}: {e}", path.display()))
    }

    /// Fills every key set in `flags`, keeping the file's value otherwise.
    pub fn overlay(self, flags: FileConfig) -> FileConfig {
        FileConfig {
            experiment: flags.experiment.or(self.experiment),
            turn: flags.turn.or(self.turn),
            shots: flags.shots.or(self.shots),
            depolarizing_p: flags.depolarizing_p.or(self.depolarizing_p),
            disturbance_mode: flags.disturbance_mode.or(self.disturbance_mode),
            steps: flags.steps.or(self.steps),
            seed: flags.seed.or(self.seed),
            output_dir: flags.output_dir.or(self.output_dir),
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub turn: Turn,
    pub shots: u64,
    pub depolarizing_p: f64,
    pub disturbance_mode: DisturbanceMode,
    pub steps: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl TryFrom<FileConfig> for ExperimentConfig {
    type Error = String;

    fn try_from(c: FileConfig) -> Result<Self, String> {
        let experiment = c
            .experiment
            .ok_or("no experiment given: pass a subcommand or set `experiment`")?
            .parse()?;
        let turn = match c.turn.as_deref() {
            None => Turn::Frm,
            Some(s) => s.parse().map_err(|e: faraday_core::Error| e.to_string())?,
        };
        let depolarizing_p = c.depolarizing_p.unwrap_or(0.0);
        if !(0.0..=1.0).contains(&depolarizing_p) {
            return Err(format!(
                "depolarizing_p = {depolarizing_p} is outside [0, 1]"
            ));
        }
        let disturbance_mode = match c.disturbance_mode.as_deref() {
            None => DisturbanceMode::PockelsPair,
            Some(s) => s.parse().map_err(|e: faraday_core::Error| e.to_string())?,
        };
        let steps = c.steps.unwrap_or(100);
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        let steps = usize::try_from(steps).map_err(|_| format!("steps = {steps} is too large"))?;
        Ok(ExperimentConfig {
            experiment,
            turn,
            shots: c.shots.unwrap_or(10_000),
            depolarizing_p,
            disturbance_mode,
            steps,
            seed: c.seed.unwrap_or(0),
            output_dir: c.output_dir.unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = ExperimentConfig::try_from(FileConfig {
            experiment: Some("qpt".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(c.turn, Turn::Frm);
        assert_eq!(c.shots, 10_000);
        assert_eq!(c.steps, 100);
        assert_eq!(c.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn flags_override_file() {
        let file = FileConfig::parse("experiment = \"qpt\"\nseed = 3\nshots = 50\n").unwrap();
        let flags = FileConfig {
            seed: Some(9),
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.shots, Some(50));
    }

    #[test]
    fn unknown_key_rejected() {
        let err = FileConfig::parse("shotz = 10\n").unwrap_err();
        assert!(err.contains("shotz"), "{err}");
    }

    #[test]
    fn ranges_checked() {
        let base = FileConfig {
            experiment: Some("compensation".into()),
            ..Default::default()
        };
        let bad_p = FileConfig {
            depolarizing_p: Some(1.5),
            ..base.clone()
        };
        assert!(ExperimentConfig::try_from(bad_p).is_err());
        let bad_steps = FileConfig {
            steps: Some(0),
            ..base.clone()
        };
        assert!(ExperimentConfig::try_from(bad_steps).is_err());
        let bad_turn = FileConfig {
            turn: Some("prism".into()),
            ..base
        };
        assert!(ExperimentConfig::try_from(bad_turn).is_err());
        assert!(ExperimentConfig::try_from(FileConfig::default()).is_err());
    }
}
