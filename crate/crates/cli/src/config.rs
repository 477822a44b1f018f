//! Declarative experiment configuration, loaded from TOML and overridden by
//! command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bigs_core::builtin::BUILTIN_NAMES;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputConfig {
    /// Edge-list file of the population graph (or ACS grid contiguity).
    pub edges: Option<PathBuf>,
    /// BIG file with frame, motifs and edges.
    pub big: Option<PathBuf>,
    /// Built-in population: `thompson1990` or `table4-bigs`.
    pub builtin: Option<String>,
    #[serde(default)]
    pub directed: bool,
    /// `label value` lines giving grid values for ACS rules.
    pub values: Option<PathBuf>,
    /// ACS threshold: grids with value above it trigger expansion.
    pub threshold: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    /// `srswor` or `enumerated`.
    #[serde(default = "default_design")]
    pub kind: String,
    pub n: Option<usize>,
    /// Support file for `enumerated`: lines `p: id id ...`.
    pub file: Option<PathBuf>,
}

impl Default for DesignConfig {
    fn default() -> Self {
        DesignConfig {
            kind: default_design(),
            n: None,
            file: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeConfig {
    #[default]
    Enumerate,
    Simulate {
        #[serde(default = "default_replicates")]
        replicates: u64,
        seed: Option<u64>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for report files; standard output when absent.
    pub dir: Option<PathBuf>,
    /// Decimal places in CSV output.
    pub places: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub input: InputConfig,
    /// Motif classes, e.g. `k3`, `c4`, `component:5`.
    #[serde(default)]
    pub motifs: Vec<String>,
    /// Ancestor rule, e.g. `motif-only`, `full:2`, `motif-plus:1`, `acs-bstar`.
    pub rule: Option<String>,
    /// Stage count for `full`, `t` for `motif-plus`, or the `table4-bigs` case.
    pub t: Option<u32>,
    /// Estimators; plain `hh` expands to one estimator per weight scheme.
    #[serde(default = "default_estimators")]
    pub estimators: Vec<String>,
    #[serde(default = "default_weights")]
    pub weights: Vec<String>,
    #[serde(default = "default_scale")]
    pub scale: String,
    #[serde(default)]
    pub design: DesignConfig,
    #[serde(default)]
    pub mode: ModeConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            input: InputConfig::default(),
            motifs: Vec::new(),
            rule: None,
            t: None,
            estimators: default_estimators(),
            weights: default_weights(),
            scale: default_scale(),
            design: DesignConfig::default(),
            mode: ModeConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

fn default_design() -> String {
    "srswor".into()
}

fn default_replicates() -> u64 {
    10_000
}

fn default_estimators() -> Vec<String> {
    vec!["ht".into(), "hh".into()]
}

fn default_weights() -> Vec<String> {
    vec!["equal-share".into(), "inv-alpha".into()]
}

fn default_scale() -> String {
    "total".into()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text).context("invalid experiment configuration")
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).context("cannot serialize configuration")
    }

    /// Checks the structural invariants: exactly one input source, a known
    /// built-in name, and design parameters matching the design kind.
    pub fn validate(&self) -> Result<()> {
        let sources = [
            self.input.edges.is_some(),
            self.input.big.is_some(),
            self.input.builtin.is_some(),
        ];
        match sources.iter().filter(|s| **s).count() {
            1 => {}
            0 => bail!("no input given: set exactly one of edges, big or builtin (--edges, --big, --builtin)"),
            _ => bail!("several inputs given: set exactly one of edges, big or builtin"),
        }
        if let Some(name) = &self.input.builtin {
            if !BUILTIN_NAMES.contains(&name.as_str()) {
                bail!("unknown builtin `{name}` (expected one of {})", BUILTIN_NAMES.join(", "));
            }
        }
        match self.design.kind.as_str() {
            "srswor" => {
                if self.design.file.is_some() {
                    bail!("a design file needs design kind `enumerated`");
                }
            }
            "enumerated" => {
                if self.design.file.is_none() {
                    bail!("design kind `enumerated` needs a support file (--design-file)");
                }
            }
            other => bail!("unknown design `{other}` (expected srswor or enumerated)"),
        }
        if self.estimators.is_empty() {
            bail!("no estimators given");
        }
        if let ModeConfig::Simulate { replicates: 0, .. } = self.mode {
            bail!("simulation needs at least one replicate");
        }
        Ok(())
    }

    /// Fills in a fresh seed for simulation runs that did not set one, so
    /// that the seed is recorded in every report.
    pub fn with_seed(mut self) -> Self {
        if let ModeConfig::Simulate { seed: seed @ None, .. } = &mut self.mode {
            *seed = Some(rand::random());
        }
        self
    }

    pub fn seed(&self) -> Option<u64> {
        match self.mode {
            ModeConfig::Simulate { seed, .. } => seed,
            ModeConfig::Enumerate => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let text = r#"
            motifs = ["c4"]
            rule = "motif-only"
            [input]
            edges = "graph.txt"
            [design]
            n = 2
            [mode]
            kind = "simulate"
            replicates = 500
            seed = 7
        "#;
        let c = ExperimentConfig::from_toml(text).unwrap();
        c.validate().unwrap();
        assert_eq!(c.seed(), Some(7));
        assert_eq!(c.estimators, ["ht", "hh"]);
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap(), c);
    }

    #[test]
    fn exactly_one_input() {
        let mut c = ExperimentConfig::default();
        assert!(c.validate().unwrap_err().to_string().contains("no input"));
        c.input.edges = Some("a".into());
        c.input.builtin = Some("thompson1990".into());
        assert!(c.validate().unwrap_err().to_string().contains("several inputs"));
        c.input.edges = None;
        c.input.builtin = Some("nope".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn generated_seed_is_recorded() {
        let c = ExperimentConfig {
            mode: ModeConfig::Simulate { replicates: 10, seed: None },
            ..ExperimentConfig::default()
        };
        assert!(c.with_seed().seed().is_some());
        assert_eq!(ExperimentConfig::default().with_seed().seed(), None);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml("colour = 3").is_err());
    }
}
