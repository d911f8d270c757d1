//! Run configuration read from a TOML file.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use ufh_core::trees::TreeSpec;
use ufh_core::FamilySpec;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_cap")]
    pub max_circuits: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub family: FamilySpec,
    #[serde(default)]
    pub windows: WindowsConfig,
    #[serde(default)]
    pub rips: RipsConfig,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub probe: ProbeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeConfig>,
}

fn default_cap() -> usize {
    ufh_core::cyclespace::DEFAULT_CIRCUIT_CAP
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowsConfig {
    pub radii: Vec<usize>,
    #[serde(default = "one")]
    pub margin: usize,
}

impl Default for WindowsConfig {
    fn default() -> Self {
        Self { radii: vec![4, 6, 8], margin: 1 }
    }
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RipsConfig {
    pub radii: Vec<usize>,
}

impl Default for RipsConfig {
    fn default() -> Self {
        Self { radii: vec![1, 2] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub r_max: usize,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { r_max: 8 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_coefficient")]
    pub max_coefficient: i64,
    #[serde(default = "default_budget")]
    pub node_budget: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self { samples: default_samples(), max_coefficient: default_coefficient(), node_budget: default_budget() }
    }
}

fn default_samples() -> usize {
    20
}

fn default_coefficient() -> i64 {
    3
}

fn default_budget() -> usize {
    200_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeConfig {
    /// Branching spec; ignored when `random_spec` is set.
    #[serde(default)]
    pub spec: TreeSpec,
    pub depth: usize,
    pub ray_len: usize,
    #[serde(default = "default_cycles")]
    pub cycles: usize,
    /// Largest coefficient of the random bip combinations.
    #[serde(default = "default_coefficient")]
    pub max_coefficient: i64,
    #[serde(default)]
    pub random_spec: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb_teeth: Option<usize>,
}

fn default_cycles() -> usize {
    100
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let config: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        self.family.validate()?;
        if self.windows.radii.is_empty() || self.windows.radii.contains(&0) {
            return bad("window radii must be nonempty and positive");
        }
        if self.rips.radii.is_empty() || self.rips.radii.contains(&0) {
            return bad("Rips radii must be nonempty and positive");
        }
        if self.windows.margin >= *self.windows.radii.iter().min().expect("nonempty") {
            return bad("margin must be smaller than every window radius");
        }
        if self.profile.r_max < 3 {
            return bad("r_max must be at least 3");
        }
        if self.max_circuits == 0 {
            return bad("max_circuits must be positive");
        }
        if self.probe.max_coefficient < 1 {
            return bad("probe max_coefficient must be positive");
        }
        if let Some(t) = &self.tree {
            if t.depth == 0 || t.ray_len < 2 {
                return bad("tree depth must be positive and ray_len at least 2");
            }
            if t.max_coefficient < 1 {
                return bad("tree max_coefficient must be positive");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let c = RunConfig::from_toml("[family]\nkind = \"biinfinite_line\"\n").unwrap();
        assert_eq!(c.family, FamilySpec::BiinfiniteLine);
        assert_eq!(c.windows.radii, vec![4, 6, 8]);
        assert_eq!(c.seed, 0);
    }

    #[test]
    fn full_config() {
        let text = r#"
seed = 11
max_circuits = 5000

[family]
kind = "grid2d"
triangulated = true

[windows]
radii = [6, 8]
margin = 2

[rips]
radii = [1, 3]

[profile]
r_max = 6

[probe]
samples = 5

[tree]
spec = "-2(1,3),2"
depth = 3
ray_len = 5
comb_teeth = 8
"#;
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.family, FamilySpec::Grid2d { triangulated: true });
        assert_eq!(c.tree.as_ref().unwrap().spec.to_string(), "-2(1,3),2");
        assert_eq!(c.probe.max_coefficient, 3);
        let again = RunConfig::from_toml(&toml::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("[family]\nkind = \"nope\"\n").is_err());
        let zero = "[family]\nkind = \"biinfinite_line\"\n[rips]\nradii = [0]\n";
        assert!(RunConfig::from_toml(zero).is_err());
        let margin = "[family]\nkind = \"biinfinite_line\"\n[windows]\nradii = [2]\nmargin = 2\n";
        assert!(RunConfig::from_toml(margin).is_err());
        assert!(RunConfig::from_toml("seed = 1\nbogus = 2\n[family]\nkind = \"ladder\"\n").is_err());
    }
}
