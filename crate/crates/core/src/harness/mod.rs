//! Run configuration, brute-force oracles, canonical reports and the
//! acceptance driver.

mod acceptance;
pub mod oracles;
mod report;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{FiltrationSpec, WeightParams, R_CAP};
use crate::lct::{MonomialSubscheme, SubschemeSpec};
use crate::toricmodel::{by_name, ModelSpec, ToricFanoModel};

pub use acceptance::{
    run_acceptance_suite, AcceptanceSummary, ConfiguredScan, CriterionResult, CRITERIA,
};
pub use oracles::{
    oracle_anticanonical_volume, oracle_h0_quotient, oracle_lct_bruteforce, oracle_profile_value,
    OracleMethod, OracleResult,
};
pub use report::{canonical_json, matches_golden, write_report};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog name or path to a model JSON file.
    pub model: Option<String>,
    /// Short forms (`point:C`, `divisor:R`, `thick:C:M`) or JSON file paths.
    pub subschemes: Vec<String>,
    pub k_max: u32,
    pub r_list: Vec<u32>,
    pub r_cap: u32,
    pub composition_cap: usize,
    /// Largest `k` the lattice-count oracles may use.
    pub oracle_k_max: u32,
    /// Random `(r, x)` samples per model for the saturation laws.
    pub law_samples: usize,
    /// Random monomial ideals for the threshold cross-check.
    pub lct_samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            subschemes: Vec::new(),
            k_max: 10,
            r_list: vec![1, 2, 4, 8],
            r_cap: R_CAP,
            composition_cap: 50_000,
            oracle_k_max: 12,
            law_samples: 20,
            lct_samples: 10,
            seed: 20240229,
            out: None,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.r_cap == 0 || self.composition_cap == 0 || self.oracle_k_max == 0
        {
            return Err(Error::InvalidInput("caps must be positive".into()));
        }
        if self.r_list.is_empty() || self.r_list.contains(&0) {
            return Err(Error::InvalidInput(
                "r_list must hold positive levels".into(),
            ));
        }
        if let Some(out) = &self.out {
            let parent = out.parent().filter(|p| !p.as_os_str().is_empty());
            if let Some(dir) = parent {
                if !dir.is_dir() {
                    return Err(Error::InvalidInput(format!(
                        "output directory {} does not exist",
                        dir.display()
                    )));
                }
            }
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidInput("threads must be positive".into()));
        }
        match self.load_model()? {
            Some(model) => {
                self.load_subschemes(&model)?;
            }
            None if !self.subschemes.is_empty() => {
                return Err(Error::InvalidInput("subschemes need a model".into()));
            }
            None => {}
        }
        Ok(())
    }

    /// The configured model, if any, resolved through [`load_model`].
    pub fn load_model(&self) -> Result<Option<ToricFanoModel>> {
        self.model.as_deref().map(load_model).transpose()
    }

    pub fn load_subschemes(&self, model: &ToricFanoModel) -> Result<Vec<MonomialSubscheme>> {
        self.subschemes
            .iter()
            .map(|s| load_subscheme(model, s))
            .collect()
    }

    pub fn weight_params(&self, f: &FiltrationSpec) -> WeightParams {
        let mut p = WeightParams::for_filtration(f, self.k_max);
        p.cap = self.composition_cap;
        p.r_cap = self.r_cap;
        p
    }
}

fn read_source(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn looks_like_path(source: &str) -> bool {
    source.ends_with(".json") || source.contains(std::path::MAIN_SEPARATOR) || source.contains('/')
}

/// A catalog name, or a path to a model JSON file.
pub fn load_model(source: &str) -> Result<ToricFanoModel> {
    let path = Path::new(source);
    if path.is_file() || looks_like_path(source) {
        let spec: ModelSpec = serde_json::from_str(&read_source(path)?)?;
        return spec.build();
    }
    by_name(source)
}

/// A short form (`point:C`, `thick:C:M`, `divisor:R`), or a path to a
/// subscheme JSON file.
pub fn load_subscheme(model: &ToricFanoModel, source: &str) -> Result<MonomialSubscheme> {
    let path = Path::new(source);
    let spec: SubschemeSpec = if path.is_file() || looks_like_path(source) {
        serde_json::from_str(&read_source(path)?)?
    } else {
        SubschemeSpec::parse_short(source)?
    };
    spec.build(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg: RunConfig = serde_json::from_str(r#"{"k_max": 2}"#).unwrap();
        assert_eq!(cfg.k_max, 2);
        assert_eq!(cfg.r_list, vec![1, 2, 4, 8]);
        assert!(serde_json::from_str::<RunConfig>(r#"{"kmax": 2}"#).is_err());
        let bad = RunConfig {
            r_list: vec![],
            ..RunConfig::default()
        };
        assert!(bad.validate().is_err());
        let missing = RunConfig {
            out: Some("/nonexistent/dir/report.json".into()),
            ..RunConfig::default()
        };
        assert!(missing.validate().is_err());
        let no_file = RunConfig {
            model: Some("/nonexistent/model.json".into()),
            ..RunConfig::default()
        };
        assert!(matches!(no_file.validate(), Err(Error::InvalidInput(_))));
        let named = RunConfig {
            model: Some("dP6".into()),
            subschemes: vec!["point:3".into(), "divisor:0".into()],
            ..RunConfig::default()
        };
        assert!(named.validate().is_ok());
        let orphan = RunConfig {
            subschemes: vec!["point:0".into()],
            ..RunConfig::default()
        };
        assert!(orphan.validate().is_err());
    }
}
