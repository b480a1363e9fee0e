//! Run configuration and manifest.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use hgpprep::codes::{Thickening, ThickeningKind};
use hgpprep::decoders::{BpConfig, DecoderConfig, OsdConfig, SweepSet};
use hgpprep::protocol::{Basis, Experiment};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::spec::ClassicalSpec;

pub const MANIFEST_SCHEMA: &str = "hgpprep-manifest/1";

/// Where the base code comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CodeSource {
    Bundle { bundle: PathBuf },
    Generated {
        family: String,
        classical: String,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderSpec {
    #[serde(default = "default_depth")]
    pub bp_iters: usize,
    #[serde(default = "default_depth")]
    pub osd_depth: usize,
    #[serde(default = "default_sweep")]
    pub osd_sweep: String,
}

fn default_depth() -> usize {
    20
}

fn default_sweep() -> String {
    SweepSet::Full.name().into()
}

impl Default for DecoderSpec {
    fn default() -> Self {
        Self {
            bp_iters: default_depth(),
            osd_depth: default_depth(),
            osd_sweep: default_sweep(),
        }
    }
}

impl DecoderSpec {
    pub fn build(&self) -> Result<DecoderConfig> {
        Ok(DecoderConfig {
            bp: BpConfig {
                max_iters: self.bp_iters,
                ..BpConfig::default()
            },
            osd: OsdConfig {
                search_depth: self.osd_depth,
                sweep: SweepSet::parse(&self.osd_sweep)?,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub code: CodeSource,
    /// Thickening descriptors: `rep:L` or `star:Z,B`.
    pub thickenings: Vec<String>,
    /// `x` (syndrome noise, X̄ sector), `z` (bulk Z noise, Z̄ sector) or `full`.
    #[serde(default = "default_experiment")]
    pub experiment: String,
    pub noise_grid: Vec<f64>,
    #[serde(default)]
    pub decoder: DecoderSpec,
    pub trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    /// `plus` or `zero`.
    #[serde(default = "default_basis")]
    pub basis: String,
    /// Also run the repeated-measurement baseline for every repetition thickening.
    #[serde(default)]
    pub baseline: bool,
    /// Data X errors between baseline rounds.
    #[serde(default = "default_true")]
    pub baseline_data_noise: bool,
    #[serde(default)]
    pub stage1_data_noise: bool,
    #[serde(default)]
    pub whole_bulk: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_experiment() -> String {
    "x".into()
}

fn default_basis() -> String {
    "plus".into()
}

fn default_true() -> bool {
    true
}

/// Output of `simulate`, re-ingestible as a config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub run_id: String,
    pub code_id: String,
    pub library_version: String,
    pub seed_derivation: String,
    pub config: RunConfig,
}

impl RunConfig {
    /// Reads a config file or the `config` member of a manifest.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("{}: not valid JSON", path.display()))?;
        let cfg: RunConfig = if value.get("schema").and_then(|s| s.as_str()) == Some(MANIFEST_SCHEMA) {
            let m: Manifest = serde_json::from_value(value).with_context(|| format!("{}: bad manifest", path.display()))?;
            m.config
        } else {
            serde_json::from_value(value).with_context(|| format!("{}: bad run config", path.display()))?
        };
        let base = path.parent().unwrap_or(Path::new("."));
        let cfg = cfg.resolve_paths(base);
        cfg.validate()?;
        Ok(cfg)
    }

    fn resolve_paths(mut self, base: &Path) -> Self {
        if let CodeSource::Bundle { bundle } = &mut self.code {
            if bundle.is_relative() {
                *bundle = base.join(&*bundle);
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        match &self.code {
            CodeSource::Bundle { bundle } => {
                if !bundle.join("bundle.json").is_file() {
                    bail!("field `code.bundle`: {} is not a bundle directory", bundle.display());
                }
            }
            CodeSource::Generated { family, classical, .. } => {
                if family != "hgp" {
                    bail!("field `code.family`: unsupported family {family:?} (expected \"hgp\")");
                }
                ClassicalSpec::parse(classical).context("field `code.classical`")?;
            }
        }
        if self.thickenings.is_empty() {
            bail!("field `thickenings`: at least one thickening is required");
        }
        for t in &self.thickenings {
            ThickeningKind::parse(t).map_err(|e| anyhow!("field `thickenings`: {e}"))?;
        }
        if self.noise_grid.is_empty() {
            bail!("field `noise_grid`: the grid is empty");
        }
        if let Some(p) = self.noise_grid.iter().find(|p| !(0.0..=0.5).contains(*p)) {
            bail!("field `noise_grid`: {p} is outside [0, 0.5]");
        }
        if self.trials == 0 {
            bail!("field `trials`: must be at least 1");
        }
        Experiment::parse(&self.experiment).map_err(|e| anyhow!("field `experiment`: {e}"))?;
        self.basis_value()?;
        self.decoder.build().context("field `decoder`")?;
        if self.workers == Some(0) {
            bail!("field `workers`: must be at least 1");
        }
        Ok(())
    }

    pub fn basis_value(&self) -> Result<Basis> {
        match self.basis.as_str() {
            "plus" => Ok(Basis::Plus),
            "zero" => Ok(Basis::Zero),
            b => bail!("field `basis`: {b:?} is not \"plus\" or \"zero\""),
        }
    }

    pub fn thickening_values(&self) -> Result<Vec<Thickening>> {
        self.thickenings
            .iter()
            .map(|t| Ok(Thickening::new(ThickeningKind::parse(t)?)?))
            .collect()
    }

    /// Stable identifier: a digest of the canonical JSON form, worker count excluded.
    pub fn run_id(&self) -> String {
        let mut c = self.clone();
        c.workers = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> &'static str {
        r#"{"code": {"family": "hgp", "classical": "rep:d=3"}, "thickenings": ["rep:3", "star:3,2"],
            "noise_grid": [0.01, 0.02], "trials": 10}"#
    }

    #[test]
    fn defaults_fill_in() {
        let c: RunConfig = serde_json::from_str(sample()).unwrap();
        c.validate().unwrap();
        assert_eq!(c.experiment, "x");
        assert_eq!(c.decoder, DecoderSpec::default());
        assert!(c.baseline_data_noise);
        assert_eq!(c.thickening_values().unwrap().len(), 2);
    }

    #[test]
    fn errors_name_the_field() {
        let mut c: RunConfig = serde_json::from_str(sample()).unwrap();
        c.noise_grid.clear();
        assert!(c.validate().unwrap_err().to_string().contains("noise_grid"));
        c.noise_grid = vec![0.7];
        assert!(c.validate().unwrap_err().to_string().contains("noise_grid"));
        c.noise_grid = vec![0.1];
        c.trials = 0;
        assert!(c.validate().unwrap_err().to_string().contains("trials"));
        c.trials = 1;
        c.thickenings = vec!["tree:4".into()];
        assert!(c.validate().unwrap_err().to_string().contains("thickenings"));
        let bad = sample().replace("\"trials\"", "\"trails\"");
        let e = serde_json::from_str::<RunConfig>(&bad).unwrap_err().to_string();
        assert!(e.contains("trails") || e.contains("trials"), "{e}");
    }

    #[test]
    fn run_id_ignores_workers() {
        let a: RunConfig = serde_json::from_str(sample()).unwrap();
        let mut b = a.clone();
        b.workers = Some(3);
        assert_eq!(a.run_id(), b.run_id());
        b.trials = 11;
        assert_ne!(a.run_id(), b.run_id());
    }
}
