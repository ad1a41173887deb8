use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use deontic_core::corpus::{ExportOptions, Split};
use deontic_core::eval::MacroOver;
use deontic_core::ingest::AliasConfig;
use deontic_core::lingrep::LabelMap;
use deontic_core::rules::{SpanBaselineMap, TriggerLexicon, POLICY_ID};
use serde::{Deserialize, Serialize};

/// Contents of the `--config` TOML file. Every section is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub seed: u64,
    /// Must name the built-in resolution policy when set.
    pub policy: Option<String>,
    /// Extra `type<TAB>pattern` rows appended to the bundled lexicon.
    pub lexicon_extensions: Option<PathBuf>,
    pub aliases: AliasConfig,
    pub labels: Option<LabelMap>,
    pub span_baseline: Option<SpanBaselineMap>,
    pub metrics: MetricOptions,
    pub export: ExportOptions,
    pub split: SplitOptions,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricOptions {
    pub macro_over: MacroOver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitOptions {
    pub ratios: BTreeMap<Split, f64>,
    /// Contract id to split, applied before the greedy assignment.
    pub pinned: BTreeMap<String, Split>,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions {
            ratios: BTreeMap::from([(Split::Train, 0.67), (Split::Dev, 0.05), (Split::Test, 0.28)]),
            pinned: BTreeMap::new(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).with_context(|| format!("missing input: config file {}", path.display()))?;
        let config: PipelineConfig = toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        if let Some(p) = &config.policy {
            if p != POLICY_ID {
                bail!("config names policy `{p}` but only `{POLICY_ID}` is built in");
            }
        }
        if let Some(l) = &config.lexicon_extensions {
            if !l.exists() {
                bail!("missing input: lexicon extensions {}", l.display());
            }
        }
        Ok(config)
    }

    pub fn lexicon(&self) -> Result<TriggerLexicon> {
        match &self.lexicon_extensions {
            None => Ok(TriggerLexicon::bundled()),
            Some(p) => {
                let extra = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Ok(TriggerLexicon::with_extensions(&extra)?)
            }
        }
    }

    pub fn label_map(&self) -> LabelMap {
        self.labels.clone().unwrap_or_default()
    }

    pub fn span_map(&self) -> SpanBaselineMap {
        self.span_baseline.clone().unwrap_or_default()
    }

    pub fn group_of(&self, alias: &str) -> String {
        self.aliases.group_of(alias)
    }
}
