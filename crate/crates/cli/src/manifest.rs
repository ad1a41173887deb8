//! Run bookkeeping: input checks, artifact writing and the manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context, Result};
use deontic_core::lingrep::LabelMap;
use deontic_core::rules::{TriggerLexicon, POLICY_ID};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub args: Vec<String>,
    /// Hash of everything below except the timestamp and artifact hashes,
    /// so reruns with the same inputs share it.
    pub run_hash: String,
    pub config_hash: String,
    pub seed: u64,
    pub lexicon_hash: String,
    pub policy_id: String,
    pub label_map: LabelMap,
    pub inputs: BTreeMap<String, String>,
    pub artifacts: BTreeMap<String, String>,
    pub warnings: Vec<String>,
    pub timestamp: u64,
}

pub struct Run {
    pub out: PathBuf,
    pub config: PipelineConfig,
    pub seed: u64,
    pub lexicon: TriggerLexicon,
    command: String,
    inputs: BTreeMap<String, String>,
    artifacts: BTreeMap<String, String>,
    warnings: Vec<String>,
}

impl Run {
    pub fn new(command: &str, out: &Path, config: PipelineConfig, seed: Option<u64>) -> Result<Self> {
        let lexicon = config.lexicon()?;
        let seed = seed.unwrap_or(config.seed);
        Ok(Run {
            out: out.to_path_buf(),
            config,
            seed,
            lexicon,
            command: command.to_string(),
            inputs: BTreeMap::new(),
            artifacts: BTreeMap::new(),
            warnings: Vec::new(),
        })
    }

    /// Reads an input file; a missing file is a dependency error naming the
    /// file and, when known, the command that produces it.
    pub fn read(&mut self, path: &Path, producer: Option<&str>) -> Result<String> {
        if !path.exists() {
            let hint = producer.map(|c| format!(" (run `{c}` first)")).unwrap_or_default();
            return Err(anyhow!("missing input: {}{hint}", path.display()));
        }
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    pub fn write(&mut self, name: &str, content: &str) -> Result<()> {
        std::fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        let path = self.out.join(name);
        std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
        self.artifacts.insert(name.to_string(), sha256_hex(content.as_bytes()));
        Ok(())
    }

    pub fn warn(&mut self, w: impl Into<String>) {
        let w = w.into();
        eprintln!("warning: {w}");
        self.warnings.push(w);
    }

    /// Writes `<command>.manifest.json` next to the artifacts.
    pub fn finish(mut self) -> Result<()> {
        let config_json = serde_json::to_string(&self.config)?;
        let lexicon_hash = sha256_hex(serde_json::to_string(&self.lexicon)?.as_bytes());
        let label_map = self.config.label_map();
        let args: Vec<String> = std::env::args().skip(1).collect();
        let mut h = Sha256::new();
        for part in [&self.command, &config_json, &self.seed.to_string(), &lexicon_hash, POLICY_ID] {
            h.update(part.as_bytes());
            h.update([0]);
        }
        for (k, v) in &self.inputs {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        let manifest = Manifest {
            command: self.command.clone(),
            args,
            run_hash: hex::encode(h.finalize()),
            config_hash: sha256_hex(config_json.as_bytes()),
            seed: self.seed,
            lexicon_hash,
            policy_id: POLICY_ID.to_string(),
            label_map,
            inputs: std::mem::take(&mut self.inputs),
            artifacts: std::mem::take(&mut self.artifacts),
            warnings: std::mem::take(&mut self.warnings),
            timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        };
        std::fs::create_dir_all(&self.out)?;
        let name = format!("{}.manifest.json", self.command.replace(' ', "-"));
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        std::fs::write(self.out.join(name), text)?;
        Ok(())
    }
}
