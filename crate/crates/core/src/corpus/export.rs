use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::AnnotationRecord;
use crate::error::{Error, Result};
use crate::rules::{spans_to_tags, DeonticType};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    /// Prefix a reserved `[GROUP]` token.
    #[default]
    AgentToken,
    None,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Anonymize {
    #[default]
    Off,
    /// One fixed replacement per alias for the whole corpus.
    Consistent,
    /// A fresh seeded draw per sentence, shared by all occurrences of an
    /// alias within that sentence.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExportOptions {
    pub conditioning: Conditioning,
    pub anonymize: Anonymize,
    pub seed: u64,
    /// Aliases to anonymise; empty means every distinct record agent.
    pub aliases: Vec<String>,
    /// Replacement tokens.
    pub pool: Vec<String>,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            conditioning: Conditioning::AgentToken,
            anonymize: Anonymize::Off,
            seed: 0,
            aliases: Vec::new(),
            pool: (b'A'..=b'Z').map(|c| format!("Party{}", c as char)).collect(),
        }
    }
}

/// A record ready for a sequence model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub sentence_id: String,
    pub agent: String,
    pub agent_group: String,
    pub text: String,
    pub tokens: Vec<String>,
    pub labels: BTreeSet<DeonticType>,
    /// One BIOS tag per entry of `tokens`.
    pub tags: Vec<String>,
}

/// Reserved conditioning token for an agent group.
pub fn conditioning_token(group: &str) -> String {
    format!("[{}]", group.to_uppercase())
}

fn sentence_rng(seed: u64, sentence_id: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(sentence_id.as_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

struct Replacer {
    aliases: Vec<String>,
    text_re: Regex,
}

impl Replacer {
    fn new(mut aliases: Vec<String>) -> Result<Self> {
        aliases.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let alternation = aliases.iter().map(|a| regex::escape(a)).collect::<Vec<_>>().join("|");
        let text_re = RegexBuilder::new(&format!(r"\b(?:{alternation})\b"))
            .case_insensitive(true)
            .build()
            .map_err(|e| Error::Config(format!("alias pattern: {e}")))?;
        Ok(Replacer { aliases, text_re })
    }

    fn canonical(&self, found: &str) -> Option<&String> {
        let found = found.to_lowercase();
        self.aliases.iter().find(|a| a.to_lowercase() == found)
    }

    fn text(&self, text: &str, map: &BTreeMap<String, String>) -> String {
        self.text_re
            .replace_all(text, |c: &regex::Captures| {
                self.canonical(&c[0])
                    .and_then(|a| map.get(a))
                    .cloned()
                    .unwrap_or_else(|| c[0].to_string())
            })
            .into_owned()
    }

    /// Replaces alias token runs with one token each. Returns the new
    /// tokens and the new index of every old token (`None` inside a
    /// collapsed run, except for its first token).
    fn tokens(&self, tokens: &[String], map: &BTreeMap<String, String>) -> (Vec<String>, Vec<Option<usize>>) {
        let split: Vec<Vec<String>> = self
            .aliases
            .iter()
            .map(|a| a.split_whitespace().map(str::to_lowercase).collect())
            .collect();
        let lower: Vec<String> = tokens.iter().map(|t| t.to_lowercase()).collect();
        let mut out = Vec::new();
        let mut index = vec![None; tokens.len()];
        let mut i = 0;
        while i < tokens.len() {
            let hit = split
                .iter()
                .enumerate()
                .find(|(_, parts)| !parts.is_empty() && lower[i..].starts_with(parts));
            match hit {
                Some((k, parts)) if map.contains_key(&self.aliases[k]) => {
                    index[i] = Some(out.len());
                    out.push(map[&self.aliases[k]].clone());
                    i += parts.len();
                }
                _ => {
                    index[i] = Some(out.len());
                    out.push(tokens[i].clone());
                    i += 1;
                }
            }
        }
        (out, index)
    }
}

/// Builds model inputs with optional agent conditioning and alias
/// anonymisation. Tags are computed on the (possibly anonymised) tokens;
/// with agent-token conditioning the prefix token is tagged `O`.
pub fn export_conditioned<F: Fn(&str) -> String>(
    records: &[AnnotationRecord],
    options: &ExportOptions,
    group_of: F,
) -> Result<Vec<ModelRecord>> {
    let aliases: Vec<String> = if options.aliases.is_empty() {
        records.iter().map(|r| r.agent.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    } else {
        options.aliases.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
    };
    let reserved: BTreeSet<String> = records
        .iter()
        .map(|r| conditioning_token(&group_of(&r.agent)).to_lowercase())
        .chain(options.pool.iter().map(|p| p.to_lowercase()))
        .collect();
    for a in &aliases {
        if reserved.contains(&a.to_lowercase()) {
            return Err(Error::Validation(format!("alias `{a}` collides with a reserved token")));
        }
    }
    if options.anonymize != Anonymize::Off && aliases.len() > options.pool.len() {
        return Err(Error::Config(format!(
            "{} aliases but only {} replacement tokens",
            aliases.len(),
            options.pool.len()
        )));
    }
    let replacer = Replacer::new(aliases.clone())?;
    let consistent: BTreeMap<String, String> = aliases.iter().cloned().zip(options.pool.iter().cloned()).collect();

    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let group = group_of(&r.agent);
        let tokens: Vec<String> = if r.tokens.is_empty() {
            r.text.as_deref().unwrap_or("").split_whitespace().map(String::from).collect()
        } else {
            r.tokens.clone()
        };
        let text = r.text.clone().unwrap_or_else(|| tokens.join(" "));
        let map = match options.anonymize {
            Anonymize::Off => BTreeMap::new(),
            Anonymize::Consistent => consistent.clone(),
            Anonymize::Random => {
                let mut pool = options.pool.clone();
                pool.shuffle(&mut sentence_rng(options.seed, &r.sentence_id));
                aliases.iter().cloned().zip(pool).collect()
            }
        };
        let (mut text, mut tokens, spans) = if map.is_empty() {
            (text, tokens, r.spans.clone())
        } else {
            let (new_tokens, index) = replacer.tokens(&tokens, &map);
            let mut spans = Vec::with_capacity(r.spans.len());
            for s in &r.spans {
                let (Some(a), Some(b)) = (
                    index.get(s.start).copied().flatten(),
                    index.get(s.end).copied().flatten(),
                ) else {
                    return Err(Error::Validation(format!(
                        "{}/{}: span {s:?} overlaps an anonymised alias",
                        r.sentence_id, r.agent
                    )));
                };
                spans.push(crate::rules::Span::new(s.ty, a, b));
            }
            (replacer.text(&text, &map), new_tokens, spans)
        };
        let mut tags = spans_to_tags(&spans, tokens.len())
            .map_err(|e| Error::Validation(format!("{}/{}: {e}", r.sentence_id, r.agent)))?
            .to_strings();
        if options.conditioning == Conditioning::AgentToken {
            let tok = conditioning_token(&group);
            text = format!("{tok} {text}");
            tokens.insert(0, tok);
            tags.insert(0, "O".to_string());
        }
        let agent = replacer
            .canonical(&r.agent)
            .and_then(|a| map.get(a))
            .cloned()
            .unwrap_or_else(|| r.agent.clone());
        out.push(ModelRecord {
            sentence_id: r.sentence_id.clone(),
            agent,
            agent_group: group,
            text,
            tokens,
            labels: r.labels.clone(),
            tags,
        });
    }
    Ok(out)
}
