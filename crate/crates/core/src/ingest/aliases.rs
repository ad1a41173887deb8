use std::collections::BTreeMap;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::{Provision, HEADER_WINDOW};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Company,
    Person,
}

/// A named party mention. Offsets are UTF-8 byte offsets into the text of
/// provision `provision_index`, end exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntityMention {
    pub provision_index: usize,
    pub start: usize,
    pub end: usize,
    pub kind: EntityKind,
}

/// Short name a contract uses for a party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentAlias {
    pub alias: String,
    pub canonical_group: String,
    pub frequency: usize,
}

/// Alias extraction settings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct AliasConfig {
    /// Applied to the text right after a mention; group 1 is the alias.
    pub pattern: String,
    /// Minimum number of extractions for an alias to be kept.
    pub threshold: usize,
    /// Aliases kept regardless of frequency.
    pub overrides: Vec<String>,
    /// Lowercased alias to reporting group.
    pub groups: BTreeMap<String, String>,
}

/// Default parenthetical alias pattern: an optional comma, an opening
/// parenthesis, optional "hereinafter (referred to as|called)", optional
/// "the", an optionally quoted capitalised name, and the closing
/// parenthesis.
pub const DEFAULT_ALIAS_PATTERN: &str = r#"^\s*,?\s*\(\s*(?:hereinafter\s+(?:referred\s+to\s+as\s+|called\s+)?)?(?:[Tt]he\s+)?["“”'‘’]?\s*([A-Z][A-Za-z0-9&\-]*(?:\s+[A-Z][A-Za-z0-9&\-]*){0,3})\s*["“”'‘’]?\s*\)"#;

impl Default for AliasConfig {
    fn default() -> Self {
        let mut groups = BTreeMap::new();
        for a in ["tenant", "subtenant", "lessee"] {
            groups.insert(a.to_string(), "Tenant".to_string());
        }
        for a in ["landlord", "sublandlord", "lessor"] {
            groups.insert(a.to_string(), "Landlord".to_string());
        }
        AliasConfig {
            pattern: DEFAULT_ALIAS_PATTERN.to_string(),
            threshold: 2,
            overrides: Vec::new(),
            groups,
        }
    }
}

impl AliasConfig {
    /// Reporting group of an alias; unmapped aliases form their own group.
    pub fn group_of(&self, alias: &str) -> String {
        self.groups
            .get(&alias.to_lowercase())
            .cloned()
            .unwrap_or_else(|| alias.to_string())
    }

    pub fn alias(&self, alias: &str, frequency: usize) -> AgentAlias {
        AgentAlias {
            alias: alias.to_string(),
            canonical_group: self.group_of(alias),
            frequency,
        }
    }
}

/// Selected aliases plus warnings for the run report.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliasExtraction {
    pub aliases: Vec<AgentAlias>,
    pub warnings: Vec<String>,
}

/// Counts parenthetical aliases following each mention in the header
/// window. Keys are lowercased; the first surface form seen is kept.
pub fn alias_candidates(
    provisions: &[Provision],
    mentions: &[EntityMention],
    config: &AliasConfig,
) -> Result<BTreeMap<String, (String, usize)>> {
    let re = Regex::new(&config.pattern).map_err(|e| Error::Config(format!("alias pattern: {e}")))?;
    let window: BTreeMap<usize, &Provision> = provisions
        .iter()
        .take(HEADER_WINDOW)
        .map(|p| (p.index, p))
        .collect();
    let mut counts: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for m in mentions {
        let Some(p) = window.get(&m.provision_index) else {
            continue;
        };
        let Some(rest) = p.text.get(m.end..) else {
            continue;
        };
        if let Some(alias) = re.captures(rest).and_then(|c| c.get(1)) {
            let surface = alias.as_str().trim().to_string();
            let entry = counts.entry(surface.to_lowercase()).or_insert((surface, 0));
            entry.1 += 1;
        }
    }
    Ok(counts)
}

/// Applies the frequency threshold and override list to candidate counts
/// (possibly pooled over all contracts of one type). Sorted by descending
/// frequency, then alias.
pub fn select_aliases(counts: &BTreeMap<String, (String, usize)>, config: &AliasConfig) -> AliasExtraction {
    let overrides: Vec<String> = config.overrides.iter().map(|o| o.to_lowercase()).collect();
    let mut aliases: Vec<AgentAlias> = counts
        .iter()
        .filter(|(key, (_, n))| *n >= config.threshold || overrides.contains(key))
        .map(|(_, (surface, n))| config.alias(surface, *n))
        .collect();
    for o in &config.overrides {
        if !counts.contains_key(&o.to_lowercase()) {
            aliases.push(config.alias(o, 0));
        }
    }
    aliases.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.alias.cmp(&b.alias)));
    let mut warnings = Vec::new();
    if aliases.is_empty() {
        warnings.push(if counts.is_empty() {
            "no parenthetical alias found after any entity mention".to_string()
        } else {
            format!("no alias reached the frequency threshold of {}", config.threshold)
        });
    }
    AliasExtraction { aliases, warnings }
}

/// Aliases for a single contract.
pub fn extract_aliases(
    provisions: &[Provision],
    mentions: &[EntityMention],
    config: &AliasConfig,
) -> Result<AliasExtraction> {
    Ok(select_aliases(&alias_candidates(provisions, mentions, config)?, config))
}

fn company_suffix() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"(?i)(?:\b(?:inc|corp|corporation|co|company|llc|l\.l\.c|lp|l\.p|llp|ltd|limited|trust|bank|partners|partnership|reit|n\.a|plc)\.?)$")
            .expect("valid suffix regex")
    })
}

fn capitalised_run() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\b[A-Z][A-Za-z0-9&'\-]*\.?(?:,?\s+(?:[A-Z][A-Za-z0-9&'\-]*\.?|of|and|&))*")
            .expect("valid capitalised-run regex")
    })
}

/// Mentions from capitalised word runs immediately followed by a
/// parenthesis, for use when no entity recogniser output is available.
/// Runs ending in a corporate suffix are companies; the rest are persons.
pub fn fallback_mentions(provisions: &[Provision]) -> Vec<EntityMention> {
    let mut out = Vec::new();
    for p in provisions.iter().take(HEADER_WINDOW) {
        for m in capitalised_run().find_iter(&p.text) {
            let after = p.text[m.end()..].trim_start_matches([',', ' ']);
            if !after.starts_with('(') {
                continue;
            }
            let span = m.as_str().trim_end_matches([',', ' ']);
            let kind = if company_suffix().is_match(span) {
                EntityKind::Company
            } else {
                EntityKind::Person
            };
            out.push(EntityMention {
                provision_index: p.index,
                start: m.start(),
                end: m.start() + span.len(),
                kind,
            });
        }
    }
    out
}
