use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DeonticType, Tag, TagSequence};
use crate::error::{Error, Result};

/// Per-agent-group counts of record labels in a training corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeDistribution {
    pub counts: BTreeMap<String, BTreeMap<DeonticType, usize>>,
}

impl TypeDistribution {
    pub fn add<'a>(&mut self, group: &str, labels: impl IntoIterator<Item = &'a DeonticType>) {
        let row = self.counts.entry(group.to_string()).or_default();
        for ty in labels {
            *row.entry(*ty).or_default() += 1;
        }
    }
}

/// Most frequent label for the group as a singleton set.
///
/// Ties go to the earlier type in `Obl, Ent, Pro, Per, Nobl, Nent, None`.
pub fn majority_class_baseline(agent_group: &str, distribution: &TypeDistribution) -> Result<BTreeSet<DeonticType>> {
    let row = distribution
        .counts
        .get(agent_group)
        .filter(|r| r.values().any(|&c| c > 0))
        .ok_or_else(|| Error::Config(format!("no training distribution for agent group `{agent_group}`")))?;
    let best = DeonticType::ALL
        .iter()
        .copied()
        .max_by(|a, b| {
            let ca = row.get(a).copied().unwrap_or(0);
            let cb = row.get(b).copied().unwrap_or(0);
            // Reverse on ties so the earlier variant wins under max_by.
            ca.cmp(&cb).then_with(|| b.cmp(a))
        })
        .expect("non-empty type list");
    Ok(BTreeSet::from([best]))
}

/// Which single-token type the `shall` tagger emits for each agent group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanBaselineMap {
    pub groups: BTreeMap<String, DeonticType>,
}

impl Default for SpanBaselineMap {
    fn default() -> Self {
        SpanBaselineMap {
            groups: BTreeMap::from([
                ("Tenant".to_string(), DeonticType::Obl),
                ("Landlord".to_string(), DeonticType::Ent),
            ]),
        }
    }
}

/// Tags every `shall` with the group's single-token type.
pub fn majority_span_baseline<S: AsRef<str>>(
    tokens: &[S],
    agent_group: &str,
    map: &SpanBaselineMap,
) -> Result<TagSequence> {
    let ty = *map
        .groups
        .get(agent_group)
        .ok_or_else(|| Error::Config(format!("agent group `{agent_group}` has no majority span type")))?;
    Ok(TagSequence(
        tokens
            .iter()
            .map(|t| {
                if t.as_ref().eq_ignore_ascii_case("shall") {
                    Tag::S(ty)
                } else {
                    Tag::O
                }
            })
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use DeonticType::*;

    #[test]
    fn majority_picks_most_frequent() {
        let mut d = TypeDistribution::default();
        d.add("Tenant", &[Obl, Pro]);
        d.add("Tenant", &[Obl]);
        d.add("Landlord", &[Ent]);
        d.add("Landlord", &[None]);
        d.add("Landlord", &[Ent, Per]);
        assert_eq!(majority_class_baseline("Tenant", &d).unwrap(), BTreeSet::from([Obl]));
        assert_eq!(majority_class_baseline("Landlord", &d).unwrap(), BTreeSet::from([Ent]));
    }

    #[test]
    fn tie_goes_to_enum_order() {
        let mut d = TypeDistribution::default();
        d.add("G", &[Per]);
        d.add("G", &[Ent]);
        assert_eq!(majority_class_baseline("G", &d).unwrap(), BTreeSet::from([Ent]));
    }

    #[test]
    fn empty_distribution_is_config_error() {
        let d = TypeDistribution::default();
        assert!(matches!(majority_class_baseline("Tenant", &d), Err(Error::Config(_))));
    }

    #[test]
    fn shall_tagger() {
        let m = SpanBaselineMap::default();
        let t = majority_span_baseline(&["Tenant", "shall", "pay"], "Tenant", &m).unwrap();
        assert_eq!(t.to_strings(), vec!["O", "S-OBL", "O"]);
        let t = majority_span_baseline(&["Landlord", "Shall", "repair", "and", "shall", "paint"], "Landlord", &m).unwrap();
        assert_eq!(t.to_strings(), vec!["O", "S-ENT", "O", "O", "S-ENT", "O"]);
        let t = majority_span_baseline(&["Tenant", "may", "park"], "Tenant", &m).unwrap();
        assert_eq!(t, TagSequence::outside(3));
        assert!(majority_span_baseline(&["x"], "Guarantor", &m).is_err());
    }
}
