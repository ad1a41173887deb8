use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::rules::DeonticType;

/// Per-alias predicted label sets for one sentence and its gold flag. An
/// empty map means the sentence mentions no alias.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedflagItem {
    pub per_alias: BTreeMap<String, BTreeSet<DeonticType>>,
    pub gold: bool,
}

impl RedflagItem {
    pub fn predicted(&self) -> bool {
        self.per_alias.values().flatten().any(|t| !t.is_none())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BinaryMetrics {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub zero_division: Vec<String>,
}

/// A sentence is flagged when any alias has a non-None type.
pub fn redflag_metrics(items: &[RedflagItem]) -> BinaryMetrics {
    let mut m = BinaryMetrics::default();
    for it in items {
        match (it.predicted(), it.gold) {
            (true, true) => m.true_positives += 1,
            (true, false) => m.false_positives += 1,
            (false, true) => m.false_negatives += 1,
            (false, false) => m.true_negatives += 1,
        }
    }
    let c = super::ClassMetrics::from_counts(
        m.true_positives,
        m.true_positives + m.false_positives,
        m.true_positives + m.false_negatives,
    );
    m.precision = c.precision;
    m.recall = c.recall;
    m.f1 = c.f1;
    m.zero_division = c.zero_division;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use DeonticType::*;

    fn item(sets: &[(&str, &[DeonticType])], gold: bool) -> RedflagItem {
        RedflagItem {
            per_alias: sets
                .iter()
                .map(|(a, t)| (a.to_string(), t.iter().copied().collect()))
                .collect(),
            gold,
        }
    }

    #[test]
    fn single_cases() {
        assert_eq!(redflag_metrics(&[item(&[("Tenant", &[Obl])], true)]).true_positives, 1);
        let m = redflag_metrics(&[item(&[("Tenant", &[None]), ("Landlord", &[None])], true)]);
        assert_eq!(m.false_negatives, 1);
        assert_eq!(redflag_metrics(&[item(&[], true)]).false_negatives, 1);
    }

    #[test]
    fn ten_sentence_tally() {
        let items = vec![
            item(&[("Tenant", &[Obl])], true),                       // tp
            item(&[("Tenant", &[None]), ("Landlord", &[Ent])], true), // tp
            item(&[("Landlord", &[Per])], true),                     // tp
            item(&[("Tenant", &[Pro])], false),                      // fp
            item(&[("Tenant", &[None])], true),                      // fn
            item(&[], true),                                         // fn
            item(&[("Tenant", &[None])], false),                     // tn
            item(&[], false),                                        // tn
            item(&[("Landlord", &[Nobl])], true),                    // tp
            item(&[("Tenant", &[Nent, Obl])], false),                // fp
        ];
        let m = redflag_metrics(&items);
        assert_eq!((m.true_positives, m.false_positives, m.false_negatives, m.true_negatives), (4, 2, 2, 2));
        assert!((m.precision - 4.0 / 6.0).abs() < 1e-12);
        assert!((m.recall - 4.0 / 6.0).abs() < 1e-12);
        assert!((m.f1 - 4.0 / 6.0).abs() < 1e-12);
    }
}
