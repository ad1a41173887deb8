use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ParsedSentence;

/// Maps dependency labels onto the classic inventory the rule engine is
/// written against (`nsubjpass`, `agent`, `pobj`, `dobj`, `ROOT`, ...).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelMap {
    pub map: BTreeMap<String, String>,
}

impl Default for LabelMap {
    /// Universal Dependencies to classic labels.
    fn default() -> Self {
        let pairs = [
            ("root", "ROOT"),
            ("nsubj:pass", "nsubjpass"),
            ("aux:pass", "auxpass"),
            ("csubj:pass", "csubjpass"),
            ("obl:agent", "agent"),
            ("obj", "dobj"),
            ("obl", "pobj"),
        ];
        LabelMap {
            map: pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

impl LabelMap {
    /// Identity map, for parses already in the classic inventory.
    pub fn identity() -> Self {
        LabelMap {
            map: BTreeMap::from([("root".to_string(), "ROOT".to_string())]),
        }
    }

    pub fn normalize(&self, label: &str) -> String {
        if let Some(v) = self.map.get(label) {
            return v.clone();
        }
        let lower = label.to_lowercase();
        if let Some(v) = self.map.get(&lower) {
            return v.clone();
        }
        if lower == "root" {
            "ROOT".to_string()
        } else {
            label.to_string()
        }
    }

    pub fn apply(&self, sentence: &ParsedSentence) -> ParsedSentence {
        let mut out = sentence.clone();
        for t in &mut out.tokens {
            t.deprel = self.normalize(&t.deprel);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ud_labels_map_to_classic() {
        let m = LabelMap::default();
        assert_eq!(m.normalize("root"), "ROOT");
        assert_eq!(m.normalize("nsubj:pass"), "nsubjpass");
        assert_eq!(m.normalize("obl:agent"), "agent");
        assert_eq!(m.normalize("aux"), "aux");
        assert_eq!(m.normalize("nsubjpass"), "nsubjpass");
        assert_eq!(LabelMap::identity().normalize("obj"), "obj");
    }
}
