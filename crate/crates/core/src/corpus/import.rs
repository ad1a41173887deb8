use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AnnotationRecord, Split};
use crate::error::{Error, Result};
use crate::rules::{DeonticType, Span};

/// Declarative source-to-canonical field mapping for foreign corpus files.
/// Paths are dot-separated keys into each source object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ImportMapping {
    pub sentence_id: String,
    pub contract_id: String,
    pub agent: String,
    pub labels: String,
    pub spans: String,
    pub tokens: String,
    pub text: String,
    pub annotator_id: String,
    pub split: String,
    pub span_type: String,
    pub span_start: String,
    pub span_end: String,
    /// Source span ends are one past the last token.
    pub end_exclusive: bool,
    /// Source label string to canonical type name.
    pub label_values: BTreeMap<String, String>,
}

impl Default for ImportMapping {
    fn default() -> Self {
        ImportMapping {
            sentence_id: "sentence_id".into(),
            contract_id: "contract_id".into(),
            agent: "agent".into(),
            labels: "labels".into(),
            spans: "spans".into(),
            tokens: "tokens".into(),
            text: "text".into(),
            annotator_id: "annotator_id".into(),
            split: "split".into(),
            span_type: "type".into(),
            span_start: "start".into(),
            span_end: "end".into(),
            end_exclusive: false,
            label_values: BTreeMap::new(),
        }
    }
}

fn get<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    if path.is_empty() {
        return None;
    }
    path.split('.').try_fold(v, |v, key| v.get(key)).filter(|v| !v.is_null())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

impl ImportMapping {
    fn label(&self, raw: &str) -> Result<DeonticType> {
        let raw = raw.trim();
        let mapped = self
            .label_values
            .get(raw)
            .or_else(|| self.label_values.get(&raw.to_lowercase()))
            .map(String::as_str)
            .unwrap_or(raw);
        mapped.parse()
    }

    fn string(&self, v: &Value, path: &str, what: &str, row: usize) -> Result<String> {
        get(v, path)
            .and_then(scalar)
            .ok_or_else(|| Error::Validation(format!("record {row}: missing {what} at `{path}`")))
    }

    fn index(&self, v: &Value, path: &str, row: usize) -> Result<usize> {
        get(v, path)
            .and_then(Value::as_u64)
            .map(|n| n as usize)
            .ok_or_else(|| Error::Validation(format!("record {row}: span field `{path}` is not an index")))
    }

    /// Converts one source object.
    pub fn convert(&self, v: &Value, row: usize) -> Result<AnnotationRecord> {
        let mut spans = Vec::new();
        if let Some(list) = get(v, &self.spans).and_then(Value::as_array) {
            for s in list {
                let ty = self.label(&self.string(s, &self.span_type, "span type", row)?)?;
                let start = self.index(s, &self.span_start, row)?;
                let mut end = self.index(s, &self.span_end, row)?;
                if self.end_exclusive {
                    end = end
                        .checked_sub(1)
                        .filter(|e| *e >= start)
                        .ok_or_else(|| Error::Validation(format!("record {row}: empty span")))?;
                }
                spans.push(Span::new(ty, start, end));
            }
        }
        spans.sort_by_key(|s| (s.start, s.end, s.ty));
        let mut labels: BTreeSet<DeonticType> = match get(v, &self.labels) {
            Some(Value::Array(items)) => items
                .iter()
                .filter_map(scalar)
                .map(|l| self.label(&l))
                .collect::<Result<_>>()?,
            Some(Value::String(s)) => s
                .split([',', ';', '|'])
                .filter(|l| !l.trim().is_empty())
                .map(|l| self.label(l))
                .collect::<Result<_>>()?,
            _ => BTreeSet::new(),
        };
        labels.extend(spans.iter().map(|s| s.ty));
        if labels.is_empty() {
            labels.insert(DeonticType::None);
        }
        let tokens = match get(v, &self.tokens) {
            Some(Value::Array(items)) => items.iter().filter_map(scalar).collect(),
            Some(Value::String(s)) => s.split_whitespace().map(String::from).collect(),
            _ => Vec::new(),
        };
        let record = AnnotationRecord {
            sentence_id: self.string(v, &self.sentence_id, "sentence id", row)?,
            contract_id: self.string(v, &self.contract_id, "contract id", row)?,
            agent: self.string(v, &self.agent, "agent", row)?,
            labels,
            spans,
            annotator_id: get(v, &self.annotator_id).and_then(scalar),
            split: get(v, &self.split).and_then(scalar).map(|s| s.parse::<Split>()).transpose()?,
            tokens,
            text: get(v, &self.text).and_then(scalar),
        };
        record
            .validate()
            .map_err(|e| Error::Validation(format!("record {row}: {e}")))?;
        Ok(record)
    }
}

/// Converts every source object; `row` in errors is 1-based.
pub fn import_records(values: &[Value], mapping: &ImportMapping) -> Result<Vec<AnnotationRecord>> {
    values.iter().enumerate().map(|(i, v)| mapping.convert(v, i + 1)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;
    use DeonticType::*;

    #[test]
    fn canonical_shape_passes_through() {
        let v = json!({"sentence_id": "s", "contract_id": "c", "agent": "Tenant", "labels": ["Obl"],
                       "spans": [{"type": "Obl", "start": 1, "end": 1}], "tokens": ["Tenant", "shall", "pay"]});
        let r = import_records(&[v], &ImportMapping::default()).unwrap();
        assert_eq!(r[0].spans, vec![Span::new(Obl, 1, 1)]);
    }

    #[test]
    fn foreign_fields_and_exclusive_ends() {
        let mapping = ImportMapping {
            sentence_id: "meta.id".into(),
            contract_id: "meta.doc".into(),
            agent: "party".into(),
            labels: "classes".into(),
            spans: "triggers".into(),
            tokens: "sentence".into(),
            span_type: "label".into(),
            end_exclusive: true,
            label_values: BTreeMap::from([("obligation".into(), "Obl".into()), ("none".into(), "None".into())]),
            split: "fold".into(),
            ..ImportMapping::default()
        };
        let v = json!({"meta": {"id": 7, "doc": "lease-1"}, "party": "Lessee", "classes": "obligation",
                       "triggers": [{"label": "obligation", "start": 1, "end": 3}],
                       "sentence": "Lessee shall be responsible", "fold": "test"});
        let r = mapping.convert(&v, 1).unwrap();
        assert_eq!(r.sentence_id, "7");
        assert_eq!(r.spans, vec![Span::new(Obl, 1, 2)]);
        assert_eq!(r.split, Some(Split::Test));
        let none = json!({"meta": {"id": 8, "doc": "lease-1"}, "party": "Lessee", "classes": "none", "sentence": "x"});
        assert_eq!(mapping.convert(&none, 2).unwrap().labels, BTreeSet::from([None]));
    }

    #[test]
    fn missing_field_names_row() {
        let e = import_records(&[json!({"sentence_id": "s"})], &ImportMapping::default()).unwrap_err();
        assert!(e.to_string().contains("record 1"), "{e}");
    }
}
