//! Evaluation: multi-label classification, labeled and unlabeled span
//! detection, and the red-flag binary harness.

mod classification;
mod redflag;
mod report;
mod span;

pub use classification::classification_metrics;
pub use redflag::{redflag_metrics, BinaryMetrics, RedflagItem};
pub use report::{macro_average, pct, ClassMetrics, MetricsReport, Mode, Prf};
pub use span::{extract_entities, extract_unlabeled, span_metrics, MacroOver};
