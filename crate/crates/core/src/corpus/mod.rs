//! Annotated corpus management: schema, majority merging, agreement,
//! splits, statistics, import and model-input export.

mod alpha;
mod export;
mod import;
mod merge;
mod record;
mod split;
mod stats;

pub use alpha::{
    krippendorff_alpha_nominal, token_alpha, token_items, token_reliability, type_alpha, type_reliability,
    ReliabilityData, TokenAnnotations,
};
pub use export::{conditioning_token, export_conditioned, Anonymize, Conditioning, ExportOptions, ModelRecord};
pub use import::{import_records, ImportMapping};
pub use merge::{merge_majority, union_spans, MergeOutcome, SpanUnion};
pub use record::{AnnotationRecord, Split};
pub use split::{apply_split, split_by_contract};
pub use stats::{compute_stats, is_modal, SplitCounts, StatsReport, TriggerCount, MODAL_AUXILIARIES};
