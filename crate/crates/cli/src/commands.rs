use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use deontic_core::corpus::{
    apply_split, compute_stats, export_conditioned, import_records, merge_majority, split_by_contract, token_alpha,
    token_items, type_alpha, Anonymize, AnnotationRecord, Conditioning, ImportMapping, MergeOutcome, Split,
};
use deontic_core::eval::{redflag_metrics, MacroOver, Mode, RedflagItem};
use deontic_core::ingest::{detect_contract_type, AgentAlias, EntityMention, Provision, RuleSplitter, SentenceRecord};
use deontic_core::jsonl;
use deontic_core::lingrep::{align_tokens, read_conllu_str, write_conllu, CompletenessRecord};
use deontic_core::pipeline::*;
use deontic_core::rules::DeonticType;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::manifest::Run;
use crate::{AnonymizeArg, BaselineKind, Cli, Command, ConditioningArg, EvalKind};

pub fn run(cli: Cli) -> Result<()> {
    let config = PipelineConfig::load(cli.config.as_deref())?;
    let name = command_name(&cli.command);
    let mut run = Run::new(name, &cli.out, config, cli.seed)?;
    match cli.command {
        Command::Ingest { html, completeness } => ingest(&mut run, &html, completeness.as_deref())?,
        Command::Aliases { provisions, entities } => aliases(&mut run, provisions, entities.as_deref())?,
        Command::ContractType { provisions } => contract_type(&mut run, provisions)?,
        Command::ParseImport { conllu, sentences } => parse_import(&mut run, &conllu, sentences)?,
        Command::Extract { sentences, aliases, parses } => extract(&mut run, sentences, aliases, parses)?,
        Command::Baseline { kind } => baseline(&mut run, kind)?,
        Command::MergeAnnotations { input } => merge(&mut run, &input)?,
        Command::Agreement { input } => agreement(&mut run, &input)?,
        Command::Split { input } => split(&mut run, &input)?,
        Command::Stats { input, top } => stats(&mut run, &input, top)?,
        Command::Export { input, conditioning, anonymize } => export(&mut run, &input, conditioning, anonymize)?,
        Command::Import { input, mapping } => import(&mut run, &input, mapping.as_deref())?,
        Command::Evaluate { kind } => evaluate(&mut run, kind)?,
        Command::RedflagEval { input } => redflag(&mut run, &input)?,
    }
    run.finish()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ingest { .. } => "ingest",
        Command::Aliases { .. } => "aliases",
        Command::ContractType { .. } => "contract-type",
        Command::ParseImport { .. } => "parse-import",
        Command::Extract { .. } => "extract",
        Command::Baseline { kind: BaselineKind::MajorityCls { .. } } => "baseline-majority-cls",
        Command::Baseline { kind: BaselineKind::MajoritySpan { .. } } => "baseline-majority-span",
        Command::MergeAnnotations { .. } => "merge-annotations",
        Command::Agreement { .. } => "agreement",
        Command::Split { .. } => "split",
        Command::Stats { .. } => "stats",
        Command::Export { .. } => "export",
        Command::Import { .. } => "import",
        Command::Evaluate { kind: EvalKind::Cls { .. } } => "evaluate-cls",
        Command::Evaluate { kind: EvalKind::Span { .. } } => "evaluate-span",
        Command::RedflagEval { .. } => "redflag-eval",
    }
}

/// Reads a JSONL input, naming the file in parse errors.
fn read_jsonl<T: DeserializeOwned>(run: &mut Run, path: &Path, producer: Option<&str>) -> Result<Vec<T>> {
    let text = run.read(path, producer)?;
    jsonl::read_str(&text).with_context(|| format!("in {}", path.display()))
}

fn read_records(run: &mut Run, path: &Path) -> Result<Vec<AnnotationRecord>> {
    let records: Vec<AnnotationRecord> = read_jsonl(run, path, None)?;
    for r in &records {
        r.validate().with_context(|| format!("{}: record {}/{}", path.display(), r.sentence_id, r.agent))?;
    }
    Ok(records)
}

/// `explicit` or the conventional file in the output directory.
fn input_or_default(run: &Run, explicit: Option<PathBuf>, name: &str) -> PathBuf {
    explicit.unwrap_or_else(|| run.out_path(name))
}

fn html_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in paths {
        if !p.exists() {
            bail!("missing input: {}", p.display());
        }
        if p.is_dir() {
            for e in walkdir::WalkDir::new(p).sort_by_file_name() {
                let e = e?;
                let ext = e.path().extension().and_then(|x| x.to_str()).map(str::to_ascii_lowercase);
                if e.file_type().is_file() && matches!(ext.as_deref(), Some("html" | "htm")) {
                    files.push(e.into_path());
                }
            }
        } else {
            files.push(p.clone());
        }
    }
    Ok(files)
}

#[derive(Serialize)]
struct ContractRow {
    contract_id: String,
    contract_type: Option<String>,
    bullets_merged: bool,
}

fn ingest(run: &mut Run, html: &[PathBuf], completeness: Option<&Path>) -> Result<()> {
    let flags: Option<HashMap<String, bool>> = match completeness {
        Some(p) => Some(
            read_jsonl::<CompletenessRecord>(run, p, None)?
                .into_iter()
                .map(|r| (r.provision_key, r.complete))
                .collect(),
        ),
        None => None,
    };
    if flags.is_none() {
        run.warn("no completeness sidecar: bullet merging skipped");
    }
    let splitter = RuleSplitter::default();
    let (mut provisions, mut sentences, mut discards, mut contracts) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for file in html_files(html)? {
        let cid = file
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| anyhow!("cannot derive a contract id from {}", file.display()))?
            .to_string();
        let bytes = std::fs::read(&file).with_context(|| format!("reading {}", file.display()))?;
        let oracle = flags.as_ref().map(|f| f as &dyn deontic_core::ingest::CompletenessOracle);
        let out = ingest_contract(&cid, &bytes, oracle, &splitter).with_context(|| format!("ingest: contract {cid}"))?;
        contracts.push(ContractRow {
            contract_id: cid,
            contract_type: out.contract_type,
            bullets_merged: out.bullets_merged,
        });
        provisions.extend(out.provisions);
        sentences.extend(out.sentences);
        discards.extend(out.discards);
    }
    run.write("provisions.jsonl", &jsonl::to_string(&provisions)?)?;
    run.write("sentences.jsonl", &jsonl::to_string(&sentences)?)?;
    run.write("discards.jsonl", &jsonl::to_string(&discards)?)?;
    run.write("contracts.jsonl", &jsonl::to_string(&contracts)?)?;
    Ok(())
}

fn by_contract(provisions: Vec<Provision>) -> BTreeMap<String, Vec<Provision>> {
    let mut out: BTreeMap<String, Vec<Provision>> = BTreeMap::new();
    for p in provisions {
        out.entry(p.contract_id.clone()).or_default().push(p);
    }
    out
}

/// Entity sidecar row; rows without a contract id apply to every contract.
#[derive(Deserialize)]
struct EntityRow {
    contract_id: Option<String>,
    #[serde(flatten)]
    mention: EntityMention,
}

fn aliases(run: &mut Run, provisions: Option<PathBuf>, entities: Option<&Path>) -> Result<()> {
    let path = input_or_default(run, provisions, "provisions.jsonl");
    let provisions: Vec<Provision> = read_jsonl(run, &path, Some("ingest"))?;
    let rows: Option<Vec<EntityRow>> = match entities {
        Some(p) => Some(read_jsonl(run, p, None)?),
        None => None,
    };
    // alias (lowercased) -> (alias, summed frequency)
    let mut merged: BTreeMap<String, AgentAlias> = BTreeMap::new();
    for (cid, provs) in by_contract(provisions) {
        let mentions: Option<Vec<EntityMention>> = rows.as_ref().map(|rows| {
            rows.iter()
                .filter(|r| r.contract_id.as_deref().is_none_or(|c| c == cid))
                .map(|r| r.mention.clone())
                .collect()
        });
        let found = contract_aliases(&provs, mentions.as_deref(), &run.config.aliases)
            .with_context(|| format!("aliases: contract {cid}"))?;
        for w in found.warnings {
            run.warn(format!("{cid}: {w}"));
        }
        for a in found.aliases {
            merged
                .entry(a.alias.to_lowercase())
                .and_modify(|m| m.frequency += a.frequency)
                .or_insert(a);
        }
    }
    let mut list: Vec<AgentAlias> = merged.into_values().collect();
    list.sort_by(|a, b| b.frequency.cmp(&a.frequency).then_with(|| a.alias.cmp(&b.alias)));
    run.write("aliases.jsonl", &jsonl::to_string(&list)?)
}

#[derive(Serialize)]
struct TypeRow {
    contract_id: String,
    contract_type: Option<String>,
}

fn contract_type(run: &mut Run, provisions: Option<PathBuf>) -> Result<()> {
    let path = input_or_default(run, provisions, "provisions.jsonl");
    let provisions: Vec<Provision> = read_jsonl(run, &path, Some("ingest"))?;
    let rows: Vec<TypeRow> = by_contract(provisions)
        .into_iter()
        .map(|(cid, p)| TypeRow {
            contract_type: detect_contract_type(&p).map(|t| t.0),
            contract_id: cid,
        })
        .collect();
    run.write("contract_types.jsonl", &jsonl::to_string(&rows)?)
}

#[derive(Serialize)]
struct ParseReport {
    sentences: usize,
    tokens: usize,
    aligned: usize,
    /// Parses whose id matches no ingested sentence.
    unmatched: Vec<String>,
}

fn parse_import(run: &mut Run, conllu: &Path, sentences: Option<PathBuf>) -> Result<()> {
    let text = run.read(conllu, None)?;
    let parses = read_conllu_str(&text).with_context(|| format!("parse-import: {}", conllu.display()))?;
    let sentence_path = input_or_default(run, sentences, "sentences.jsonl");
    let mut report = ParseReport {
        sentences: parses.len(),
        tokens: parses.iter().map(|p| p.tokens.len()).sum(),
        aligned: 0,
        unmatched: Vec::new(),
    };
    if sentence_path.exists() {
        let records: Vec<SentenceRecord> = read_jsonl(run, &sentence_path, Some("ingest"))?;
        let texts: HashMap<&str, &str> = records.iter().map(|s| (s.sentence_id.as_str(), s.text.as_str())).collect();
        for p in &parses {
            match texts.get(p.sentence_id.as_str()) {
                Some(t) => {
                    align_tokens(t, p).with_context(|| format!("parse-import: sentence {}", p.sentence_id))?;
                    report.aligned += 1;
                }
                None => report.unmatched.push(p.sentence_id.clone()),
            }
        }
    } else {
        run.warn(format!("{} not found: alignment not checked", sentence_path.display()));
    }
    run.write("parses.conllu", &write_conllu(&parses))?;
    run.write("parse_report.json", &report_json(&report)?)
}

fn extract(run: &mut Run, sentences: Option<PathBuf>, aliases: Option<PathBuf>, parses: Option<PathBuf>) -> Result<()> {
    let sentences = input_or_default(run, sentences, "sentences.jsonl");
    let aliases = input_or_default(run, aliases, "aliases.jsonl");
    let parses = input_or_default(run, parses, "parses.conllu");
    let sentences: Vec<SentenceRecord> = read_jsonl(run, &sentences, Some("ingest"))?;
    let aliases: Vec<AgentAlias> = read_jsonl(run, &aliases, Some("aliases"))?;
    let text = run.read(&parses, Some("parse-import"))?;
    let parsed: BTreeMap<_, _> = read_conllu_str(&text)?.into_iter().map(|p| (p.sentence_id.clone(), p)).collect();
    let labels = run.config.label_map();
    let (predictions, extractions) =
        predict_sentences(&sentences, &aliases, &parsed, &run.lexicon, &labels).context("extract")?;
    run.write("agent_sentences.jsonl", &jsonl::to_string(&agent_sentences(&sentences, &aliases))?)?;
    run.write("extractions.jsonl", &jsonl::to_string(&extractions)?)?;
    run.write("predictions.jsonl", &jsonl::to_string(&predictions)?)
}

fn baseline(run: &mut Run, kind: BaselineKind) -> Result<()> {
    let config = run.config.clone();
    let group = |a: &str| config.group_of(a);
    match kind {
        BaselineKind::MajorityCls { train, input } => {
            let train = read_records(run, &train)?;
            let targets = read_records(run, &input)?;
            let preds = majority_class_predictions(&train, &targets, group)?;
            run.write("baseline_cls_predictions.jsonl", &jsonl::to_string(&preds)?)
        }
        BaselineKind::MajoritySpan { input } => {
            let targets = read_records(run, &input)?;
            let preds = majority_span_predictions(&targets, &config.span_map(), group)?;
            run.write("baseline_span_predictions.jsonl", &jsonl::to_string(&preds)?)
        }
    }
}

#[derive(Serialize)]
struct MergeReport {
    groups: usize,
    merged: usize,
    discarded: usize,
    span_flags: usize,
}

fn group_triples(records: Vec<AnnotationRecord>) -> BTreeMap<(String, String), Vec<AnnotationRecord>> {
    let mut groups: BTreeMap<(String, String), Vec<AnnotationRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.sentence_id.clone(), r.agent.clone())).or_default().push(r);
    }
    groups
}

fn merge(run: &mut Run, input: &Path) -> Result<()> {
    let groups = group_triples(read_records(run, input)?);
    let mut merged = Vec::new();
    let mut discards = Vec::new();
    let mut flags = 0;
    for ((sid, agent), triple) in &groups {
        match merge_majority(triple).with_context(|| format!("merge-annotations: ({sid}, {agent})"))? {
            MergeOutcome::Merged { record, span_flag } => {
                flags += usize::from(span_flag);
                merged.push(record);
            }
            d @ MergeOutcome::Discard { .. } => discards.push(d),
        }
    }
    let report = MergeReport {
        groups: groups.len(),
        merged: merged.len(),
        discarded: discards.len(),
        span_flags: flags,
    };
    run.write("merged.jsonl", &jsonl::to_string(&merged)?)?;
    run.write("merge_discards.jsonl", &jsonl::to_string(&discards)?)?;
    run.write("merge_report.json", &report_json(&report)?)
}

#[derive(Serialize)]
struct AgreementReport {
    type_alpha: Option<f64>,
    token_alpha: Option<f64>,
    notes: Vec<String>,
}

fn agreement(run: &mut Run, input: &Path) -> Result<()> {
    let records = read_records(run, input)?;
    let mut notes = Vec::new();
    let type_a = type_alpha(&records).map_err(|e| notes.push(format!("type alpha: {e}"))).ok();
    let mut majority: BTreeMap<(String, String), BTreeSet<DeonticType>> = BTreeMap::new();
    for (key, triple) in group_triples(records.clone()) {
        if let Ok(MergeOutcome::Merged { record, .. }) = merge_majority(&triple) {
            majority.insert(key, record.labels.into_iter().filter(|t| !t.is_none()).collect());
        }
    }
    let items = token_items(&records, &majority);
    let token_a = token_alpha(&items).map_err(|e| notes.push(format!("token alpha: {e}"))).ok();
    let report = AgreementReport {
        type_alpha: type_a,
        token_alpha: token_a,
        notes,
    };
    run.write("agreement.json", &report_json(&report)?)
}

#[derive(Serialize)]
struct SplitRow {
    contract_id: String,
    split: Split,
}

fn split(run: &mut Run, input: &Path) -> Result<()> {
    let records = read_records(run, input)?;
    let ratios: Vec<(Split, f64)> = run.config.split.ratios.iter().map(|(s, r)| (*s, *r)).collect();
    let assignment = split_by_contract(&records, &ratios, run.seed, &run.config.split.pinned)?;
    let rows: Vec<SplitRow> = assignment
        .iter()
        .map(|(c, s)| SplitRow {
            contract_id: c.clone(),
            split: *s,
        })
        .collect();
    run.write("split_assignment.jsonl", &jsonl::to_string(&rows)?)?;
    run.write("split_records.jsonl", &jsonl::to_string(&apply_split(&records, &assignment))?)
}

fn stats(run: &mut Run, inputs: &[PathBuf], top: usize) -> Result<()> {
    let mut records = Vec::new();
    for p in inputs {
        records.extend(read_records(run, p)?);
    }
    let config = run.config.clone();
    let report = compute_stats(&records, |a| config.group_of(a), top);
    if report.spans_without_text > 0 {
        run.warn(format!("{} spans without token text", report.spans_without_text));
    }
    run.write("stats.json", &report_json(&report)?)?;
    run.write("split_table.csv", &report.split_table_csv())?;
    run.write("trigger_table.csv", &report.trigger_table_csv())
}

fn export(run: &mut Run, input: &Path, conditioning: Option<ConditioningArg>, anonymize: Option<AnonymizeArg>) -> Result<()> {
    let records = read_records(run, input)?;
    let mut options = run.config.export.clone();
    options.seed = run.seed;
    if let Some(c) = conditioning {
        options.conditioning = match c {
            ConditioningArg::AgentToken => Conditioning::AgentToken,
            ConditioningArg::None => Conditioning::None,
        };
    }
    if let Some(a) = anonymize {
        options.anonymize = match a {
            AnonymizeArg::Off => Anonymize::Off,
            AnonymizeArg::Consistent => Anonymize::Consistent,
            AnonymizeArg::Random => Anonymize::Random,
        };
    }
    let config = run.config.clone();
    let out = export_conditioned(&records, &options, |a| config.group_of(a)).context("export")?;
    run.write("export.jsonl", &jsonl::to_string(&out)?)
}

fn import(run: &mut Run, input: &Path, mapping: Option<&Path>) -> Result<()> {
    let mapping: ImportMapping = match mapping {
        Some(p) => {
            let text = run.read(p, None)?;
            toml::from_str(&text).with_context(|| format!("invalid mapping {}", p.display()))?
        }
        None => ImportMapping::default(),
    };
    let text = run.read(input, None)?;
    let values: Vec<serde_json::Value> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).with_context(|| format!("in {}", input.display()))?
    } else {
        jsonl::read_str(&text).with_context(|| format!("in {}", input.display()))?
    };
    let records = import_records(&values, &mapping).with_context(|| format!("import: {}", input.display()))?;
    run.write("records.jsonl", &jsonl::to_string(&records)?)
}

fn evaluate(run: &mut Run, kind: EvalKind) -> Result<()> {
    let config = run.config.clone();
    let group = |a: &str| config.group_of(a);
    match kind {
        EvalKind::Cls { files } => {
            let pred = input_or_default(run, files.pred, "predictions.jsonl");
            let preds: Vec<AnnotationRecord> = read_jsonl(run, &pred, Some("extract"))?;
            let gold = read_records(run, &files.gold)?;
            let summary = evaluate_classification(&preds, &gold, group)?;
            run.write("eval_cls.json", &report_json(&summary)?)?;
            run.write("eval_cls.csv", &summary.csv())
        }
        EvalKind::Span { files, labeled, unlabeled, all_types } => {
            let pred = input_or_default(run, files.pred, "predictions.jsonl");
            let preds: Vec<AnnotationRecord> = read_jsonl(run, &pred, Some("extract"))?;
            let gold = read_records(run, &files.gold)?;
            let macro_over = if all_types { MacroOver::AllTypes } else { config.metrics.macro_over };
            let both = !labeled && !unlabeled;
            for (on, mode, stem) in [
                (labeled || both, Mode::SpanLabeled, "eval_span_labeled"),
                (unlabeled || both, Mode::SpanUnlabeled, "eval_span_unlabeled"),
            ] {
                if on {
                    let summary = evaluate_spans(&preds, &gold, mode, macro_over, group)?;
                    run.write(&format!("{stem}.json"), &report_json(&summary)?)?;
                    run.write(&format!("{stem}.csv"), &summary.csv())?;
                }
            }
            Ok(())
        }
    }
}

fn redflag(run: &mut Run, input: &Path) -> Result<()> {
    let items: Vec<RedflagItem> = read_jsonl(run, input, None)?;
    run.write("redflag.json", &report_json(&redflag_metrics(&items))?)
}
