//! CoNLL-U reading and writing for the columns the rule engine needs:
//! ID, FORM, UPOS, HEAD and DEPREL. Other columns are ignored on input and
//! written as `_`.

use std::io::BufRead;

use super::{ParsedSentence, Token};
use crate::error::{Error, Result};

/// Reads every sentence from a CoNLL-U stream.
///
/// Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are skipped.
/// Heads are converted from 1-based with `0` as root to 0-based indices with
/// the root pointing at itself.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<ParsedSentence>> {
    let mut sentences = Vec::new();
    let mut pending = Pending::default();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            if let Some(s) = pending.finish(sentences.len())? {
                sentences.push(s);
            }
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "sent_id" => pending.id = Some(value.trim().to_string()),
                    "text" => pending.text = Some(value.trim().to_string()),
                    _ => {}
                }
            }
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("expected 10 tab-separated columns, found {}", cols.len()),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            continue;
        }
        let id: usize = id.parse().map_err(|_| Error::Parse {
            line: lineno,
            reason: format!("invalid token id `{id}`"),
        })?;
        if id != pending.rows.len() + 1 {
            return Err(Error::Parse {
                line: lineno,
                reason: format!("token id {id} out of sequence"),
            });
        }
        let head: usize = cols[6].parse().map_err(|_| Error::Parse {
            line: lineno,
            reason: format!("invalid head `{}`", cols[6]),
        })?;
        pending.rows.push(Row {
            form: cols[1].to_string(),
            upos: cols[3].to_string(),
            head,
            deprel: cols[7].to_string(),
        });
    }
    if let Some(s) = pending.finish(sentences.len())? {
        sentences.push(s);
    }
    Ok(sentences)
}

pub fn read_conllu_str(input: &str) -> Result<Vec<ParsedSentence>> {
    read_conllu(input.as_bytes())
}

/// Serializes sentences back to CoNLL-U.
pub fn write_conllu(sentences: &[ParsedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        out.push_str(&format!("# sent_id = {}\n", s.sentence_id));
        if let Some(text) = &s.text {
            out.push_str(&format!("# text = {text}\n"));
        }
        for t in &s.tokens {
            let head = if t.is_root() { 0 } else { t.head + 1 };
            out.push_str(&format!(
                "{}\t{}\t_\t{}\t_\t_\t{}\t{}\t_\t_\n",
                t.index + 1,
                t.surface,
                t.pos,
                head,
                t.deprel
            ));
        }
        out.push('\n');
    }
    out
}

struct Row {
    form: String,
    upos: String,
    head: usize,
    deprel: String,
}

#[derive(Default)]
struct Pending {
    id: Option<String>,
    text: Option<String>,
    rows: Vec<Row>,
}

impl Pending {
    fn finish(&mut self, ordinal: usize) -> Result<Option<ParsedSentence>> {
        let rows = std::mem::take(&mut self.rows);
        let id = self.id.take();
        let text = self.text.take();
        if rows.is_empty() {
            return Ok(None);
        }
        let sentence_id = id.unwrap_or_else(|| format!("s{}", ordinal + 1));
        let n = rows.len();
        let mut tokens = Vec::with_capacity(n);
        for (i, r) in rows.into_iter().enumerate() {
            let head = match r.head {
                0 => i,
                h if h <= n => h - 1,
                h => {
                    return Err(Error::Structure {
                        sentence_id,
                        reason: format!("token {} has head {h} but the sentence has {n} tokens", i + 1),
                    })
                }
            };
            if r.head != 0 && head == i {
                return Err(Error::Structure {
                    sentence_id,
                    reason: format!("token {} is its own head", i + 1),
                });
            }
            tokens.push(Token {
                index: i,
                surface: r.form,
                pos: r.upos,
                head,
                deprel: r.deprel,
                char_span: None,
            });
        }
        let sentence = ParsedSentence {
            sentence_id,
            tokens,
            complete: None,
            text,
        };
        sentence.validate()?;
        Ok(Some(sentence))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TENANT_PAYS: &str = "# sent_id = t1\n\
1\tTenant\tTenant\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n\
2\tpays\tpay\tVERB\tVBZ\t_\t0\tROOT\t_\t_\n\n";

    #[test]
    fn minimal_sentence() {
        let s = read_conllu_str(TENANT_PAYS).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sentence_id, "t1");
        assert_eq!(s[0].root(), Some(1));
        assert_eq!(s[0].tokens[0].head, 1);
        assert_eq!(s[0].tokens[0].deprel, "nsubj");
    }

    #[test]
    fn head_out_of_range_is_structural() {
        let bad = TENANT_PAYS.replace("\t2\tnsubj", "\t7\tnsubj");
        let e = read_conllu_str(&bad).unwrap_err();
        assert!(matches!(e, Error::Structure { ref sentence_id, .. } if sentence_id == "t1"), "{e}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let bad = "# sent_id = x\n1\tTenant\tPROPN\n";
        match read_conllu_str(bad).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn cyclic_heads_name_the_sentence() {
        let bad = "# sent_id = loop\n\
1\ta\t_\tX\t_\t_\t2\tdep\t_\t_\n\
2\tb\t_\tX\t_\t_\t1\tdep\t_\t_\n\
3\tc\t_\tX\t_\t_\t0\troot\t_\t_\n";
        let e = read_conllu_str(bad).unwrap_err().to_string();
        assert!(e.contains("loop"), "{e}");
    }

    #[test]
    fn multiword_ranges_are_skipped() {
        let input = "1-2\tcannot\t_\t_\t_\t_\t_\t_\t_\t_\n\
1\tcan\t_\tAUX\t_\t_\t3\taux\t_\t_\n\
2\tnot\t_\tPART\t_\t_\t3\tneg\t_\t_\n\
3\tgo\t_\tVERB\t_\t_\t0\troot\t_\t_\n";
        let s = read_conllu_str(input).unwrap();
        assert_eq!(s[0].surfaces(), vec!["can", "not", "go"]);
        assert_eq!(s[0].sentence_id, "s1");
    }

    #[test]
    fn write_then_read_is_identity() {
        let s = read_conllu_str(TENANT_PAYS).unwrap();
        let again = read_conllu_str(&write_conllu(&s)).unwrap();
        assert_eq!(s, again);
    }
}
