use super::{Provision, SentenceRecord};

/// Splits provision text into byte ranges that partition it.
pub trait SentenceSplitter {
    /// Returned ranges are contiguous, non-overlapping and cover `text`.
    fn split(&self, text: &str) -> Vec<(usize, usize)>;
}

/// Terminator-based splitter. A sentence ends after `.`, `?` or `!` (plus
/// any closing quotes or brackets) when followed by whitespace and then an
/// uppercase letter, digit, quote or opening bracket. Periods of known
/// abbreviations, single-letter initials and leading enumerators such as
/// `1.` or `2.3.` never end a sentence. Whitespace after a terminator
/// belongs to the sentence it closes.
#[derive(Debug, Clone)]
pub struct RuleSplitter {
    pub abbreviations: Vec<String>,
}

const ABBREVIATIONS: &[&str] = &[
    "no", "nos", "mr", "mrs", "ms", "dr", "st", "inc", "corp", "co", "ltd", "llc", "l.l.c", "l.p", "n.a", "jr", "sr",
    "sec", "secs", "art", "para", "e.g", "i.e", "etc", "vs", "v", "u.s", "u.s.a", "approx", "dept", "ave", "blvd",
    "rd", "ste", "fl", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep", "sept", "oct", "nov", "dec", "p",
    "pp", "cf", "et al", "ex", "sq", "ft",
];

impl Default for RuleSplitter {
    fn default() -> Self {
        RuleSplitter {
            abbreviations: ABBREVIATIONS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’')
}

fn can_open(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit() || matches!(c, '"' | '\'' | '(' | '[' | '“' | '‘')
}

impl RuleSplitter {
    /// Whether the period at byte `dot` closes an abbreviation, an initial
    /// or a leading enumerator.
    fn protected(&self, text: &str, start: usize, dot: usize) -> bool {
        let before = &text[start..dot];
        let word_start = before
            .rfind(|c: char| c.is_whitespace() || c == '(')
            .map(|i| i + 1)
            .unwrap_or(0);
        let word = &before[word_start..];
        if word.is_empty() {
            return false;
        }
        // "1." / "2.3." / "(a)." at the very start of the sentence
        if word_start == 0 && word.chars().all(|c| c.is_ascii_digit() || c == '.') {
            return true;
        }
        let mut chars = word.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            if c.is_uppercase() {
                return true;
            }
        }
        let lower = word.to_lowercase();
        if self.abbreviations.contains(&lower) {
            return true;
        }
        // "et al."
        let two = before[..word_start].trim_end();
        two.to_lowercase().ends_with("et") && lower == "al"
    }
}

impl SentenceSplitter for RuleSplitter {
    fn split(&self, text: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start = 0;
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if !matches!(c, '.' | '?' | '!') || (c == '.' && self.protected(text, start, pos)) {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < chars.len() && (is_closer(chars[j].1) || matches!(chars[j].1, '.' | '?' | '!')) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            if k > j && k < chars.len() && can_open(chars[k].1) {
                let end = chars[k].0;
                out.push((start, end));
                start = end;
            }
            i = k.max(i + 1);
        }
        if start < text.len() {
            out.push((start, text.len()));
        }
        out
    }
}

/// Sentence records for one provision, ids `<contract>-p<index>-s<k>`.
pub fn segment_sentences<S: SentenceSplitter + ?Sized>(provision: &Provision, splitter: &S) -> Vec<SentenceRecord> {
    splitter
        .split(&provision.text)
        .into_iter()
        .enumerate()
        .map(|(k, (s, e))| SentenceRecord {
            sentence_id: format!("{}-p{}-s{}", provision.contract_id, provision.index, k),
            contract_id: provision.contract_id.clone(),
            provision_index: provision.index,
            text: provision.text[s..e].to_string(),
            char_span: (s, e),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(text: &str) -> Vec<String> {
        RuleSplitter::default()
            .split(text)
            .into_iter()
            .map(|(s, e)| text[s..e].to_string())
            .collect()
    }

    #[test]
    fn two_sentences() {
        assert_eq!(
            texts("Tenant shall pay rent. Tenant shall keep the Premises clean."),
            vec!["Tenant shall pay rent. ", "Tenant shall keep the Premises clean."]
        );
    }

    #[test]
    fn abbreviation_protected() {
        assert_eq!(texts("Tenant shall occupy Unit No. 5 of the Building.").len(), 1);
        assert_eq!(texts("Landlord is ACME Corp. The Tenant is Bob.").len(), 1);
        assert_eq!(texts("Signed by Jane Q. Smith today.").len(), 1);
    }

    #[test]
    fn enumerator_protected() {
        assert_eq!(texts("3. Tenant shall pay rent.").len(), 1);
        assert_eq!(texts("2.1. Use. Tenant shall use the Premises.").len(), 2);
    }

    #[test]
    fn quotes_and_questions() {
        assert_eq!(
            texts("He said \"stop.\" Then what? Nothing!"),
            vec!["He said \"stop.\" ", "Then what? ", "Nothing!"]
        );
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(texts("Rent is due on the 1st. of each month.").len(), 1);
    }

    #[test]
    fn empty_text() {
        assert!(texts("").is_empty());
        let p = Provision {
            contract_id: "c".into(),
            index: 0,
            text: String::new(),
            depth: 0,
            parent_index: None,
        };
        assert!(segment_sentences(&p, &RuleSplitter::default()).is_empty());
    }

    #[test]
    fn record_ids_and_spans() {
        let p = Provision {
            contract_id: "c7".into(),
            index: 3,
            text: "A b. C d.".into(),
            depth: 0,
            parent_index: None,
        };
        let recs = segment_sentences(&p, &RuleSplitter::default());
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].sentence_id, "c7-p3-s1");
        for r in &recs {
            assert_eq!(&p.text[r.char_span.0..r.char_span.1], r.text);
        }
    }

    proptest! {
        #[test]
        fn spans_partition_text(text in "[A-Za-z0-9 .?!\"()é]{0,80}") {
            let spans = RuleSplitter::default().split(&text);
            let mut at = 0;
            for (s, e) in &spans {
                prop_assert_eq!(*s, at);
                prop_assert!(e > s);
                at = *e;
            }
            prop_assert_eq!(at, text.len());
        }
    }
}
