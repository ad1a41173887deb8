use super::ParsedSentence;
use crate::error::{Error, Result};

/// Assigns byte spans to tokens by scanning `text` left to right.
///
/// Whitespace between tokens is skipped; every other character must be
/// consumed by exactly one token surface.
pub fn align_tokens(text: &str, parsed: &ParsedSentence) -> Result<ParsedSentence> {
    let mut out = parsed.clone();
    let mut pos = 0;
    for token in &mut out.tokens {
        let rest = &text[pos..];
        let skipped = rest.len() - rest.trim_start().len();
        pos += skipped;
        let rest = &text[pos..];
        if rest.starts_with(token.surface.as_str()) && !token.surface.is_empty() {
            let end = pos + token.surface.len();
            token.char_span = Some((pos, end));
            pos = end;
        } else {
            let common: usize = rest
                .char_indices()
                .zip(token.surface.chars())
                .take_while(|((_, a), b)| a == b)
                .map(|((_, a), _)| a.len_utf8())
                .sum();
            return Err(Error::Alignment {
                offset: pos + common,
                reason: format!(
                    "token {} `{}` does not match the text in sentence {}",
                    token.index, token.surface, parsed.sentence_id
                ),
            });
        }
    }
    if !text[pos..].trim().is_empty() {
        return Err(Error::Alignment {
            offset: pos + (text[pos..].len() - text[pos..].trim_start().len()),
            reason: format!("trailing text not covered by tokens in sentence {}", parsed.sentence_id),
        });
    }
    out.text = Some(text.to_string());
    Ok(out)
}
