use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DeonticType;
use crate::error::{Error, Result};

/// A typed trigger span over token indices, `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Span {
    #[serde(rename = "type")]
    pub ty: DeonticType,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(ty: DeonticType, start: usize, end: usize) -> Self {
        Span { ty, start, end }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// BIOS tag with a deontic-type suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    O,
    B(DeonticType),
    I(DeonticType),
    S(DeonticType),
}

impl Tag {
    pub fn label(self) -> Option<DeonticType> {
        match self {
            Tag::O => None,
            Tag::B(t) | Tag::I(t) | Tag::S(t) => Some(t),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::O => f.write_str("O"),
            Tag::B(t) => write!(f, "B-{}", t.tag_suffix()),
            Tag::I(t) => write!(f, "I-{}", t.tag_suffix()),
            Tag::S(t) => write!(f, "S-{}", t.tag_suffix()),
        }
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "O" {
            return Ok(Tag::O);
        }
        let (prefix, suffix) = s
            .split_once('-')
            .ok_or_else(|| Error::Validation(format!("malformed tag `{s}`")))?;
        let ty: DeonticType = suffix.parse()?;
        if ty.is_none() {
            return Err(Error::Validation(format!("tag `{s}` carries the None type")));
        }
        match prefix {
            "B" => Ok(Tag::B(ty)),
            "I" => Ok(Tag::I(ty)),
            "S" => Ok(Tag::S(ty)),
            _ => Err(Error::Validation(format!("unknown tag prefix in `{s}`"))),
        }
    }
}

impl Serialize for Tag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Tag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One tag per token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TagSequence(pub Vec<Tag>);

impl TagSequence {
    pub fn outside(n: usize) -> Self {
        TagSequence(vec![Tag::O; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tags(&self) -> &[Tag] {
        &self.0
    }

    pub fn parse<S: AsRef<str>>(tags: &[S]) -> Result<Self> {
        tags.iter().map(|t| t.as_ref().parse()).collect::<Result<Vec<_>>>().map(TagSequence)
    }

    /// Every `I-X` continues a `B-X` or `I-X`.
    pub fn validate(&self) -> Result<()> {
        let mut open: Option<DeonticType> = None;
        for (i, tag) in self.0.iter().enumerate() {
            match *tag {
                Tag::O | Tag::S(_) => open = None,
                Tag::B(t) => open = Some(t),
                Tag::I(t) => {
                    if open != Some(t) {
                        return Err(Error::Validation(format!(
                            "tag {i} `{tag}` does not continue a span of the same type"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(Tag::to_string).collect()
    }
}

/// Encodes non-overlapping spans as BIOS tags.
pub fn spans_to_tags(spans: &[Span], n_tokens: usize) -> Result<TagSequence> {
    let mut sorted = spans.to_vec();
    sorted.sort_by_key(|s| (s.start, s.end, s.ty));
    for s in &sorted {
        if s.ty.is_none() {
            return Err(Error::Validation(format!("span {s:?} has the None type")));
        }
        if s.start > s.end || s.end >= n_tokens {
            return Err(Error::Validation(format!(
                "span {s:?} is outside a sentence of {n_tokens} tokens"
            )));
        }
    }
    for w in sorted.windows(2) {
        if w[0].overlaps(&w[1]) {
            return Err(Error::Validation(format!(
                "overlapping spans {:?} and {:?}",
                w[0], w[1]
            )));
        }
    }
    let mut tags = vec![Tag::O; n_tokens];
    for s in &sorted {
        if s.start == s.end {
            tags[s.start] = Tag::S(s.ty);
        } else {
            tags[s.start] = Tag::B(s.ty);
            for t in &mut tags[s.start + 1..=s.end] {
                *t = Tag::I(s.ty);
            }
        }
    }
    Ok(TagSequence(tags))
}

/// Decodes a tag sequence into maximal spans. See [`decode_spans`] for how
/// malformed input is read.
pub fn tags_to_spans(tags: &TagSequence) -> Vec<Span> {
    decode_spans(tags.tags(), |t| t)
        .0
        .into_iter()
        .map(|(ty, start, end)| Span::new(ty, start, end))
        .collect()
}

/// Reads `(key(type), start, end)` entities from tags, keyed by `key`.
///
/// An `I` that does not continue an open span with the same key is read as
/// a `B` and counted as one repair.
pub fn decode_spans<K, F>(tags: &[Tag], key: F) -> (Vec<(K, usize, usize)>, usize)
where
    K: PartialEq + Copy,
    F: Fn(DeonticType) -> K,
{
    let mut out = Vec::new();
    let mut repairs = 0;
    let mut open: Option<(K, usize)> = None;
    for (i, tag) in tags.iter().enumerate() {
        match *tag {
            Tag::O => {
                if let Some((k, s)) = open.take() {
                    out.push((k, s, i - 1));
                }
            }
            Tag::B(t) => {
                if let Some((k, s)) = open.take() {
                    out.push((k, s, i - 1));
                }
                open = Some((key(t), i));
            }
            Tag::I(t) => {
                let k = key(t);
                match open {
                    Some((ok, _)) if ok == k => {}
                    _ => {
                        if let Some((pk, s)) = open.take() {
                            out.push((pk, s, i - 1));
                        }
                        repairs += 1;
                        open = Some((k, i));
                    }
                }
            }
            Tag::S(t) => {
                if let Some((k, s)) = open.take() {
                    out.push((k, s, i - 1));
                }
                out.push((key(t), i, i));
            }
        }
    }
    if let Some((k, s)) = open {
        out.push((k, s, tags.len() - 1));
    }
    (out, repairs)
}
