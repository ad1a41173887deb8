//! Brute-force oracles and random generators shared by integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use deontic_core::rules::{DeonticType, Span, Tag, TagSequence};
use rand::Rng;

pub mod e2e;

pub const SPAN_TYPES: [DeonticType; 6] = DeonticType::SPAN_TYPES;

/// Random valid label set: either {None} or 1-3 span types.
pub fn label_set<R: Rng>(rng: &mut R) -> BTreeSet<DeonticType> {
    if rng.gen_bool(0.3) {
        return BTreeSet::from([DeonticType::None]);
    }
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| SPAN_TYPES[rng.gen_range(0..6)]).collect()
}

/// Random non-overlapping spans over `n` tokens.
pub fn spans<R: Rng>(rng: &mut R, n: usize) -> Vec<Span> {
    let mut out: Vec<Span> = Vec::new();
    for _ in 0..rng.gen_range(0..=4) {
        let start = rng.gen_range(0..n);
        let end = (start + rng.gen_range(0..3)).min(n - 1);
        let s = Span::new(SPAN_TYPES[rng.gen_range(0..6)], start, end);
        if out.iter().all(|o| o.end < s.start || s.end < o.start) {
            out.push(s);
        }
    }
    out.sort_by_key(|s| s.start);
    out
}

/// Independent encoder: one pass writing S, or B followed by I.
pub fn encode(spans: &[Span], n: usize) -> TagSequence {
    let mut tags = vec![Tag::O; n];
    for s in spans {
        for (k, t) in tags.iter_mut().enumerate().take(s.end + 1).skip(s.start) {
            *t = if s.start == s.end {
                Tag::S(s.ty)
            } else if k == s.start {
                Tag::B(s.ty)
            } else {
                Tag::I(s.ty)
            };
        }
    }
    TagSequence(tags)
}

/// Random tags, a third of them unconstrained so repairs occur.
pub fn tags<R: Rng>(rng: &mut R, n: usize) -> TagSequence {
    if rng.gen_bool(0.33) {
        TagSequence(
            (0..n)
                .map(|_| {
                    let ty = SPAN_TYPES[rng.gen_range(0..6)];
                    match rng.gen_range(0..5) {
                        0 | 1 => Tag::O,
                        2 => Tag::B(ty),
                        3 => Tag::I(ty),
                        _ => Tag::S(ty),
                    }
                })
                .collect(),
        )
    } else {
        encode(&spans(rng, n), n)
    }
}

/// Entity oracle. Walks the tags keeping the currently open entity as an
/// explicit (key, start) pair; keys are compared through `key`.
pub fn entities<K: Copy + Eq + Ord>(tags: &TagSequence, key: impl Fn(DeonticType) -> K) -> BTreeSet<(K, usize, usize)> {
    let mut found = BTreeSet::new();
    let mut open: Option<(K, usize)> = None;
    let n = tags.0.len();
    for i in 0..n {
        let tag = tags.0[i];
        let (kind, k) = match tag {
            Tag::O => ('O', None),
            Tag::B(t) => ('B', Some(key(t))),
            Tag::I(t) => ('I', Some(key(t))),
            Tag::S(t) => ('S', Some(key(t))),
        };
        let continues = kind == 'I' && open.map(|(ok, _)| Some(ok) == k).unwrap_or(false);
        if !continues {
            if let Some((ok, s)) = open.take() {
                found.insert((ok, s, i - 1));
            }
            match kind {
                'B' | 'I' => open = Some((k.unwrap(), i)),
                'S' => {
                    found.insert((k.unwrap(), i, i));
                }
                _ => {}
            }
        }
    }
    if let Some((ok, s)) = open {
        found.insert((ok, s, n - 1));
    }
    found
}

/// (tp, predicted, gold) -> (precision, recall, f1), 0 on empty denominators.
pub fn prf(tp: usize, pred: usize, gold: usize) -> (f64, f64, f64) {
    let d = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    (d(tp, pred), d(tp, gold), d(2 * tp, pred + gold))
}

pub struct OracleScores {
    pub per_class: Vec<(DeonticType, (f64, f64, f64))>,
    pub macro_prf: (f64, f64, f64),
    pub micro: (f64, f64, f64),
    pub accuracy: f64,
}

fn mean(rows: &[(f64, f64, f64)]) -> (f64, f64, f64) {
    if rows.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let mut s = (0.0, 0.0, 0.0);
    for r in rows {
        s.0 += r.0;
        s.1 += r.1;
        s.2 += r.2;
    }
    let n = rows.len() as f64;
    (s.0 / n, s.1 / n, s.2 / n)
}

/// Classification oracle: explicit confusion counts per class.
pub fn classification_oracle(preds: &[BTreeSet<DeonticType>], golds: &[BTreeSet<DeonticType>]) -> OracleScores {
    let mut per_class = Vec::new();
    let (mut tp_all, mut p_all, mut g_all) = (0, 0, 0);
    for c in DeonticType::ALL {
        let (mut tp, mut fp, mut fnn) = (0, 0, 0);
        for i in 0..golds.len() {
            let p = preds[i].iter().any(|x| *x == c);
            let g = golds[i].iter().any(|x| *x == c);
            if p && g {
                tp += 1;
            } else if p {
                fp += 1;
            } else if g {
                fnn += 1;
            }
        }
        tp_all += tp;
        p_all += tp + fp;
        g_all += tp + fnn;
        per_class.push((c, prf(tp, tp + fp, tp + fnn)));
    }
    let rows: Vec<_> = per_class.iter().map(|r| r.1).collect();
    let exact = (0..golds.len())
        .filter(|&i| preds[i].iter().collect::<Vec<_>>() == golds[i].iter().collect::<Vec<_>>())
        .count();
    OracleScores {
        macro_prf: mean(&rows),
        per_class,
        micro: prf(tp_all, p_all, g_all),
        accuracy: if golds.is_empty() { 0.0 } else { exact as f64 / golds.len() as f64 },
    }
}

/// Span oracle over sentence pairs (pred, gold); macro over types with
/// support in gold or predictions.
pub fn span_oracle(pairs: &[(TagSequence, TagSequence)], labeled: bool) -> OracleScores {
    let mut tokens = 0;
    let mut same = 0;
    let erase = |t: Tag| match t {
        Tag::O => 'O',
        Tag::B(_) => 'B',
        Tag::I(_) => 'I',
        Tag::S(_) => 'S',
    };
    for (p, g) in pairs {
        for (a, b) in p.0.iter().zip(&g.0) {
            tokens += 1;
            if (labeled && a == b) || (!labeled && erase(*a) == erase(*b)) {
                same += 1;
            }
        }
    }
    let accuracy = if tokens == 0 { 0.0 } else { same as f64 / tokens as f64 };
    if labeled {
        let mut per_class = Vec::new();
        let mut supported = Vec::new();
        let (mut tp_all, mut p_all, mut g_all) = (0, 0, 0);
        for c in SPAN_TYPES {
            let (mut tp, mut np, mut ng) = (0, 0, 0);
            for (p, g) in pairs {
                let pe: BTreeSet<_> = entities(p, |t| t).into_iter().filter(|e| e.0 == c).collect();
                let ge: BTreeSet<_> = entities(g, |t| t).into_iter().filter(|e| e.0 == c).collect();
                tp += pe.iter().filter(|e| ge.contains(e)).count();
                np += pe.len();
                ng += ge.len();
            }
            tp_all += tp;
            p_all += np;
            g_all += ng;
            let s = prf(tp, np, ng);
            if np + ng > 0 {
                supported.push(s);
            }
            per_class.push((c, s));
        }
        OracleScores {
            macro_prf: mean(&supported),
            per_class,
            micro: prf(tp_all, p_all, g_all),
            accuracy,
        }
    } else {
        let (mut tp, mut np, mut ng) = (0, 0, 0);
        for (p, g) in pairs {
            let pe = entities(p, |_| 0u8);
            let ge = entities(g, |_| 0u8);
            tp += pe.intersection(&ge).count();
            np += pe.len();
            ng += ge.len();
        }
        let s = prf(tp, np, ng);
        OracleScores {
            per_class: Vec::new(),
            macro_prf: s,
            micro: s,
            accuracy,
        }
    }
}

/// Pairwise alpha oracle: observed disagreement over within-item pairs,
/// expected over all pairs of pairable values.
pub fn alpha_oracle(data: &[Vec<Option<u8>>]) -> Option<f64> {
    let units: Vec<Vec<u8>> = data
        .iter()
        .map(|u| u.iter().flatten().copied().collect::<Vec<_>>())
        .filter(|u| u.len() >= 2)
        .collect();
    let pool: Vec<u8> = units.iter().flatten().copied().collect();
    if pool.len() < 2 {
        return None;
    }
    let n = pool.len() as f64;
    let mut d_o = 0.0;
    for u in &units {
        let mut dis = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i != j && u[i] != u[j] {
                    dis += 1.0;
                }
            }
        }
        d_o += dis / (u.len() - 1) as f64;
    }
    d_o /= n;
    let mut d_e = 0.0;
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            if i != j && pool[i] != pool[j] {
                d_e += 1.0;
            }
        }
    }
    d_e /= n * (n - 1.0);
    Some(if d_e == 0.0 { 1.0 } else { 1.0 - d_o / d_e })
}

/// Random reliability matrix with some missing cells.
pub fn reliability<R: Rng>(rng: &mut R) -> Vec<Vec<Option<u8>>> {
    let coders = rng.gen_range(2..=5);
    let items = rng.gen_range(2..=10);
    let values = rng.gen_range(2..=4);
    (0..items)
        .map(|_| {
            (0..coders)
                .map(|_| if rng.gen_bool(0.8) { Some(rng.gen_range(0..values)) } else { None })
                .collect()
        })
        .collect()
}
