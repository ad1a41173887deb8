use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{AnnotationRecord, Split};
use crate::error::{Error, Result};

/// Assigns whole contracts to splits so that record counts approach the
/// target ratios.
///
/// Pinned contracts are placed first. The rest are shuffled with `seed`,
/// stably sorted by descending size, and each goes to the split furthest
/// below its target. A split still empty when only as many contracts
/// remain as there are empty splits takes the next one.
pub fn split_by_contract(
    records: &[AnnotationRecord],
    ratios: &[(Split, f64)],
    seed: u64,
    pinned: &BTreeMap<String, Split>,
) -> Result<BTreeMap<String, Split>> {
    if ratios.is_empty() || ratios.iter().any(|(_, r)| !r.is_finite() || *r < 0.0) {
        return Err(Error::Config("split ratios must be non-negative and non-empty".into()));
    }
    let total_ratio: f64 = ratios.iter().map(|(_, r)| r).sum();
    if total_ratio <= 0.0 {
        return Err(Error::Config("split ratios sum to zero".into()));
    }
    let mut sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for r in records {
        *sizes.entry(r.contract_id.as_str()).or_default() += 1;
    }
    if sizes.len() < ratios.len() {
        return Err(Error::Usage(format!(
            "{} contracts cannot fill {} splits",
            sizes.len(),
            ratios.len()
        )));
    }
    let total: usize = sizes.values().sum();
    let target: Vec<f64> = ratios.iter().map(|(_, r)| r / total_ratio * total as f64).collect();
    let mut filled = vec![0usize; ratios.len()];
    let mut count = vec![0usize; ratios.len()];
    let mut out = BTreeMap::new();

    let mut free: Vec<(&str, usize)> = Vec::new();
    for (&cid, &n) in &sizes {
        match pinned.get(cid) {
            Some(split) => {
                let k = ratios
                    .iter()
                    .position(|(s, _)| s == split)
                    .ok_or_else(|| Error::Config(format!("contract {cid} pinned to unused split {split}")))?;
                filled[k] += n;
                count[k] += 1;
                out.insert(cid.to_string(), *split);
            }
            None => free.push((cid, n)),
        }
    }
    free.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    free.sort_by_key(|f| std::cmp::Reverse(f.1));

    let mut remaining = free.len();
    for (cid, n) in free {
        let deficit = |k: usize| target[k] - filled[k] as f64;
        let empty: Vec<usize> = (0..ratios.len()).filter(|&k| count[k] == 0).collect();
        let pool: Vec<usize> = if !empty.is_empty() && remaining <= empty.len() {
            empty
        } else {
            (0..ratios.len()).collect()
        };
        let k = pool
            .into_iter()
            .fold(None::<usize>, |best, k| match best {
                Some(b) if deficit(b) >= deficit(k) => Some(b),
                _ => Some(k),
            })
            .expect("at least one split");
        filled[k] += n;
        count[k] += 1;
        remaining -= 1;
        out.insert(cid.to_string(), ratios[k].0);
    }
    Ok(out)
}

/// Copies of `records` with `split` set from the assignment.
pub fn apply_split(records: &[AnnotationRecord], assignment: &BTreeMap<String, Split>) -> Vec<AnnotationRecord> {
    records
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.split = assignment.get(&r.contract_id).copied();
            r
        })
        .collect()
}
