//! Set-valued precision/recall, entity-level splits, and learning curves.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{LexError, Result};
use crate::indicators::FeatureRecord;
use crate::learner::{predict, train, LearnerParams, RuleSet};
use crate::taxonomy::{SynsetId, TagMode};

/// Precision and recall of a predicted constraint set.
///
/// Matches over predicted size and matches over correct size, with the
/// empty-set conventions: both empty is a perfect (1, 1); an empty
/// prediction against a non-empty truth is (0, 0); a non-empty
/// prediction against an empty truth is (0, 1).
pub fn pr(predicted: &BTreeSet<SynsetId>, correct: &BTreeSet<SynsetId>) -> (f64, f64) {
    match (predicted.is_empty(), correct.is_empty()) {
        (true, true) => (1.0, 1.0),
        (true, false) => (0.0, 0.0),
        (false, true) => (0.0, 1.0),
        (false, false) => {
            let matches = predicted.intersection(correct).count() as f64;
            (
                matches / predicted.len() as f64,
                matches / correct.len() as f64,
            )
        }
    }
}

/// Partitions records by entity: no entity straddles the split, and
/// `round(fraction * entities)` entities land in train. Deterministic
/// per seed.
pub fn split_by_entity(
    records: &[FeatureRecord],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<FeatureRecord>, Vec<FeatureRecord>)> {
    if !(0.0..1.0).contains(&fraction) || fraction <= 0.0 {
        return Err(LexError::Param(format!(
            "split fraction must be in (0, 1), got {fraction}"
        )));
    }
    let entities: BTreeSet<&str> = records.iter().map(|r| r.entity_name.as_str()).collect();
    if entities.len() < 2 {
        return Err(LexError::Param(format!(
            "entity split needs at least 2 entities, got {}",
            entities.len()
        )));
    }
    let mut entities: Vec<&str> = entities.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    entities.shuffle(&mut rng);
    let n_train = (fraction * entities.len() as f64).round() as usize;
    let train_set: BTreeSet<&str> = entities.iter().take(n_train).copied().collect();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for r in records {
        if train_set.contains(r.entity_name.as_str()) {
            train.push(r.clone());
        } else {
            test.push(r.clone());
        }
    }
    Ok((train, test))
}

#[derive(Clone, Debug, Serialize)]
pub struct RecordEval {
    pub predicted: BTreeSet<SynsetId>,
    pub correct: BTreeSet<SynsetId>,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub records: usize,
    pub empty_predictions: usize,
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub details: Vec<RecordEval>,
}

/// Macro-averages [`pr`] over records; every record weighs the same.
pub fn evaluate(rs: &RuleSet, records: &[FeatureRecord]) -> EvalReport {
    let mut details = Vec::with_capacity(records.len());
    let mut empty_predictions = 0usize;
    let mut sum_p = 0.0;
    let mut sum_r = 0.0;
    for r in records {
        let predicted = predict(rs, r);
        if predicted.is_empty() {
            empty_predictions += 1;
        }
        let (precision, recall) = pr(&predicted, &r.label);
        sum_p += precision;
        sum_r += recall;
        details.push(RecordEval {
            predicted,
            correct: r.label.clone(),
            precision,
            recall,
        });
    }
    let n = records.len();
    EvalReport {
        records: n,
        empty_predictions,
        mean_precision: if n == 0 { 0.0 } else { sum_p / n as f64 },
        mean_recall: if n == 0 { 0.0 } else { sum_r / n as f64 },
        details,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub size: usize,
    pub mode: TagMode,
    pub precision: f64,
    pub recall: f64,
}

/// Trains on deterministic subsamples of the entity-level train split and
/// evaluates each on the fixed test split, for every size and mode.
pub fn learning_curve(
    records_by_mode: &[(TagMode, Vec<FeatureRecord>)],
    sizes: &[usize],
    params: &LearnerParams,
    fraction: f64,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    let mut splits = Vec::new();
    for (mode, records) in records_by_mode {
        let (train_split, test_split) = split_by_entity(records, fraction, seed)?;
        splits.push((*mode, train_split, test_split));
    }
    let mut out = Vec::new();
    for &size in sizes {
        for (mode, train_split, test_split) in &splits {
            if size > train_split.len() {
                return Err(LexError::Param(format!(
                    "curve size {size} exceeds the {} available train records",
                    train_split.len()
                )));
            }
            let mut sample: Vec<&FeatureRecord> = train_split.iter().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(size as u64));
            sample.shuffle(&mut rng);
            sample.truncate(size);
            let subset: Vec<FeatureRecord> = sample.into_iter().cloned().collect();
            let rs = train(&subset, params)?;
            let report = evaluate(&rs, test_split);
            out.push(CurvePoint {
                size,
                mode: *mode,
                precision: report.mean_precision,
                recall: report.mean_recall,
            });
        }
    }
    Ok(out)
}
