//! Per-entity profiles: the distinct descriptions seen for an entity,
//! with occurrence counts and semantic tag sets.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{LexError, Result};
use crate::extractor::EDTuple;
use crate::taxonomy::{SynsetId, TagMode, Taxonomy};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub description: Vec<String>,
    pub frequency: usize,
    pub tags: BTreeSet<SynsetId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub entity: String,
    /// Descending frequency, then lexicographic by description.
    pub entries: Vec<ProfileEntry>,
    pub total_occurrences: usize,
}

impl Profile {
    /// Distinct descriptions per entity.
    pub fn ddpe(&self) -> usize {
        self.entries.len()
    }
}

/// Groups tuples by entity and aggregates distinct descriptions with
/// counts and tags. Permutation-invariant over the tuple list.
pub fn build_profiles(
    tuples: &[EDTuple],
    taxonomy: &Taxonomy,
    mode: TagMode,
) -> BTreeMap<String, Profile> {
    let mut counts: BTreeMap<&str, BTreeMap<&[String], usize>> = BTreeMap::new();
    for t in tuples {
        *counts
            .entry(&t.entity)
            .or_default()
            .entry(&t.description)
            .or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(entity, descs)| {
            let mut entries: Vec<ProfileEntry> = descs
                .into_iter()
                .map(|(description, frequency)| ProfileEntry {
                    description: description.to_vec(),
                    frequency,
                    tags: taxonomy.semantic_tags(description, mode),
                })
                .collect();
            entries.sort_by(|a, b| {
                b.frequency
                    .cmp(&a.frequency)
                    .then_with(|| a.description.cmp(&b.description))
            });
            let total_occurrences = entries.iter().map(|e| e.frequency).sum();
            (
                entity.to_string(),
                Profile {
                    entity: entity.to_string(),
                    entries,
                    total_occurrences,
                },
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DdpeStats {
    /// DDPE value -> number of entities with that many distinct descriptions.
    pub histogram: BTreeMap<usize, usize>,
    pub entities: usize,
    pub tuples: usize,
    pub mean: f64,
}

/// Histogram of distinct-description counts plus the mean,
/// computed as total tuples over total entities.
pub fn ddpe_histogram(profiles: &BTreeMap<String, Profile>) -> DdpeStats {
    let mut histogram = BTreeMap::new();
    let mut tuples = 0usize;
    for p in profiles.values() {
        *histogram.entry(p.ddpe()).or_default() += 1;
        tuples += p.total_occurrences;
    }
    let entities = profiles.len();
    DdpeStats {
        histogram,
        entities,
        tuples,
        mean: mean_ddpe(tuples, entities),
    }
}

pub fn mean_ddpe(tuples: usize, entities: usize) -> f64 {
    if entities == 0 {
        0.0
    } else {
        tuples as f64 / entities as f64
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileRecord {
    entity: String,
    entries: Vec<ProfileEntry>,
}

/// One JSON object per entity, one entity per line.
pub fn save_profiles(profiles: &BTreeMap<String, Profile>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for p in profiles.values() {
        let record = ProfileRecord {
            entity: p.entity.clone(),
            entries: p.entries.clone(),
        };
        out.push_str(&serde_json::to_string(&record).expect("profile serializes"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| LexError::io(path, e))
}

pub fn load_profiles(path: impl AsRef<Path>) -> Result<BTreeMap<String, Profile>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
    let mut profiles = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: ProfileRecord = serde_json::from_str(line).map_err(|e| LexError::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let total_occurrences = record.entries.iter().map(|e| e.frequency).sum();
        profiles.insert(
            record.entity.clone(),
            Profile {
                entity: record.entity,
                entries: record.entries,
                total_occurrences,
            },
        );
    }
    Ok(profiles)
}

/// The thirteen distinct descriptions of the bundled sample profile,
/// used by tests and the README walkthrough.
pub fn sample_profile_descriptions() -> Vec<Vec<String>> {
    [
        vec!["a", "senior", "member"],
        vec!["cambodia's"],
        vec!["cambodian", "foreign", "minister"],
        vec!["co-premier"],
        vec!["first", "prime", "minister"],
        vec!["foreign", "minister"],
        vec!["his", "excellency"],
        vec!["mr."],
        vec!["new", "co-premier"],
        vec!["new", "first", "prime", "minister"],
        vec!["newly-appointed", "first", "prime", "minister"],
        vec!["premier"],
        vec!["prime", "minister"],
    ]
    .into_iter()
    .map(|d| d.into_iter().map(str::to_string).collect())
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::Taxonomy;

    fn tuple(entity: &str, desc: &[&str]) -> EDTuple {
        EDTuple {
            entity: entity.into(),
            description: desc.iter().map(|w| w.to_string()).collect(),
            article_id: "a".into(),
            sentence_no: 0,
        }
    }

    #[test]
    fn frequencies_and_ddpe_from_three_tuples() {
        let t = Taxonomy::builtin();
        let tuples = vec![
            tuple("E", &["premier"]),
            tuple("E", &["premier"]),
            tuple("E", &["mr."]),
        ];
        let profiles = build_profiles(&tuples, &t, TagMode::WordOnly);
        let p = &profiles["E"];
        assert_eq!(p.ddpe(), 2);
        assert_eq!(p.total_occurrences, 3);
        assert_eq!(p.entries[0].description, vec!["premier"]);
        assert_eq!(p.entries[0].frequency, 2);
        assert_eq!(p.entries[1].description, vec!["mr."]);
        assert_eq!(p.entries[1].frequency, 1);
    }

    #[test]
    fn sample_profile_has_thirteen_entries() {
        let t = Taxonomy::builtin();
        let tuples: Vec<EDTuple> = sample_profile_descriptions()
            .into_iter()
            .map(|d| EDTuple {
                entity: "Ung Huot".into(),
                description: d,
                article_id: "a".into(),
                sentence_no: 0,
            })
            .collect();
        let profiles = build_profiles(&tuples, &t, TagMode::WordParent);
        assert_eq!(profiles["Ung Huot"].ddpe(), 13);
    }

    #[test]
    fn empty_tuples_give_empty_mapping() {
        let t = Taxonomy::builtin();
        assert!(build_profiles(&[], &t, TagMode::WordOnly).is_empty());
    }

    #[test]
    fn histogram_and_mean_are_hand_countable() {
        let t = Taxonomy::builtin();
        let tuples = vec![
            tuple("A", &["premier"]),
            tuple("B", &["premier"]),
            tuple("B", &["minister"]),
            tuple("B", &["senator"]),
        ];
        let profiles = build_profiles(&tuples, &t, TagMode::WordOnly);
        let stats = ddpe_histogram(&profiles);
        assert_eq!(stats.histogram, BTreeMap::from([(1, 1), (3, 1)]));
        assert_eq!(stats.mean, 2.0);
        assert_eq!(stats.tuples, 4);
    }

    #[test]
    fn mean_formula_matches_reported_aggregate() {
        let mean = mean_ddpe(35_206, 11_504);
        assert!((mean - 3.06).abs() < 0.005, "{mean}");
    }

    #[test]
    fn tags_use_the_configured_mode() {
        let t = Taxonomy::builtin();
        let tuples = vec![tuple("E", &["director"])];
        let wo = build_profiles(&tuples, &t, TagMode::WordOnly);
        let wp = build_profiles(&tuples, &t, TagMode::WordParent);
        assert!(wo["E"].entries[0].tags.is_subset(&wp["E"].entries[0].tags));
        assert_eq!(wo["E"].entries[0].tags.len(), 1);
        assert_eq!(wp["E"].entries[0].tags.len(), 2);
    }

    #[test]
    fn persistence_round_trips_including_order() {
        let t = Taxonomy::builtin();
        let tuples = vec![
            tuple("Ung Huot", &["premier"]),
            tuple("Ung Huot", &["premier"]),
            tuple("Ung Huot", &["cambodian", "foreign", "minister"]),
            tuple("Richard Butler", &["chief", "u.n.", "arms", "inspector"]),
        ];
        let profiles = build_profiles(&tuples, &t, TagMode::WordParent);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        save_profiles(&profiles, &path).unwrap();
        assert_eq!(load_profiles(&path).unwrap(), profiles);
    }

    #[test]
    fn empty_mapping_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        save_profiles(&BTreeMap::new(), &path).unwrap();
        assert!(load_profiles(&path).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        std::fs::write(&path, "{\"entity\":\"E\",\"entries\":[]}\n{\"entity\":\n").unwrap();
        let err = load_profiles(&path).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn build_is_permutation_invariant() {
        let t = Taxonomy::builtin();
        let mut tuples = vec![
            tuple("A", &["premier"]),
            tuple("B", &["minister"]),
            tuple("A", &["senator"]),
            tuple("A", &["premier"]),
            tuple("B", &["governor"]),
        ];
        let forward = build_profiles(&tuples, &t, TagMode::WordOnly);
        tuples.reverse();
        let backward = build_profiles(&tuples, &t, TagMode::WordOnly);
        assert_eq!(forward, backward);
    }

    #[test]
    fn frequencies_sum_to_tuple_count() {
        let t = Taxonomy::builtin();
        let tuples = vec![
            tuple("A", &["premier"]),
            tuple("A", &["premier"]),
            tuple("B", &["minister"]),
            tuple("C", &["governor"]),
            tuple("C", &["governor"]),
            tuple("C", &["senator"]),
        ];
        let profiles = build_profiles(&tuples, &t, TagMode::WordOnly);
        let total: usize = profiles.values().map(|p| p.total_occurrences).sum();
        assert_eq!(total, tuples.len());
        let ddpe_sum: usize = profiles.values().map(Profile::ddpe).sum();
        assert!(ddpe_sum >= profiles.len());
    }
}
