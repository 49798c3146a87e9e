//! Builds one training/prediction record per observed tuple: context bag,
//! article length, entity name, profile words, profile offsets, and the
//! tag set of the description actually used.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Document};
use crate::error::{LexError, Result};
use crate::extractor::EDTuple;
use crate::profiles::Profile;
use crate::taxonomy::{SynsetId, TagMode, Taxonomy};

/// Words collected on each side of a mention.
pub const DEFAULT_WINDOW: usize = 4;

/// A multiset of lowered words, serialized as sorted word:count pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WordBag(BTreeMap<String, usize>);

impl WordBag {
    pub fn insert(&mut self, word: impl Into<String>) {
        *self.0.entry(word.into()).or_default() += 1;
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains_key(word)
    }

    pub fn count(&self, word: &str) -> usize {
        self.0.get(word).copied().unwrap_or(0)
    }

    /// Total multiplicity.
    pub fn len(&self) -> usize {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for WordBag {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut bag = WordBag::default();
        for w in iter {
            bag.insert(w);
        }
        bag
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRecord {
    pub context: WordBag,
    pub article_length: usize,
    pub entity_name: String,
    pub profile_bag: WordBag,
    pub profile_offsets: BTreeSet<SynsetId>,
    pub label: BTreeSet<SynsetId>,
}

impl FeatureRecord {
    /// Records whose description had no senses are kept but flagged.
    pub fn label_missing(&self) -> bool {
        self.label.is_empty()
    }
}

/// Collects up to `window` word tokens on each side of the combined
/// description+entity region, skipping punctuation and lowercasing.
/// Tokens inside the description span never appear; the entity's own
/// tokens only appear via the windows of other mentions.
pub fn context_bag(
    doc: &Document,
    mention_span: (usize, usize),
    description_span: (usize, usize),
    window: usize,
) -> WordBag {
    let region_start = mention_span.0.min(description_span.0);
    let region_end = mention_span.1.max(description_span.1);
    let mut bag = WordBag::default();
    let mut taken = 0usize;
    for i in (0..region_start).rev() {
        if taken == window {
            break;
        }
        let tok = &doc.tokens[i];
        if tok.is_word() {
            bag.insert(tok.lowered.clone());
            taken += 1;
        }
    }
    taken = 0;
    for tok in &doc.tokens[region_end.min(doc.tokens.len())..] {
        if taken == window {
            break;
        }
        if tok.is_word() {
            bag.insert(tok.lowered.clone());
            taken += 1;
        }
    }
    bag
}

/// Builds the record for one tuple against its document and profile.
pub fn make_record(
    tuple: &EDTuple,
    doc: &Document,
    profile: &Profile,
    taxonomy: &Taxonomy,
    mode: TagMode,
    window: usize,
) -> Result<FeatureRecord> {
    if tuple.article_id != doc.id {
        return Err(LexError::Validation(format!(
            "tuple references article {:?} but document is {:?}",
            tuple.article_id, doc.id
        )));
    }
    if profile.entity != tuple.entity {
        return Err(LexError::Validation(format!(
            "tuple entity {:?} does not match profile {:?}",
            tuple.entity, profile.entity
        )));
    }
    let (s, e) = *doc
        .sentence_bounds
        .get(tuple.sentence_no)
        .ok_or_else(|| {
            LexError::Validation(format!(
                "sentence {} out of range for article {:?}",
                tuple.sentence_no, doc.id
            ))
        })?;
    let desc_span = find_description(doc, s, e, &tuple.description).ok_or_else(|| {
        LexError::Validation(format!(
            "description {:?} not found in sentence {} of {:?}",
            tuple.description.join(" "),
            tuple.sentence_no,
            doc.id
        ))
    })?;
    let mention_span = find_mention(doc, s, e, &tuple.entity, desc_span).unwrap_or(desc_span);

    let mut profile_bag = WordBag::default();
    let mut profile_offsets = BTreeSet::new();
    for entry in &profile.entries {
        for w in &entry.description {
            profile_bag.insert(w.clone());
        }
        profile_offsets.extend(entry.tags.iter().copied());
    }

    Ok(FeatureRecord {
        context: context_bag(doc, mention_span, desc_span, window),
        article_length: doc.length_words,
        entity_name: tuple.entity.clone(),
        profile_bag,
        profile_offsets,
        label: taxonomy.semantic_tags(&tuple.description, mode),
    })
}

/// Bulk record construction over a corpus; documents are keyed by id and
/// profiles by entity.
pub fn make_records(
    tuples: &[EDTuple],
    corpus: &Corpus,
    profiles: &BTreeMap<String, Profile>,
    taxonomy: &Taxonomy,
    mode: TagMode,
    window: usize,
) -> Result<Vec<FeatureRecord>> {
    let by_id: BTreeMap<&str, &Document> = corpus
        .documents
        .iter()
        .map(|d| (d.id.as_str(), d))
        .collect();
    tuples
        .iter()
        .map(|t| {
            let doc = by_id.get(t.article_id.as_str()).ok_or_else(|| {
                LexError::Validation(format!("unknown article {:?}", t.article_id))
            })?;
            let profile = profiles.get(&t.entity).ok_or_else(|| {
                LexError::Validation(format!("no profile for entity {:?}", t.entity))
            })?;
            make_record(t, doc, profile, taxonomy, mode, window)
        })
        .collect()
}

/// Leftmost contiguous token run matching the description words.
fn find_description(
    doc: &Document,
    s: usize,
    e: usize,
    description: &[String],
) -> Option<(usize, usize)> {
    let n = description.len();
    if n == 0 || s + n > e {
        return None;
    }
    (s..=e - n).find_map(|p| {
        doc.tokens[p..p + n]
            .iter()
            .zip(description)
            .all(|(tok, w)| tok.is_word() && tok.lowered == *w)
            .then_some((p, p + n))
    })
}

/// Mention of the entity nearest the description, tolerating a trailing
/// possessive on surface tokens.
fn find_mention(
    doc: &Document,
    s: usize,
    e: usize,
    entity: &str,
    desc_span: (usize, usize),
) -> Option<(usize, usize)> {
    let words: Vec<String> = entity.split_whitespace().map(str::to_lowercase).collect();
    let n = words.len();
    if n == 0 || s + n > e {
        return None;
    }
    let matches: Vec<(usize, usize)> = (s..=e - n)
        .filter(|&p| {
            doc.tokens[p..p + n].iter().zip(&words).all(|(tok, w)| {
                let stem = tok.lowered.strip_suffix("'s").unwrap_or(&tok.lowered);
                tok.is_word() && (tok.lowered == *w || stem == w)
            })
        })
        .map(|p| (p, p + n))
        .collect();
    matches
        .into_iter()
        .min_by_key(|&(p, q)| gap(desc_span, (p, q)))
}

fn gap(a: (usize, usize), b: (usize, usize)) -> usize {
    if a.1 <= b.0 {
        b.0 - a.1
    } else if b.1 <= a.0 {
        a.0 - b.1
    } else {
        0
    }
}

/// One JSON object per record, one record per line.
pub fn save_records(records: &[FeatureRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serializes"));
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| LexError::io(path, e))
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<FeatureRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(lineno, line)| {
            serde_json::from_str(line).map_err(|e| LexError::Parse {
                line: lineno + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}
