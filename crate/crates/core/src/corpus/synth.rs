//! Deterministic synthetic corpora with planted description-choice
//! regularities, for desk-scale verification of the whole pipeline.
//!
//! A spec declares entities, candidate descriptions with tagged words,
//! trigger words, and rules "trigger in context => use one of these
//! descriptions". The generator emits documents whose mention sentences
//! follow the planted rules and returns the rules for oracle comparison.
//! Every sentence keeps two filler words on each flank so that one
//! mention's context window can never pick up another mention's trigger.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::corpus::{AbbrevSet, Corpus, Document};
use crate::error::{LexError, Result};
use crate::taxonomy::{SynsetId, TagMode, Taxonomy};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub n_documents: usize,
    pub entities: Vec<String>,
    pub distractor_vocab: Vec<String>,
    pub triggers: Vec<String>,
    /// Lexicon: description word -> synset offset and optional parent.
    pub tags: BTreeMap<String, TagSpec>,
    pub descriptions: Vec<DescriptionSpec>,
    pub rules: Vec<RuleSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagSpec {
    pub offset: SynsetId,
    #[serde(default)]
    pub parent: Option<SynsetId>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptionSpec {
    pub name: String,
    pub words: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub trigger: String,
    /// Names of declared descriptions the rule may choose between.
    pub descriptions: Vec<String>,
    #[serde(default = "default_weight")]
    pub weight: f64,
}

fn default_weight() -> f64 {
    1.0
}

/// A planted regularity returned as ground truth: whenever `trigger`
/// appears near a mention, the description used carries these atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedRule {
    pub trigger: String,
    pub descriptions: Vec<String>,
    pub atoms_word_only: BTreeSet<SynsetId>,
    pub atoms_word_parent: BTreeSet<SynsetId>,
}

impl PlantedRule {
    pub fn atoms(&self, mode: TagMode) -> &BTreeSet<SynsetId> {
        match mode {
            TagMode::WordOnly => &self.atoms_word_only,
            TagMode::WordParent => &self.atoms_word_parent,
        }
    }
}

pub fn load_synth_spec(path: impl AsRef<Path>) -> Result<SynthSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LexError::io(path, e))?;
    let spec: SynthSpec = toml::from_str(&text)
        .map_err(|e| LexError::Validation(format!("bad synth spec: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(LexError::Validation(msg));
        if self.entities.is_empty() {
            return fail("spec declares no entities".into());
        }
        for e in &self.entities {
            if e.split_whitespace().count() < 2 {
                return fail(format!("entity {e:?} needs at least two name words"));
            }
        }
        if self.distractor_vocab.len() < 4 {
            return fail("distractor_vocab needs at least 4 words".into());
        }
        let distractors: BTreeSet<&str> =
            self.distractor_vocab.iter().map(String::as_str).collect();
        let triggers: BTreeSet<&str> = self.triggers.iter().map(String::as_str).collect();
        if let Some(w) = triggers.intersection(&distractors).next() {
            return fail(format!("{w:?} is both a trigger and a distractor"));
        }
        if self.descriptions.is_empty() {
            return fail("spec declares no descriptions".into());
        }
        let mut desc_names = BTreeSet::new();
        for d in &self.descriptions {
            if !desc_names.insert(d.name.as_str()) {
                return fail(format!("duplicate description name {:?}", d.name));
            }
            if d.words.is_empty() {
                return fail(format!("description {:?} has no words", d.name));
            }
            for w in &d.words {
                if !self.tags.contains_key(w) {
                    return fail(format!(
                        "description {:?} uses untagged word {w:?}",
                        d.name
                    ));
                }
                if distractors.contains(w.as_str()) || triggers.contains(w.as_str()) {
                    return fail(format!(
                        "description word {w:?} collides with a trigger or distractor"
                    ));
                }
            }
        }
        if self.rules.is_empty() {
            return fail("spec declares no rules".into());
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if !triggers.contains(rule.trigger.as_str()) {
                return fail(format!(
                    "rule {i} uses undeclared trigger {:?}",
                    rule.trigger
                ));
            }
            if rule.descriptions.is_empty() {
                return fail(format!("rule {i} names no descriptions"));
            }
            for name in &rule.descriptions {
                if !desc_names.contains(name.as_str()) {
                    return fail(format!(
                        "rule {i} references unknown description {name:?}"
                    ));
                }
            }
            if !(rule.weight > 0.0) {
                return fail(format!("rule {i} needs a positive weight"));
            }
        }
        // every word sharing an offset must agree on the parent
        let mut parents: BTreeMap<SynsetId, Option<SynsetId>> = BTreeMap::new();
        for (word, tag) in &self.tags {
            if let Some(prev) = parents.insert(tag.offset, tag.parent) {
                if prev != tag.parent {
                    return fail(format!(
                        "word {word:?} assigns offset {} a conflicting parent",
                        tag.offset
                    ));
                }
            }
        }
        self.taxonomy()?;
        Ok(())
    }

    /// The taxonomy implied by the lexicon: one node per distinct offset,
    /// with auto-created root nodes for parents that are not themselves
    /// tag offsets.
    pub fn taxonomy(&self) -> Result<Taxonomy> {
        let mut nodes: BTreeMap<SynsetId, (Option<SynsetId>, BTreeSet<String>)> = BTreeMap::new();
        for (word, tag) in &self.tags {
            let node = nodes.entry(tag.offset).or_insert((tag.parent, BTreeSet::new()));
            node.1.insert(word.clone());
        }
        let parents: Vec<SynsetId> = nodes.values().filter_map(|(p, _)| *p).collect();
        for p in parents {
            nodes
                .entry(p)
                .or_insert((None, BTreeSet::from([format!("node{p}")])));
        }
        Taxonomy::from_nodes(
            nodes
                .into_iter()
                .map(|(offset, (parent, words))| (offset, parent, words.into_iter().collect())),
        )
    }

    fn description(&self, name: &str) -> &DescriptionSpec {
        self.descriptions
            .iter()
            .find(|d| d.name == name)
            .expect("validated description name")
    }

    fn word_tags(&self, words: &[String], mode: TagMode) -> BTreeSet<SynsetId> {
        let mut out = BTreeSet::new();
        for w in words {
            let tag = &self.tags[w];
            out.insert(tag.offset);
            if mode == TagMode::WordParent {
                if let Some(p) = tag.parent {
                    out.insert(p);
                }
            }
        }
        out
    }

    /// Ground truth: per rule, the atoms every admissible description
    /// carries (the intersection across the rule's descriptions).
    pub fn planted_rules(&self) -> Vec<PlantedRule> {
        self.rules
            .iter()
            .map(|rule| {
                let mut wo: Option<BTreeSet<SynsetId>> = None;
                let mut wp: Option<BTreeSet<SynsetId>> = None;
                for name in &rule.descriptions {
                    let d = self.description(name);
                    let dwo = self.word_tags(&d.words, TagMode::WordOnly);
                    let dwp = self.word_tags(&d.words, TagMode::WordParent);
                    wo = Some(match wo {
                        None => dwo,
                        Some(acc) => acc.intersection(&dwo).copied().collect(),
                    });
                    wp = Some(match wp {
                        None => dwp,
                        Some(acc) => acc.intersection(&dwp).copied().collect(),
                    });
                }
                PlantedRule {
                    trigger: rule.trigger.clone(),
                    descriptions: rule.descriptions.clone(),
                    atoms_word_only: wo.unwrap_or_default(),
                    atoms_word_parent: wp.unwrap_or_default(),
                }
            })
            .collect()
    }
}

/// Verbs safe as an NP boundary directly before a planted description.
const BOUNDARY_VERBS: &[&str] = &["met", "visited", "praised", "quoted"];

/// Generates the corpus; a pure function of (spec, seed).
pub fn synth_corpus(spec: &SynthSpec, seed: u64) -> Result<(Corpus, Vec<PlantedRule>)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let abbrevs = AbbrevSet::default();
    let weights: Vec<f64> = spec.rules.iter().map(|r| r.weight).collect();
    let total_weight: f64 = weights.iter().sum();

    let mut documents = Vec::with_capacity(spec.n_documents);
    for doc_idx in 0..spec.n_documents {
        let n_mentions = rng.random_range(1..=3);
        let n_distractors = rng.random_range(1..=2);
        let mut sentences = Vec::new();
        for _ in 0..n_distractors {
            sentences.push(distractor_sentence(spec, &mut rng));
        }
        for _ in 0..n_mentions {
            sentences.push(mention_sentence(spec, &weights, total_weight, &mut rng));
        }
        // deterministic interleave
        for i in (1..sentences.len()).rev() {
            let j = rng.random_range(0..=i);
            sentences.swap(i, j);
        }
        let raw = sentences.join(" ");
        documents.push(Document::new(format!("doc{doc_idx:05}"), raw, &abbrevs));
    }
    Ok((Corpus { documents }, spec.planted_rules()))
}

fn pick<'a>(words: &'a [String], rng: &mut ChaCha8Rng) -> &'a str {
    words.choose(rng).expect("non-empty vocabulary")
}

fn distractor_sentence(spec: &SynthSpec, rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(4..=8);
    let words: Vec<&str> = (0..n).map(|_| pick(&spec.distractor_vocab, rng)).collect();
    format!("{} .", words.join(" "))
}

fn mention_sentence(
    spec: &SynthSpec,
    weights: &[f64],
    total_weight: f64,
    rng: &mut ChaCha8Rng,
) -> String {
    let mut ticket = rng.random_range(0.0..total_weight);
    let mut rule_idx = 0usize;
    for (i, w) in weights.iter().enumerate() {
        if ticket < *w {
            rule_idx = i;
            break;
        }
        ticket -= w;
    }
    let rule = &spec.rules[rule_idx];
    let desc_name = rule
        .descriptions
        .choose(rng)
        .expect("validated rule descriptions");
    let description = spec.description(desc_name).words.join(" ");
    let entity = spec.entities[rng.random_range(0..spec.entities.len())].as_str();
    let boundary = if rng.random_bool(0.5) {
        ","
    } else {
        BOUNDARY_VERBS[rng.random_range(0..BOUNDARY_VERBS.len())]
    };
    let f1 = pick(&spec.distractor_vocab, rng);
    let f2 = pick(&spec.distractor_vocab, rng);
    let f3 = pick(&spec.distractor_vocab, rng);
    let f4 = pick(&spec.distractor_vocab, rng);
    let trigger = &rule.trigger;
    if rng.random_bool(0.5) {
        format!("{f1} {f2} {trigger} {boundary} {description} {entity} {f3} {f4} .")
    } else {
        format!("{f1} {f2} {boundary} {description} {entity} {trigger} {f3} {f4} .")
    }
}

/// Writes the ground-truth rules as TSV: trigger, description names,
/// word-only atoms, word+parent atoms.
pub fn save_planted_rules(rules: &[PlantedRule], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for r in rules {
        let wo: Vec<String> = r.atoms_word_only.iter().map(|s| s.to_string()).collect();
        let wp: Vec<String> = r.atoms_word_parent.iter().map(|s| s.to_string()).collect();
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            r.trigger,
            r.descriptions.join(","),
            wo.join(" "),
            wp.join(" ")
        ));
    }
    std::fs::write(path, out).map_err(|e| LexError::io(path, e))
}
